"""Experiment harness: dataset generation, write load, read load, reports."""

from .dataset import CertificateDataset, generate_dataset, load_dataset
from .readload import ReadReport, ReadRow, run_read_load
from .report import emit_report, parse_report, render_report
from .writeload import WriteReport, cert_transaction, run_write_load, summarize_write

__all__ = [
    "CertificateDataset",
    "ReadReport",
    "ReadRow",
    "WriteReport",
    "cert_transaction",
    "emit_report",
    "generate_dataset",
    "load_dataset",
    "parse_report",
    "render_report",
    "run_read_load",
    "run_write_load",
    "summarize_write",
]
