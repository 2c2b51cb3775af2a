"""Deterministic dummy-certificate datasets.

Same (count, seed) always produces a byte-identical JSONL file: record
fields come from seeded pools, and certNo is a zero-padded sequence
number plus a seed-derived suffix, so numbers are unique within a file
and files from different seeds do not collide.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from ..types import CertificateRecord

_FIRST = [
    "Aisyah", "Ahmad", "Chen", "Devi", "Farid", "Hana", "Imran", "Kavita",
    "Liang", "Mei", "Nurul", "Omar", "Priya", "Rahman", "Siti", "Tan",
    "Umar", "Wei", "Yusof", "Zara",
]
_LAST = [
    "Abdullah", "Bakar", "Cheong", "Daud", "Hashim", "Ibrahim", "Kumar",
    "Lim", "Mohamed", "Ng", "Osman", "Rahim", "Salleh", "Tay", "Wong", "Zain",
]
_PROGRAMMES = [
    "Diploma in Computer Science",
    "Diploma in Business Administration",
    "Bachelor of Information Technology",
    "Bachelor of Accounting",
    "Diploma in Electrical Engineering",
    "Bachelor of Communication",
]
_CONVO_DATES = ["2023-10-14", "2023-10-15", "2024-10-12", "2024-10-13"]


@dataclass(frozen=True)
class CertificateDataset:
    records: tuple[CertificateRecord, ...]
    seed: int
    file: Path | None = None


def _make_record(i: int, suffix: str, rng: random.Random) -> CertificateRecord:
    year = rng.choice([2022, 2023, 2024])
    return CertificateRecord(
        certNo=f"{i:06d}-{suffix}",
        name=f"{rng.choice(_FIRST)} {rng.choice(_LAST)}",
        ic=f"{rng.randrange(70, 100):02d}{rng.randrange(1, 13):02d}"
        f"{rng.randrange(1, 29):02d}-{rng.randrange(1, 15):02d}-{rng.randrange(10000):04d}",
        studentId=f"S{rng.randrange(10**7):07d}",
        programme=rng.choice(_PROGRAMMES),
        convoDate=rng.choice(_CONVO_DATES),
        semesterFinish=f"{year}-{rng.choice([1, 2])}",
    )


def generate_dataset(count: int, seed: int, out: str | Path | None = None) -> CertificateDataset:
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = random.Random(seed)
    suffix = f"{rng.randrange(16**4):04X}"
    records = tuple(_make_record(i, suffix, rng) for i in range(1, count + 1))
    path = None
    if out is not None:
        path = Path(out)
        with open(path, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(record_to_json(rec))
                fh.write("\n")
    return CertificateDataset(records, seed, path)


def record_to_json(rec: CertificateRecord) -> str:
    return json.dumps(
        {
            "certNo": rec.certNo,
            "name": rec.name,
            "ic": rec.ic,
            "studentId": rec.studentId,
            "programme": rec.programme,
            "convoDate": rec.convoDate,
            "semesterFinish": rec.semesterFinish,
        },
        ensure_ascii=False,
    )


def load_dataset(path: str | Path) -> CertificateDataset:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            doc = json.loads(line)
            records.append(
                CertificateRecord(
                    certNo=doc["certNo"],
                    name=doc["name"],
                    ic=doc["ic"],
                    studentId=doc["studentId"],
                    programme=doc["programme"],
                    convoDate=doc["convoDate"],
                    semesterFinish=doc["semesterFinish"],
                )
            )
    return CertificateDataset(tuple(records), seed=-1, file=Path(path))
