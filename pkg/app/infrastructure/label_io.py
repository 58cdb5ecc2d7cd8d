"""
Label file::

    MFDH-LABELS v1 c=<c>
    <sample_id>\t<j1>,<j2>,...

Label indices are 0-based class indices.
"""

import re
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

from app.errors import ErrorMessages, FileFormatError
from app.models.labels import LabelMatrix

LABEL_HEADER = re.compile(r"^MFDH-LABELS v1 c=(\d+)$")


def read_label_file(path: Path) -> Tuple[List[str], Dict[str, List[int]], int]:
    """Return ids in file order, each id's label indices, and the class count."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        header = handle.readline().rstrip("\n")
        match = LABEL_HEADER.match(header)
        if not match:
            raise FileFormatError(
                ErrorMessages.FileFormat.BAD_HEADER.format(path=path, expected="MFDH-LABELS v1 c=<c>"),
                str(path), 1, "bad header",
            )
        n_classes = int(match.group(1))
        ids: List[str] = []
        labels: Dict[str, List[int]] = {}
        for line_number, line in enumerate(handle, start=2):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            sample_id, sep, values = line.partition("\t")
            try:
                indices = [int(v) for v in values.split(",")] if sep else []
            except ValueError:
                indices = []
            if not sample_id or not indices or sample_id in labels:
                raise FileFormatError(
                    ErrorMessages.FileFormat.BAD_RECORD.format(path=path, line=line_number),
                    str(path), line_number, "expected one '<sample_id>\\t<j1>,<j2>' record per sample",
                )
            ids.append(sample_id)
            labels[sample_id] = indices
    return ids, labels, n_classes


def labels_for(path: Path, sample_ids: Sequence[str]) -> LabelMatrix:
    """Label matrix whose column i belongs to ``sample_ids[i]``."""
    _, labels, n_classes = read_label_file(path)
    missing = [sample_id for sample_id in sample_ids if sample_id not in labels]
    if missing:
        raise FileFormatError(
            ErrorMessages.FileFormat.UNKNOWN_SAMPLE.format(sample_id=missing[0], path=path),
            str(path), None, f"{len(missing)} sample(s) without labels",
        )
    return LabelMatrix.from_indices([labels[sample_id] for sample_id in sample_ids], n_classes)


def write_label_file(path: Path, sample_ids: Sequence[str], labels: Sequence[Sequence[int]], n_classes: int) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(f"MFDH-LABELS v1 c={n_classes}\n")
        for sample_id, indices in zip(sample_ids, labels):
            handle.write(f"{sample_id}\t{','.join(str(j) for j in indices)}\n")
