"""
Text formats for local descriptors and BOVW dictionaries.

Descriptor file::

    MFDH-DESC v1 dim=<d>
    <sample_id>\t<v1>,<v2>,...,<vd>

One record per local descriptor; records of one sample need not be
contiguous. Dictionaries are CSV with one center per row.
"""

import logging
import re
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np

from app.errors import ErrorMessages, FileFormatError
from app.models.descriptor import DescriptorSet, Dictionary

logger = logging.getLogger(__name__)

DESCRIPTOR_HEADER = re.compile(r"^MFDH-DESC v1 dim=(\d+)$")


def _format_vector(values: np.ndarray) -> str:
    return ",".join(repr(float(v)) for v in values)


def parse_vector(text: str, dim: int, path: Path, line_number: int) -> np.ndarray:
    try:
        vector = np.asarray(text.split(","), dtype=np.float64)
    except ValueError as exc:
        raise FileFormatError(
            ErrorMessages.FileFormat.BAD_RECORD.format(path=path, line=line_number),
            str(path), line_number, str(exc),
        ) from exc
    if vector.shape != (dim,):
        raise FileFormatError(
            ErrorMessages.FileFormat.BAD_RECORD.format(path=path, line=line_number),
            str(path), line_number, f"expected {dim} values, got {vector.shape[0]}",
        )
    return vector


def read_descriptor_file(path: Path) -> Tuple[int, List[DescriptorSet]]:
    """Read every sample of a descriptor file, in order of first appearance."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        header = handle.readline().rstrip("\n")
        match = DESCRIPTOR_HEADER.match(header)
        if not match:
            raise FileFormatError(
                ErrorMessages.FileFormat.BAD_HEADER.format(path=path, expected="MFDH-DESC v1 dim=<d>"),
                str(path), 1, "bad header",
            )
        dim = int(match.group(1))
        grouped: Dict[str, List[np.ndarray]] = {}
        for line_number, line in enumerate(handle, start=2):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            sample_id, sep, values = line.partition("\t")
            if not sep or not sample_id:
                raise FileFormatError(
                    ErrorMessages.FileFormat.BAD_RECORD.format(path=path, line=line_number),
                    str(path), line_number, "expected '<sample_id>\\t<values>'",
                )
            grouped.setdefault(sample_id, []).append(parse_vector(values, dim, path, line_number))

    sets = [DescriptorSet(sample_id, np.vstack(vectors)) for sample_id, vectors in grouped.items()]
    logger.debug("Descriptor file read", extra={"path": str(path), "samples": len(sets), "dim": dim})
    return dim, sets


def write_descriptor_file(path: Path, sets: Sequence[DescriptorSet], dim: int) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(f"MFDH-DESC v1 dim={dim}\n")
        for descriptor_set in sets:
            for vector in descriptor_set.vectors:
                handle.write(f"{descriptor_set.sample_id}\t{_format_vector(vector)}\n")


def write_dictionary_csv(path: Path, dictionary: Dictionary) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for center in dictionary.centers:
            handle.write(_format_vector(center) + "\n")


def read_dictionary_csv(path: Path) -> Dictionary:
    path = Path(path)
    rows = []
    with path.open("r", encoding="utf-8") as handle:
        lines = [line.rstrip("\n") for line in handle if line.strip()]
    if not lines:
        raise FileFormatError(
            ErrorMessages.FileFormat.BAD_RECORD.format(path=path, line=1), str(path), 1, "empty dictionary"
        )
    dim = len(lines[0].split(","))
    for line_number, line in enumerate(lines, start=1):
        rows.append(parse_vector(line, dim, path, line_number))
    return Dictionary(np.vstack(rows))
