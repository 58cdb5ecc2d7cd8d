"""
Code database file::

    MFDH-CODES v1 L=<L> n=<n>
    <id>\t<hex-packed-code>

Each packed 64-bit word is written as 16 lowercase hex digits.
"""

import re
from pathlib import Path

import numpy as np

from app.errors import ErrorMessages, FileFormatError, InvalidArgumentError
from app.models.codes import BinaryCode, HammingIndex, word_count

CODES_HEADER = re.compile(r"^MFDH-CODES v1 L=(\d+) n=(\d+)$")


def write_codes(path: Path, index: HammingIndex) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(f"MFDH-CODES v1 L={index.length} n={len(index)}\n")
        for sample_id, words in zip(index.ids, index.packed):
            handle.write(sample_id + "\t" + "".join(f"{int(word):016x}" for word in words) + "\n")


def read_codes(path: Path) -> HammingIndex:
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        header = handle.readline().rstrip("\n")
        match = CODES_HEADER.match(header)
        if not match:
            raise FileFormatError(
                ErrorMessages.FileFormat.BAD_HEADER.format(path=path, expected="MFDH-CODES v1 L=<L> n=<n>"),
                str(path), 1, "bad header",
            )
        length, count = int(match.group(1)), int(match.group(2))
        ids, rows = [], []
        for line_number, line in enumerate(handle, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            sample_id, sep, text = line.partition("\t")
            try:
                if not sep:
                    raise InvalidArgumentError("missing tab", "record")
                rows.append(BinaryCode.from_hex(text, length).packed)
            except (InvalidArgumentError, ValueError) as exc:
                raise FileFormatError(
                    ErrorMessages.FileFormat.BAD_RECORD.format(path=path, line=line_number),
                    str(path), line_number, str(exc),
                ) from exc
            ids.append(sample_id)

    if len(ids) != count:
        raise FileFormatError(
            ErrorMessages.FileFormat.BAD_HEADER.format(path=path, expected=f"n={len(ids)}"),
            str(path), 1, f"header declares {count} codes, found {len(ids)}",
        )
    packed = np.stack(rows) if rows else np.zeros((0, word_count(length)), dtype=np.uint64)
    return HammingIndex(packed, tuple(ids), length)
