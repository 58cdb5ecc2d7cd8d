from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from app.errors import DimensionMismatchError, ErrorMessages, InvalidArgumentError

WORD_BITS = 64


def word_count(length: int) -> int:
    return (length + WORD_BITS - 1) // WORD_BITS


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """
    Pack ±1 codes into little-endian uint64 words (+1 -> 1, -1 -> 0).

    Accepts a single code of shape (L,) or a batch of shape (n, L); bit j of
    word w holds position 64*w + j and pad bits stay zero.
    """
    bits = np.asarray(bits)
    single = bits.ndim == 1
    batch = np.atleast_2d(bits)
    n, length = batch.shape
    padded = np.zeros((n, word_count(length) * WORD_BITS), dtype=np.uint8)
    padded[:, :length] = batch > 0
    packed_bytes = np.packbits(padded, axis=1, bitorder="little")
    words = np.ascontiguousarray(packed_bytes).view("<u8").astype(np.uint64)
    return words[0] if single else words


def unpack_bits(words: np.ndarray, length: int) -> np.ndarray:
    """Inverse of ``pack_bits``: returns int8 codes in {-1, +1}."""
    words = np.asarray(words, dtype=np.uint64)
    single = words.ndim == 1
    batch = np.atleast_2d(words).astype("<u8")
    raw = np.unpackbits(np.ascontiguousarray(batch).view(np.uint8), axis=1, bitorder="little")
    codes = np.where(raw[:, :length] == 1, 1, -1).astype(np.int8)
    return codes[0] if single else codes


@dataclass(frozen=True, eq=False)
class BinaryCode:
    """An L-bit code in {-1, +1}^L together with its packed-word form."""

    bits: np.ndarray
    packed: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        bits = np.asarray(self.bits)
        if bits.ndim != 1 or bits.size == 0 or not np.all(np.abs(bits) == 1):
            raise InvalidArgumentError(ErrorMessages.Optimizer.NON_BINARY_CODES, "bits")
        bits = bits.astype(np.int8)
        packed = pack_bits(bits)
        if self.packed is not None and not np.array_equal(np.asarray(self.packed, dtype=np.uint64), packed):
            raise InvalidArgumentError("Packed words disagree with the bit vector", "packed")
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "packed", packed)

    @classmethod
    def from_packed(cls, words: np.ndarray, length: int) -> "BinaryCode":
        words = np.asarray(words, dtype=np.uint64)
        if words.shape != (word_count(length),):
            raise DimensionMismatchError("BinaryCode.from_packed", word_count(length), words.shape)
        return cls(unpack_bits(words, length))

    @property
    def length(self) -> int:
        return int(self.bits.shape[0])

    def complement(self) -> "BinaryCode":
        return BinaryCode(-self.bits)

    def to_hex(self) -> str:
        return "".join(f"{int(word):016x}" for word in self.packed)

    @classmethod
    def from_hex(cls, text: str, length: int) -> "BinaryCode":
        n_words = word_count(length)
        if len(text) != 16 * n_words:
            raise InvalidArgumentError(
                f"Hex code must have {16 * n_words} digits for L={length}", "code", text
            )
        words = np.array([int(text[16 * w:16 * (w + 1)], 16) for w in range(n_words)], dtype=np.uint64)
        return cls.from_packed(words, length)


@dataclass(frozen=True, eq=False)
class HammingIndex:
    """Packed codes (n, ceil(L/64)) with one opaque id per code."""

    packed: np.ndarray
    ids: Tuple[str, ...]
    length: int

    def __post_init__(self) -> None:
        packed = np.asarray(self.packed, dtype=np.uint64).reshape(-1, word_count(self.length))
        ids = tuple(str(i) for i in self.ids)
        if packed.shape[0] != len(ids):
            raise InvalidArgumentError(ErrorMessages.Index.ID_COUNT_MISMATCH, "ids", len(ids))
        object.__setattr__(self, "packed", packed)
        object.__setattr__(self, "ids", ids)

    @classmethod
    def from_codes(cls, codes: Sequence[BinaryCode], ids: Sequence[str], length: int) -> "HammingIndex":
        for code in codes:
            if code.length != length:
                raise DimensionMismatchError("HammingIndex.from_codes", length, code.length)
        packed = (
            np.stack([code.packed for code in codes]) if codes
            else np.zeros((0, word_count(length)), dtype=np.uint64)
        )
        return cls(packed, tuple(ids), length)

    @classmethod
    def from_bits(cls, bits: np.ndarray, ids: Sequence[str]) -> "HammingIndex":
        """Build from a ±1 matrix of shape (n, L)."""
        bits = np.atleast_2d(np.asarray(bits))
        return cls(pack_bits(bits), tuple(ids), int(bits.shape[1]))

    def __len__(self) -> int:
        return len(self.ids)

    def code(self, i: int) -> BinaryCode:
        return BinaryCode.from_packed(self.packed[i], self.length)

    def bits(self) -> np.ndarray:
        return unpack_bits(self.packed, self.length).reshape(len(self), self.length)
