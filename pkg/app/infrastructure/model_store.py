"""
Versioned binary model file.

Layout, all integers little-endian int64 and all reals little-endian float64:

    b"MFDH-MODEL v1\\n"
    L, D, c, d_1, d_2, d_3, n
    P_img (L x D), P_txt (L x D), W (L x c)           row-major
    B packed per sample: n x ceil(L/64) uint64 words, bit 1 = +1
    image anchors, text anchors                       (ndim, shape, data) per array
    image dictionary, text dictionary                 (ndim, shape, data)
    eps_spd
    objective trace                                   (length, values)
    metadata: UTF-8 JSON (kernel settings, config echo) prefixed by its byte length

Nothing time-dependent is written, so saving the same model twice gives the
same bytes.
"""

import io
import json
import logging
import struct
from pathlib import Path
from typing import BinaryIO, Tuple

import numpy as np

from app.errors import ErrorMessages, FileFormatError, InvalidArgumentError
from app.models.codes import pack_bits, unpack_bits, word_count
from app.models.descriptor import Dictionary
from app.models.kernel import AnchorSet
from app.models.state import HashingModel, TrainState
from app.schemas.config import KernelSettings

logger = logging.getLogger(__name__)

MAGIC = b"MFDH-MODEL v1\n"
_INT = struct.Struct("<q")
_DIMS = struct.Struct("<7q")
_REAL = struct.Struct("<d")


def _write_int(stream: BinaryIO, value: int) -> None:
    stream.write(_INT.pack(int(value)))


def _write_matrix(stream: BinaryIO, matrix: np.ndarray) -> None:
    stream.write(np.ascontiguousarray(matrix, dtype="<f8").tobytes())


def _write_array(stream: BinaryIO, array: np.ndarray) -> None:
    _write_int(stream, array.ndim)
    for extent in array.shape:
        _write_int(stream, extent)
    _write_matrix(stream, array)


class _Reader:
    def __init__(self, data: bytes, path: Path):
        self.stream = io.BytesIO(data)
        self.path = path

    def take(self, size: int) -> bytes:
        chunk = self.stream.read(size)
        if len(chunk) != size:
            raise FileFormatError(
                ErrorMessages.FileFormat.BAD_RECORD.format(path=self.path, line=0),
                str(self.path), None, "truncated model file",
            )
        return chunk

    def int(self) -> int:
        return _INT.unpack(self.take(_INT.size))[0]

    def real(self) -> float:
        return _REAL.unpack(self.take(_REAL.size))[0]

    def matrix(self, shape: Tuple[int, ...]) -> np.ndarray:
        count = int(np.prod(shape)) if shape else 1
        return np.frombuffer(self.take(8 * count), dtype="<f8").astype(np.float64).reshape(shape)

    def array(self) -> np.ndarray:
        ndim = self.int()
        return self.matrix(tuple(self.int() for _ in range(ndim)))

    def at_end(self) -> bool:
        return self.stream.read(1) == b""


def _require_anchors(state: TrainState) -> Tuple[AnchorSet, AnchorSet]:
    if state.image_anchors is None or state.text_anchors is None:
        raise InvalidArgumentError("Only a state with anchors for both modalities can be saved", "state")
    return state.image_anchors, state.text_anchors


def serialize_model(model: HashingModel) -> bytes:
    state = model.state
    image_anchors, text_anchors = _require_anchors(state)
    if image_anchors.sizes != text_anchors.sizes:
        raise InvalidArgumentError("Image and text anchors must have the same per-view sizes", "anchors")
    d1, d2, d3 = image_anchors.sizes
    L, D, c, n = state.code_length, image_anchors.total, state.n_classes, state.n_samples

    stream = io.BytesIO()
    stream.write(MAGIC)
    stream.write(_DIMS.pack(L, D, c, d1, d2, d3, n))
    for matrix in (state.P_img, state.P_txt, state.W):
        _write_matrix(stream, matrix)
    stream.write(np.ascontiguousarray(pack_bits(state.B.T), dtype="<u8").tobytes())
    for anchors in (image_anchors, text_anchors):
        for block in (anchors.histogram, anchors.mean, anchors.covariance_log):
            _write_array(stream, block)
    for dictionary in (model.image_dictionary, model.text_dictionary):
        _write_array(stream, dictionary.centers)
    stream.write(_REAL.pack(model.eps_spd))
    _write_int(stream, len(state.objective_trace))
    _write_matrix(stream, np.asarray(state.objective_trace, dtype=np.float64))

    kernel = state.kernel or KernelSettings()
    metadata = json.dumps(
        {"kernel": kernel.model_dump(mode="json"), "echo": model.echo}, sort_keys=True
    ).encode("utf-8")
    _write_int(stream, len(metadata))
    stream.write(metadata)
    return stream.getvalue()


def deserialize_model(data: bytes, path: Path = Path("<memory>")) -> HashingModel:
    if not data.startswith(MAGIC):
        raise FileFormatError(
            ErrorMessages.FileFormat.BAD_HEADER.format(path=path, expected=MAGIC.decode().strip()),
            str(path), 1, "bad magic",
        )
    reader = _Reader(data[len(MAGIC):], path)
    L, D, c, d1, d2, d3, n = _DIMS.unpack(reader.take(_DIMS.size))
    if D != d1 + d2 + d3:
        raise FileFormatError(
            ErrorMessages.FileFormat.BAD_RECORD.format(path=path, line=0), str(path), None,
            "D does not equal the sum of anchor counts",
        )

    P_img = reader.matrix((L, D))
    P_txt = reader.matrix((L, D))
    W = reader.matrix((L, c))
    words = np.frombuffer(reader.take(8 * n * word_count(L)), dtype="<u8").reshape(n, word_count(L))
    B = unpack_bits(words, L).reshape(n, L).T
    image_anchors = AnchorSet(reader.array(), reader.array(), reader.array())
    text_anchors = AnchorSet(reader.array(), reader.array(), reader.array())
    image_dictionary = Dictionary(reader.array())
    text_dictionary = Dictionary(reader.array())
    eps_spd = reader.real()
    trace = reader.matrix((reader.int(),))
    metadata = json.loads(reader.take(reader.int()).decode("utf-8"))
    if not reader.at_end():
        raise FileFormatError(
            ErrorMessages.FileFormat.BAD_RECORD.format(path=path, line=0), str(path), None,
            "trailing bytes after metadata",
        )

    state = TrainState(
        B=B,
        P_img=P_img,
        P_txt=P_txt,
        W=W,
        objective_trace=tuple(trace.tolist()),
        image_anchors=image_anchors,
        text_anchors=text_anchors,
        kernel=KernelSettings.model_validate(metadata["kernel"]),
    )
    return HashingModel(state, image_dictionary, text_dictionary, eps_spd, metadata["echo"])


def save_model(path: Path, model: HashingModel) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = serialize_model(model)
    path.write_bytes(data)
    logger.info("Model saved", extra={"path": str(path), "bytes": len(data)})


def load_model(path: Path) -> HashingModel:
    path = Path(path)
    return deserialize_model(path.read_bytes(), path)
