"""
Format binaire des points de sauvegarde

Disposition: magic ``EQSY``, version (uint32 LE), longueur de l'en-tête (uint32 LE),
en-tête JSON UTF-8, puis chaque tableau en float64 little-endian, ordre ligne,
dans l'ordre des couches. Le rechargement est bit à bit identique.
"""

import json
import struct
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel

from src.core.exceptions import ShapeMismatchError
from src.core.logging import get_logger

from .heads import HeadKind, HeadSpec
from .models import EquivariantNetwork, MlpModel
from .params import Activation, DenseLayer, EmlpParams, EquivariantLayer, MlpParams

logger = get_logger(__name__)

MAGIC = b"EQSY"
FORMAT_VERSION = 1
_PREFIX = struct.Struct("<4sII")

Model = Union[MlpModel, EquivariantNetwork]


class ArrayEntry(BaseModel):
    name: str
    shape: List[int]


class CheckpointHeader(BaseModel):
    model: Literal["mlp", "equivariant"]
    n: Optional[int] = None
    d: int
    widths: List[int]
    activation: Activation
    final_linear: bool
    head: Optional[HeadKind] = None
    mixing: Optional[List[bool]] = None
    arrays: List[ArrayEntry]


def _header_for(model: Model) -> CheckpointHeader:
    arrays = [ArrayEntry(name=name, shape=list(array.shape)) for name, array in model.params.named_arrays()]
    if isinstance(model, MlpModel):
        return CheckpointHeader(
            model="mlp",
            d=model.params.widths[0],
            widths=model.params.widths,
            activation=model.params.activation,
            final_linear=model.params.final_linear,
            arrays=arrays,
        )
    return CheckpointHeader(
        model="equivariant",
        n=model.n,
        d=model.d,
        widths=model.params.widths,
        activation=model.params.activation,
        final_linear=model.params.final_linear,
        head=model.head.kind if model.head is not None else None,
        mixing=list(model.params.mixing),
        arrays=arrays,
    )


def dump_checkpoint(model: Model) -> bytes:
    header = _header_for(model)
    header_bytes = json.dumps(header.model_dump(mode="json"), sort_keys=True).encode("utf-8")
    chunks = [_PREFIX.pack(MAGIC, FORMAT_VERSION, len(header_bytes)), header_bytes]
    for _, array in model.params.named_arrays():
        chunks.append(np.ascontiguousarray(array, dtype="<f8").tobytes())
    return b"".join(chunks)


def save_checkpoint(model: Model, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dump_checkpoint(model))
    logger.info("checkpoint_saved", path=str(path))
    return path


def _read_arrays(payload: bytes, offset: int, entries: List[ArrayEntry]) -> Tuple[List[np.ndarray], int]:
    arrays = []
    for entry in entries:
        count = int(np.prod(entry.shape)) if entry.shape else 1
        size = 8 * count
        if offset + size > len(payload):
            raise ShapeMismatchError(f"checkpoint truncated while reading {entry.name}")
        array = np.frombuffer(payload, dtype="<f8", count=count, offset=offset).reshape(entry.shape)
        arrays.append(array.astype(np.float64))
        offset += size
    return arrays, offset


def parse_checkpoint(payload: bytes) -> Model:
    if len(payload) < _PREFIX.size:
        raise ValueError("checkpoint too short")
    magic, version, header_len = _PREFIX.unpack_from(payload, 0)
    if magic != MAGIC:
        raise ValueError(f"bad checkpoint magic {magic!r}")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported checkpoint version {version}")
    start = _PREFIX.size
    header = CheckpointHeader.model_validate(json.loads(payload[start:start + header_len].decode("utf-8")))
    arrays, end = _read_arrays(payload, start + header_len, header.arrays)
    if end != len(payload):
        raise ShapeMismatchError(f"{len(payload) - end} trailing bytes in checkpoint")

    if header.model == "mlp":
        layers = [DenseLayer(arrays[2 * k], arrays[2 * k + 1]) for k in range(len(arrays) // 2)]
        return MlpModel(MlpParams(layers, header.activation, header.final_linear))
    layers = [
        EquivariantLayer(arrays[3 * k], arrays[3 * k + 1], arrays[3 * k + 2]) for k in range(len(arrays) // 3)
    ]
    params = EmlpParams(layers, header.activation, header.final_linear, tuple(header.mixing or []) or None)
    head = HeadSpec(header.head) if header.head is not None else None
    return EquivariantNetwork(params, head, header.n)


def load_checkpoint(path: Union[str, Path]) -> Model:
    return parse_checkpoint(Path(path).read_bytes())
