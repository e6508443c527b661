"""Portable release format for private sketches.

Layout: magic ``DPSK``, version u16 LE, JSON header length u32 LE, the JSON
header, then ``r * (d+1)`` float64 LE sketch entries row-major, then ``r``
float64 LE weights iff the method is ``l1-multilevel``. Round-trips are
bit-exact so solvers in any language read identical sketches.

The header carries only public calibration metadata. Seeds, bucket/sign
plans, and raw data rows must never enter this file; publishing a seed
voids the privacy guarantee.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParameterError, SketchFileError
from .linalg import as_matrix

MAGIC = b"DPSK"
VERSION = 1

METHODS = ("jl", "countsketch-l2", "l1-multilevel", "l1-illustration")
_FORBIDDEN_META_KEYS = ("seed", "plan", "bucket_of", "sign_of")


@dataclass(frozen=True)
class SketchFile:
    """In-memory form of a serialized sketch release."""

    method: str
    matrix: np.ndarray
    epsilon: float
    delta: float
    B: float
    meta: dict = field(default_factory=dict)
    weights: "np.ndarray | None" = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(f"unknown method {self.method!r}")
        object.__setattr__(self, "matrix", as_matrix(self.matrix))
        for key in self.meta:
            if key in _FORBIDDEN_META_KEYS:
                raise ParameterError(f"refusing to serialize {key!r} in a release header")
        if self.method == "l1-multilevel":
            if self.weights is None:
                raise ParameterError("l1-multilevel releases require a weight vector")
            w = np.asarray(self.weights, dtype=float).reshape(-1)
            if w.shape[0] != self.matrix.shape[0]:
                raise ParameterError("weights length must match sketch rows")
            object.__setattr__(self, "weights", w)
        elif self.weights is not None:
            raise ParameterError(f"method {self.method!r} does not carry weights")

    @property
    def r(self) -> int:
        return self.matrix.shape[0]

    @property
    def d(self) -> int:
        return self.matrix.shape[1] - 1


def write_sketch(path, sf: SketchFile) -> None:
    header = {
        "method": sf.method,
        "r": sf.r,
        "d": sf.d,
        "epsilon": sf.epsilon,
        "delta": sf.delta,
        "B": sf.B,
        "meta": sf.meta,
        "has_weights": sf.weights is not None,
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    with Path(path).open("wb") as handle:
        handle.write(MAGIC)
        handle.write(struct.pack("<H", VERSION))
        handle.write(struct.pack("<I", len(blob)))
        handle.write(blob)
        handle.write(np.ascontiguousarray(sf.matrix, dtype="<f8").tobytes())
        if sf.weights is not None:
            handle.write(np.ascontiguousarray(sf.weights, dtype="<f8").tobytes())


def read_sketch(path) -> SketchFile:
    raw = Path(path).read_bytes()
    if len(raw) < 10 or raw[:4] != MAGIC:
        raise SketchFileError(f"{path}: not a sketch file (bad magic)")
    (version,) = struct.unpack("<H", raw[4:6])
    if version != VERSION:
        raise SketchFileError(f"{path}: unsupported version {version}")
    (hlen,) = struct.unpack("<I", raw[6:10])
    if len(raw) < 10 + hlen:
        raise SketchFileError(f"{path}: truncated header")
    try:
        header = json.loads(raw[10 : 10 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SketchFileError(f"{path}: corrupt header: {exc}") from exc

    try:
        method = header["method"]
        r, d = int(header["r"]), int(header["d"])
        epsilon, delta, bnd = header["epsilon"], header["delta"], header["B"]
        has_weights = bool(header["has_weights"])
        meta = header.get("meta", {})
    except KeyError as exc:
        raise SketchFileError(f"{path}: header missing field {exc}") from exc

    body = raw[10 + hlen :]
    need = r * (d + 1) * 8 + (r * 8 if has_weights else 0)
    if len(body) != need:
        raise SketchFileError(f"{path}: payload has {len(body)} bytes, expected {need}")
    matrix = np.frombuffer(body[: r * (d + 1) * 8], dtype="<f8").reshape(r, d + 1).copy()
    weights = None
    if has_weights:
        weights = np.frombuffer(body[r * (d + 1) * 8 :], dtype="<f8").copy()
    try:
        return SketchFile(
            method=method, matrix=matrix, epsilon=epsilon, delta=delta, B=bnd,
            meta=meta, weights=weights,
        )
    except ParameterError as exc:
        raise SketchFileError(f"{path}: {exc}") from exc
