"""Dense exact tensors.

A tensor is a numpy ``ndarray`` of dtype ``object`` whose entries are exact
scalars (``mpq`` or :class:`~segrank.scalar.QuadExt`).  Storage is numpy's
default C order, i.e. row-major.  Functions here never mutate their inputs.
"""

from __future__ import annotations

import json
from functools import reduce
from itertools import product
from pathlib import Path

import numpy as np
from gmpy2 import mpq

from .scalar import as_scalar, format_scalar, scalar_delta

__all__ = [
    "tensor",
    "zeros",
    "basis_vector",
    "outer_product",
    "slice_tensor",
    "mode_apply",
    "linear_combine",
    "permute_modes",
    "is_zero",
    "tensors_equal",
    "tensor_to_json",
    "tensor_from_json",
    "load_tensor",
    "save_tensor",
]

_to_scalar = np.frompyfunc(as_scalar, 1, 1)


def tensor(data) -> np.ndarray:
    """Build an exact tensor from nested lists or an array of exact values."""
    arr = np.array(data, dtype=object)
    if arr.ndim == 0:
        raise ValueError("a tensor needs at least one mode")
    if arr.size == 0:
        raise ValueError("every dimension must be at least 1")
    out = _to_scalar(arr)
    return np.asarray(out, dtype=object).reshape(arr.shape)


def zeros(shape) -> np.ndarray:
    shape = tuple(int(n) for n in shape)
    if not shape or min(shape) < 1:
        raise ValueError(f"invalid shape {shape}")
    out = np.empty(shape, dtype=object)
    out.fill(mpq(0))
    return out


def basis_vector(n: int, i: int) -> np.ndarray:
    v = zeros((n,))
    v[i] = mpq(1)
    return v


def _vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=object)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("factors must be nonempty 1-d vectors")
    return np.asarray(_to_scalar(v), dtype=object)


def outer_product(vectors) -> np.ndarray:
    """``v_1 (x) ... (x) v_d`` for nonzero vectors."""
    vs = [_vector(v) for v in vectors]
    if not vs:
        raise ValueError("need at least one vector")
    for k, v in enumerate(vs):
        if all(x == 0 for x in v):
            raise ValueError(f"factor {k} is the zero vector (not a Segre point)")
    return reduce(np.multiply.outer, vs)


def slice_tensor(T: np.ndarray, mode: int, layer: int) -> np.ndarray:
    """Fix coordinate ``layer`` in ``mode``; the result has one mode fewer."""
    if not 0 <= mode < T.ndim:
        raise IndexError(f"mode {mode} out of range for order {T.ndim}")
    if not 0 <= layer < T.shape[mode]:
        raise IndexError(f"layer {layer} out of range for dimension {T.shape[mode]}")
    return np.take(T, layer, axis=mode).copy()


def mode_apply(T: np.ndarray, mode: int, M) -> np.ndarray:
    """Multiply ``T`` by the matrix ``M`` (new_dim x dims[mode]) along ``mode``."""
    M = np.asarray(M, dtype=object)
    if not 0 <= mode < T.ndim:
        raise IndexError(f"mode {mode} out of range for order {T.ndim}")
    if M.ndim != 2 or M.shape[1] != T.shape[mode]:
        raise ValueError(
            f"matrix of shape {M.shape} does not act on dimension {T.shape[mode]}"
        )
    out = np.tensordot(M, T, axes=([1], [mode]))
    return np.moveaxis(out, 0, mode)


def linear_combine(terms) -> np.ndarray:
    """Exact ``sum(c * T for c, T in terms)``; all shapes must agree."""
    terms = list(terms)
    if not terms:
        raise ValueError("need at least one term")
    shape = terms[0][1].shape
    acc = zeros(shape)
    for c, T in terms:
        if T.shape != shape:
            raise ValueError(f"shape mismatch: {T.shape} vs {shape}")
        acc = acc + as_scalar(c) * T
    return acc


def permute_modes(T: np.ndarray, perm) -> np.ndarray:
    perm = tuple(perm)
    if sorted(perm) != list(range(T.ndim)):
        raise ValueError(f"{perm} is not a permutation of the modes")
    return np.transpose(T, perm).copy()


def is_zero(T: np.ndarray) -> bool:
    return all(x == 0 for x in T.flat)


def tensors_equal(A: np.ndarray, B: np.ndarray) -> bool:
    if A.shape != B.shape:
        return False
    return all(a == b for a, b in zip(A.flat, B.flat))


def tensor_to_json(T: np.ndarray) -> dict:
    return {"shape": list(T.shape), "entries": [format_scalar(x) for x in T.flat]}


def tensor_from_json(obj: dict) -> np.ndarray:
    """Parse the dense or the sparse (coords/values) tensor format."""
    if not isinstance(obj, dict) or "shape" not in obj:
        raise ValueError("tensor JSON needs a 'shape' field")
    shape = obj["shape"]
    if (
        not isinstance(shape, list)
        or not shape
        or not all(isinstance(n, int) and not isinstance(n, bool) and n >= 1 for n in shape)
    ):
        raise ValueError(f"invalid shape {shape!r}")
    size = int(np.prod(shape))
    if "entries" in obj:
        entries = obj["entries"]
        if not isinstance(entries, list) or len(entries) != size:
            raise ValueError(
                f"expected {size} entries for shape {shape}, got "
                f"{len(entries) if isinstance(entries, list) else 'non-list'}"
            )
        flat = np.empty(size, dtype=object)
        for i, e in enumerate(entries):
            flat[i] = as_scalar(e)
        T = flat.reshape(shape)
    elif "coords" in obj and "values" in obj:
        coords, values = obj["coords"], obj["values"]
        if len(coords) != len(values):
            raise ValueError(f"{len(coords)} coords but {len(values)} values")
        T = zeros(shape)
        for idx, val in zip(coords, values):
            if len(idx) != len(shape) or not all(0 <= i < n for i, n in zip(idx, shape)):
                raise ValueError(f"coordinate {idx} outside shape {shape}")
            T[tuple(idx)] = T[tuple(idx)] + as_scalar(val)
    else:
        raise ValueError("tensor JSON needs 'entries' or 'coords'/'values'")
    scalar_delta(T.flat)
    return T


def load_tensor(path) -> np.ndarray:
    return tensor_from_json(json.loads(Path(path).read_text()))


def save_tensor(T: np.ndarray, path) -> None:
    Path(path).write_text(json.dumps(tensor_to_json(T)) + "\n")


def multi_indices(shape):
    return product(*(range(n) for n in shape))
