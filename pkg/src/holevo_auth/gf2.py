"""Bit vectors and matrices over GF(2).

Two representations are used side by side:

* numpy ``uint8`` arrays of 0/1 entries, for matrices that are built or
  multiplied in bulk (hash instances, Toeplitz products, batch sampling);
* Python ``int`` bitsets, for the small Gaussian eliminations the adversary
  runs once per trial.

Bit strings are most-significant-bit first: position 0 of a length-``n``
string is bit ``n - 1`` of its integer value.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "as_bits",
    "bits_to_int",
    "int_to_bits",
    "bits_to_hex",
    "hex_to_bits",
    "parity",
    "matmul",
    "matvec",
    "rank",
    "inverse",
    "rank_int",
    "solve_affine",
    "batch_rank",
    "rows_to_ints",
]


def as_bits(x, length=None) -> np.ndarray:
    """Coerce a 0/1 sequence or a ``'0101'`` string into a uint8 array."""
    if isinstance(x, str):
        x = x.strip()
        if x and set(x) - {"0", "1"}:
            raise ValueError(f"not a bit string: {x!r}")
        arr = np.fromiter((c == "1" for c in x), dtype=np.uint8, count=len(x))
    else:
        arr = np.asarray(x)
        if arr.dtype != np.uint8 or arr.ndim != 1:
            if arr.size and not ((arr == 0) | (arr == 1)).all():
                raise ValueError("bit arrays may only contain 0 and 1")
            arr = arr.astype(np.uint8).reshape(-1)
        elif arr.size and arr.max() > 1:
            raise ValueError("bit arrays may only contain 0 and 1")
    if length is not None and arr.size != length:
        raise ValueError(f"expected {length} bits, got {arr.size}")
    return arr


def bits_to_int(bits) -> int:
    arr = as_bits(bits)
    return int("".join("1" if b else "0" for b in arr.tolist()), 2) if arr.size else 0


def int_to_bits(value: int, length: int) -> np.ndarray:
    if value < 0 or value >> length:
        raise ValueError(f"{value} does not fit in {length} bits")
    shifts = np.arange(length - 1, -1, -1, dtype=np.int64)
    return ((value >> shifts) & 1).astype(np.uint8) if length else np.zeros(0, np.uint8)


def bits_to_hex(bits) -> str:
    bits = as_bits(bits)
    width = max(1, -(-bits.size // 4))
    return format(bits_to_int(bits), f"0{width}x")


def hex_to_bits(text: str, length: int) -> np.ndarray:
    return int_to_bits(int(text.strip(), 16), length)


def parity(value: int) -> int:
    return value.bit_count() & 1


def matmul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return (a @ b % 2).astype(np.uint8)


def matvec(a, x) -> np.ndarray:
    return matmul(a, as_bits(x))


def rows_to_ints(m) -> list[int]:
    """Pack each row of a 0/1 matrix into an int (MSB = column 0)."""
    m = np.atleast_2d(np.asarray(m, dtype=np.uint8))
    if m.shape[1] <= 63:
        weights = np.uint64(1) << np.arange(m.shape[1] - 1, -1, -1, dtype=np.uint64)
        return [int(v) for v in (m.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)]
    return [bits_to_int(row) for row in m]


def rank_int(rows, ncols: int | None = None) -> int:
    """Rank of a list of int-packed rows."""
    basis: dict[int, int] = {}
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top not in basis:
                basis[top] = row
                break
            row ^= basis[top]
    return len(basis)


def rank(m) -> int:
    m = np.atleast_2d(np.asarray(m, dtype=np.uint8))
    return rank_int(rows_to_ints(m))


def inverse(m) -> np.ndarray:
    """Inverse of a square GF(2) matrix; raises ``ValueError`` when singular."""
    m = np.atleast_2d(np.asarray(m, dtype=np.uint8))
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    aug = np.concatenate([m, np.eye(n, dtype=np.uint8)], axis=1)
    for col in range(n):
        pivots = np.nonzero(aug[col:, col])[0]
        if pivots.size == 0:
            raise ValueError("matrix is singular over GF(2)")
        p = col + pivots[0]
        if p != col:
            aug[[col, p]] = aug[[p, col]]
        hits = np.nonzero(aug[:, col])[0]
        hits = hits[hits != col]
        aug[hits] ^= aug[col]
    return aug[:, n:].copy()


def solve_affine(rows, rhs, nbits: int):
    """Solve ``rows[i] . x = rhs[i]`` for an ``nbits``-bit unknown ``x``.

    Returns ``(x0, basis)`` where ``x0`` is the solution with all free
    variables set to zero and ``basis`` spans the null space, or ``None``
    when the system is inconsistent.
    """
    pivots: dict[int, tuple[int, int]] = {}
    for row, b in zip(rows, rhs):
        b &= 1
        while row:
            top = row.bit_length() - 1
            if top not in pivots:
                break
            prow, pb = pivots[top]
            row ^= prow
            b ^= pb
        if row:
            pivots[row.bit_length() - 1] = (row, b)
        elif b:
            return None
    # back-substitute to reduced echelon form, highest pivot first
    order = sorted(pivots, reverse=True)
    for i, top in enumerate(order):
        row, b = pivots[top]
        for lower in order[i + 1:]:
            if (row >> lower) & 1:
                lrow, lb = pivots[lower]
                row ^= lrow
                b ^= lb
        pivots[top] = (row, b)
    x0 = 0
    for top, (_, b) in pivots.items():
        if b:
            x0 |= 1 << top
    basis = []
    for free in range(nbits):
        if free in pivots:
            continue
        v = 1 << free
        for top, (row, _) in pivots.items():
            if (row >> free) & 1:
                v |= 1 << top
        basis.append(v)
    return x0, basis


def batch_rank(rows: np.ndarray, ncols: int) -> np.ndarray:
    """Ranks of a batch of int-packed row sets.

    ``rows`` has shape ``(batch, r)`` with each entry an ``ncols``-bit row.
    """
    rows = np.array(rows, dtype=np.uint64, copy=True)
    if rows.ndim != 2:
        raise ValueError("rows must be (batch, r)")
    batch, r = rows.shape
    if r <= 8:
        # rank = r - log2(#subsets with zero XOR), walked in Gray-code order
        acc = np.zeros(batch, dtype=np.uint64)
        zeros = np.ones(batch, dtype=np.int64)
        for k in range(1, 1 << r):
            acc ^= rows[:, (k & -k).bit_length() - 1]
            zeros += acc == 0
        return r - np.log2(zeros).round().astype(np.int64)
    idx = np.arange(batch)
    used = np.zeros((batch, r), dtype=bool)
    out = np.zeros(batch, dtype=np.int64)
    one = np.uint64(1)
    for c in range(ncols):
        if used.all():
            break
        bit = ((rows >> np.uint64(c)) & one).astype(bool)
        cand = bit & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = cand.argmax(axis=1)
        prow = rows[idx, piv]
        elim = bit & has[:, None]
        elim[idx[has], piv[has]] = False
        rows = np.where(elim, rows ^ prow[:, None], rows)
        used[idx[has], piv[has]] = True
        out += has
    return out
