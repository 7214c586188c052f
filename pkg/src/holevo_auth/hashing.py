"""Two-universal hash families over GF(2) and tag generation.

Families
--------
``toeplitz``
    Affine Toeplitz maps ``x -> T x + b``; ``T`` is ``d x n`` and defined by
    its ``n + d - 1`` diagonal bits. For any fixed ``x != x'`` the collision
    probability over the family is exactly ``2**-d``.
``paritycheck``
    Check rows taken from a uniformly random invertible ``L`` (first ``d``
    columns of ``L``, transposed). Collision probability is at most
    ``2**-d``; with ``d == n`` the map is injective.

MAC schemes
-----------
:class:`KeyedToeplitzMAC` selects the Toeplitz instance with the secret
key, which is what makes one-time substitution forgery succeed with
probability ``2**-d``. :class:`ConcatenatedMAC` hashes ``key || message``
through a public instance; since the map is affine, one genuine
``(M, T)`` pair fixes the tag of every other message.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .errors import InvalidArgument, LengthMismatch

TOEPLITZ = "toeplitz"
PARITYCHECK = "paritycheck"


def toeplitz_matrix(diagonal, n: int, d: int) -> np.ndarray:
    """``d x n`` matrix with ``T[i, j] = diagonal[i - j + n - 1]``."""
    diag = gf2.as_bits(diagonal, n + d - 1)
    idx = np.arange(d)[:, None] - np.arange(n)[None, :] + n - 1
    return diag[idx]


@dataclass(frozen=True, eq=False)
class HashInstance:
    kind: str
    input_bits: int
    output_bits: int
    matrix: np.ndarray
    offset: np.ndarray
    diagonal: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in (TOEPLITZ, PARITYCHECK):
            raise InvalidArgument(f"unknown hash kind {self.kind!r}")
        if not 1 <= self.output_bits <= self.input_bits:
            raise InvalidArgument("need 1 <= D <= n")
        if self.matrix.shape != (self.output_bits, self.input_bits):
            raise InvalidArgument("matrix must be D x n")
        if self.offset.shape != (self.output_bits,):
            raise InvalidArgument("offset must have D bits")
        for arr in (self.matrix, self.offset, self.diagonal):
            if arr is not None:
                arr.setflags(write=False)

    def __eq__(self, other):
        if not isinstance(other, HashInstance):
            return NotImplemented
        return (self.kind == other.kind and self.input_bits == other.input_bits
                and np.array_equal(self.matrix, other.matrix)
                and np.array_equal(self.offset, other.offset))

    def __hash__(self):
        return hash(serialize(self))


def toeplitz_instance(diagonal, offset, n: int, d: int) -> HashInstance:
    diag = gf2.as_bits(diagonal, n + d - 1)
    return HashInstance(TOEPLITZ, n, d, toeplitz_matrix(diag, n, d),
                        gf2.as_bits(offset, d), diag)


def sample_toeplitz(n: int, d: int, rng: np.random.Generator) -> HashInstance:
    if not 1 <= d <= n:
        raise InvalidArgument(f"need 1 <= d <= n, got n={n}, d={d}")
    diag = rng.integers(0, 2, size=n + d - 1, dtype=np.uint8)
    offset = rng.integers(0, 2, size=d, dtype=np.uint8)
    return toeplitz_instance(diag, offset, n, d)


def sample_invertible_batch(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent uniform invertible ``n x n`` matrices, by rejection."""
    if n < 1:
        raise InvalidArgument("n must be positive")
    out = np.empty((count, n, n), dtype=np.uint8)
    filled = 0
    weights = (1 << np.arange(n - 1, -1, -1)).astype(np.uint64)
    while filled < count:
        need = count - filled
        raw = rng.integers(0, 2, size=(max(4 * need, 16), n, n), dtype=np.uint8)
        packed = raw.astype(np.uint64) @ weights
        ok = gf2.batch_rank(packed, n) == n
        take = raw[ok][:need]
        out[filled:filled + len(take)] = take
        filled += len(take)
    return out


def sample_invertible_gf2(n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Uniform invertible ``L`` and the transpose of its inverse."""
    L = sample_invertible_batch(n, 1, rng)[0]
    return L, gf2.inverse(L).T.copy()


def parity_checks(L, LinvT) -> tuple[np.ndarray, np.ndarray]:
    """First column of ``L`` and second column of ``LinvT``, as ``1 x n`` rows."""
    L = np.asarray(L, dtype=np.uint8)
    LinvT = np.asarray(LinvT, dtype=np.uint8)
    n = L.shape[0]
    if n < 2:
        raise InvalidArgument("parity checks need n >= 2")
    return L[:, 0].reshape(1, n).copy(), LinvT[:, 1].reshape(1, n).copy()


def sample_paritycheck(n: int, d: int, rng: np.random.Generator) -> HashInstance:
    if not 1 <= d <= n:
        raise InvalidArgument(f"need 1 <= d <= n, got n={n}, d={d}")
    L = sample_invertible_batch(n, 1, rng)[0]
    offset = rng.integers(0, 2, size=d, dtype=np.uint8)
    return HashInstance(PARITYCHECK, n, d, L[:, :d].T.copy(), offset)


def evaluate(h: HashInstance, x) -> np.ndarray:
    x = gf2.as_bits(x)
    if x.size != h.input_bits:
        raise LengthMismatch(f"instance takes {h.input_bits} bits, got {x.size}")
    return gf2.matvec(h.matrix, x) ^ h.offset


def tag_message(h: HashInstance, key, message) -> np.ndarray:
    """``evaluate(h, key || message)``; the key occupies the low indices."""
    key, message = gf2.as_bits(key), gf2.as_bits(message)
    if key.size + message.size != h.input_bits:
        raise LengthMismatch(
            f"|key| + |message| = {key.size + message.size}, instance takes {h.input_bits}")
    return evaluate(h, np.concatenate([key, message]))


def serialize(h: HashInstance) -> str:
    if h.kind == TOEPLITZ:
        lines = [f"toeplitz n={h.input_bits} d={h.output_bits}", gf2.bits_to_hex(h.diagonal)]
    else:
        lines = [f"paritycheck n={h.input_bits}"]
        lines += [gf2.bits_to_hex(row) for row in h.matrix]
    lines.append(gf2.bits_to_hex(h.offset))
    return "\n".join(lines) + "\n"


def parse(text: str) -> HashInstance:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise InvalidArgument("empty hash description")
    head = lines[0].split()
    fields = dict(tok.split("=", 1) for tok in head[1:])
    try:
        n = int(fields["n"])
        if head[0] == TOEPLITZ:
            d = int(fields["d"])
            if len(lines) != 3:
                raise InvalidArgument("toeplitz form needs diagonal and offset lines")
            return toeplitz_instance(gf2.hex_to_bits(lines[1], n + d - 1),
                                     gf2.hex_to_bits(lines[2], d), n, d)
        if head[0] == PARITYCHECK:
            rows = lines[1:-1]
            d = len(rows)
            matrix = np.array([gf2.hex_to_bits(r, n) for r in rows], dtype=np.uint8)
            return HashInstance(PARITYCHECK, n, d, matrix.reshape(d, n),
                                gf2.hex_to_bits(lines[-1], d))
    except (KeyError, ValueError) as exc:
        raise InvalidArgument(f"malformed hash description: {exc}") from exc
    raise InvalidArgument(f"unknown hash kind {head[0]!r}")


def _distinct_pair(n: int, rng: np.random.Generator):
    x = rng.integers(0, 2, size=n, dtype=np.uint8)
    while True:
        y = rng.integers(0, 2, size=n, dtype=np.uint8)
        if (x != y).any():
            return x, y


def collision_estimate(family: str, n: int, d: int, trials: int, rng: np.random.Generator,
                       pair=None, chunk: int = 200_000) -> tuple[float, float]:
    """Fraction of freshly sampled instances on which a fixed pair collides.

    Returns ``(rate, binomial standard error)``. Offsets cancel in
    ``h(x) ^ h(x')`` and are therefore not drawn.
    """
    if trials < 1:
        raise InvalidArgument("trials must be >= 1")
    if not 1 <= d <= n:
        raise InvalidArgument(f"need 1 <= d <= n, got n={n}, d={d}")
    x, y = _distinct_pair(n, rng) if pair is None else (gf2.as_bits(pair[0], n),
                                                        gf2.as_bits(pair[1], n))
    v = x ^ y
    if not v.any():
        raise InvalidArgument("pair must be distinct")
    support = np.nonzero(v)[0]
    hits = 0
    done = 0
    while done < trials:
        size = min(chunk, trials - done)
        if family == TOEPLITZ:
            diag = rng.integers(0, 2, size=(size, n + d - 1), dtype=np.uint8)
            acc = np.zeros((size, d), dtype=np.uint8)
            rows = np.arange(d)
            for j in support:
                acc ^= diag[:, rows - j + n - 1]
        elif family == PARITYCHECK:
            L = sample_invertible_batch(n, size, rng)
            acc = (L[:, support, :d].sum(axis=1) & 1).astype(np.uint8)
        else:
            raise InvalidArgument(f"unknown family {family!r}")
        hits += int(np.count_nonzero(~acc.any(axis=1)))
        done += size
    rate = hits / trials
    return rate, float(np.sqrt(rate * (1 - rate) / trials))


class KeyedToeplitzMAC:
    """One-time MAC whose affine Toeplitz instance is the secret key.

    Key layout: ``message_bits + tag_bits - 1`` diagonal bits followed by
    ``tag_bits`` offset bits. Tags are linear in the key for a fixed
    message.
    """

    def __init__(self, message_bits: int, tag_bits: int):
        if message_bits < 1 or tag_bits < 1:
            raise InvalidArgument("message and tag lengths must be positive")
        self.message_bits = message_bits
        self.tag_bits = tag_bits
        self.key_bits = message_bits + 2 * tag_bits - 1
        self._rows: dict[int, tuple[int, ...]] = {}

    @classmethod
    def for_key_length(cls, key_bits: int, tag_bits: int) -> "KeyedToeplitzMAC":
        """Scheme that uses a ``key_bits`` key exactly."""
        m = key_bits - 2 * tag_bits + 1
        if m < 1:
            raise InvalidArgument(
                f"a {key_bits}-bit key leaves no message space for {tag_bits}-bit tags")
        return cls(m, tag_bits)

    def instance(self, key) -> HashInstance:
        key = gf2.as_bits(key, self.key_bits)
        ndiag = self.message_bits + self.tag_bits - 1
        return toeplitz_instance(key[:ndiag], key[ndiag:], self.message_bits, self.tag_bits)

    def tag(self, key, message) -> np.ndarray:
        t = self.tag_int(gf2.bits_to_int(gf2.as_bits(key, self.key_bits)),
                         gf2.bits_to_int(gf2.as_bits(message, self.message_bits)))
        return gf2.int_to_bits(t, self.tag_bits)

    def rows_for(self, m_int: int) -> tuple[int, ...]:
        """Cached :meth:`affine_form` rows of the message with integer value ``m_int``."""
        rows = self._rows.get(m_int)
        if rows is None:
            rows = tuple(self.affine_form(gf2.int_to_bits(m_int, self.message_bits))[0])
            self._rows[m_int] = rows
        return rows

    def tag_int(self, key_int: int, m_int: int) -> int:
        out = 0
        for r in self.rows_for(m_int):
            out = (out << 1) | ((r & key_int).bit_count() & 1)
        return out

    def affine_form(self, message) -> tuple[list[int], int]:
        """Rows ``r_i`` and constant ``c`` with ``tag_i = r_i . key ^ c_i``."""
        msg = gf2.as_bits(message, self.message_bits)
        m, d, a = self.message_bits, self.tag_bits, self.key_bits
        rows = []
        for i in range(d):
            row = 1 << (a - 1 - (m + d - 1 + i))
            for j in np.nonzero(msg)[0]:
                row ^= 1 << (a - 1 - (i - int(j) + m - 1))
            rows.append(row)
        return rows, 0


class ConcatenatedMAC:
    """Tags ``evaluate(h, key || message)`` with a public instance ``h``."""

    def __init__(self, h: HashInstance, key_bits: int):
        if not 0 < key_bits <= h.input_bits:
            raise InvalidArgument("key must fit inside the hash input")
        self.h = h
        self.key_bits = key_bits
        self.message_bits = h.input_bits - key_bits
        self.tag_bits = h.output_bits

    def tag(self, key, message) -> np.ndarray:
        return tag_message(self.h, key, message)

    def tag_int(self, key_int: int, m_int: int) -> int:
        rows, const = self.affine_form(gf2.int_to_bits(m_int, self.message_bits))
        out = 0
        for r in rows:
            out = (out << 1) | ((r & key_int).bit_count() & 1)
        return out ^ const

    def affine_form(self, message) -> tuple[list[int], int]:
        msg = gf2.as_bits(message, self.message_bits)
        rows = gf2.rows_to_ints(self.h.matrix[:, :self.key_bits])
        const = gf2.matvec(self.h.matrix[:, self.key_bits:], msg) ^ self.h.offset
        return rows, gf2.bits_to_int(const)


def tags_for_keys(scheme, keys: np.ndarray, message) -> np.ndarray:
    """Integer tags of ``message`` under each integer key in ``keys``."""
    rows, const = scheme.affine_form(message)
    keys = np.asarray(keys, dtype=np.uint64)
    out = np.zeros(keys.shape, dtype=np.uint64)
    d = len(rows)
    for i, row in enumerate(rows):
        bit = np.bitwise_count(keys & np.uint64(row)).astype(np.uint64) & np.uint64(1)
        out |= bit << np.uint64(d - 1 - i)
    return out ^ np.uint64(const)
