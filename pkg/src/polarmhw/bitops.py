"""Bit-vector algebra for polar codes in natural (non-bit-reversed) order.

Conventions used across the package:

* Code length N = 2**n.  Row/column/leaf indices are 1-based on the public
  surface; the binary expansion of an index i works on i - 1.
* Binary expansions are least-significant-digit first: digit j (1-based) of
  x is (x >> (j - 1)) & 1.
* The generator matrix G_N is the n-fold Kronecker power of the 2x2
  lower-triangular kernel [[1, 0], [1, 1]].  Entry (r, c) of G_N (1-based) is
  1 exactly when the binary expansion of c - 1 is bitwise covered by the
  expansion of r - 1.  Row weights are therefore 2**popcount(r - 1).

Rows are computed on demand; no N x N matrix is ever materialized, so the
counting path stays cheap even for N in the 2**16 range.
"""

from __future__ import annotations

from functools import lru_cache

__all__ = [
    "binary_expansion",
    "positions_of",
    "zero_digit_prefix_sum",
    "digit_one_indices",
    "generator_row",
    "generator_row_weight",
    "row_prefix",
    "encode",
    "min_distance",
]


# ---- expansions and index sets ----


def binary_expansion(i: int, n: int) -> list[int]:
    """LSB-first binary digits of i, padded to length n."""
    if n < 1:
        raise ValueError(f"need at least one digit, got n={n}")
    if not 0 <= i < (1 << n):
        raise ValueError(f"{i} is not representable in {n} binary digits")
    return [(i >> j) & 1 for j in range(n)]


def positions_of(symbol: int, x) -> tuple[int, ...]:
    """Ascending 1-based positions where the bit vector x equals symbol."""
    return tuple(p for p, v in enumerate(x, start=1) if v == symbol)


def zero_digit_prefix_sum(i: int, n: int, x: int) -> int:
    """Sum of 2**(p-1) over the first x zero-digit positions p of i - 1.

    The zero digits of the expansion of i - 1 mark the stages at which the
    tail [i+1, 2**n] splits into complete subtrees; the partial sum over the
    x lowest of them is the total span of the first x subtrees.  Summing over
    all zero digits spans the whole tail: the result is then 2**n - i.
    """
    if n < 1 or not 1 <= i <= (1 << n) - 1:
        raise ValueError(f"index i={i} must lie in [1, 2^{n} - 1]")
    zeros = positions_of(0, binary_expansion(i - 1, n))
    if not 1 <= x <= len(zeros):
        raise ValueError(f"x={x} out of range; i-1={i - 1} has {len(zeros)} zero digits")
    return sum(1 << (p - 1) for p in zeros[:x])


def digit_one_indices(n: int, j: int) -> tuple[int, ...]:
    """All i in [0, 2**n - 1] whose j-th binary digit (LSB-first) is 1."""
    if not 1 <= j <= n:
        raise ValueError(f"digit index j={j} out of range [1, {n}]")
    bit = 1 << (j - 1)
    return tuple(i for i in range(1 << n) if i & bit)


# ---- generator rows and encoding ----


def _check_length(N: int) -> int:
    """Validate a code length and return n = log2(N)."""
    n = N.bit_length() - 1
    if N < 2 or (1 << n) != N:
        raise ValueError(f"code length N={N} is not a power of two >= 2")
    return n


def generator_row(i: int, N: int) -> list[int]:
    """Row i of G_N: column c is 1 iff (c-1) is bitwise covered by (i-1)."""
    _check_length(N)
    if not 1 <= i <= N:
        raise ValueError(f"row index i={i} out of range [1, {N}]")
    mask = i - 1
    return [1 if (c & ~mask) == 0 else 0 for c in range(N)]


def generator_row_weight(i: int, N: int) -> int:
    """Hamming weight of row i of G_N, i.e. 2**popcount(i-1)."""
    _check_length(N)
    if not 1 <= i <= N:
        raise ValueError(f"row index i={i} out of range [1, {N}]")
    return 1 << (i - 1).bit_count()


def row_prefix(i: int, lam: int, N: int) -> list[int]:
    """First 2**lam entries of row i of G_N.

    Only the low lam digits of i - 1 matter: the prefix weight is
    2**popcount((i-1) mod 2**lam), a fixed fraction of the full row weight.
    """
    n = _check_length(N)
    if not 1 <= i <= N:
        raise ValueError(f"row index i={i} out of range [1, {N}]")
    if not 0 <= lam <= n:
        raise ValueError(f"stage lam={lam} out of range [0, {n}]")
    mask = (i - 1) & ((1 << lam) - 1)
    return [1 if (c & ~mask) == 0 else 0 for c in range(1 << lam)]


def encode(u, N: int | None = None) -> list[int]:
    """Polar transform c = u G_N over GF(2), computed by the butterfly.

    The transform is an involution: encode(encode(u)) == u.
    """
    c = [int(b) for b in u]
    if N is None:
        N = len(c)
    if len(c) != N:
        raise ValueError(f"|u|={len(c)} does not match N={N}")
    _check_length(N)
    if any(b not in (0, 1) for b in c):
        raise ValueError("u must be a 0/1 vector")
    half = 1
    while half < N:
        for a in range(N):
            if a & half == 0:
                c[a] ^= c[a + half]
        half <<= 1
    return c


# ---- minimum distance ----


@lru_cache(maxsize=None)
def _min_distance_cached(N: int, A: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    best = min((a - 1).bit_count() for a in A)
    rows = tuple(a for a in A if (a - 1).bit_count() == best)
    return 1 << best, rows


def min_distance(spec) -> tuple[int, tuple[int, ...]]:
    """Minimum distance d_m of the code and the rows of A attaining it.

    For any information set over G_N the minimum distance equals the minimum
    generator-row weight: the span of the chosen rows sits inside the
    Reed-Muller code of the largest chosen row degree, whose minimum distance
    is exactly the smallest chosen row weight, and a single row attains it.
    """
    cached = getattr(spec, "_min_distance_pair", None)
    if cached is not None:
        return cached
    A = tuple(sorted(spec.A))
    if not A:
        raise ValueError("no information bits")
    _check_length(spec.N)
    if A[0] < 1 or A[-1] > spec.N:
        raise ValueError(f"information set not within [1, {spec.N}]")
    return _min_distance_cached(spec.N, A)
