"""Code specifications and reliability-based information-set construction.

Two constructions are provided:

* Polarization weight (PW): channel i scores sum(digit_j(i-1) * beta**(j-1))
  with beta = 2**(1/4), digits LSB-first.  Purely combinatorial, SNR-free.
* Gaussian approximation (GA): density evolution collapsed to a single mean
  per channel.  The decoder-side LLR of every channel is modeled as Gaussian
  with variance twice its mean; propagating means through the polar transform
  needs one function phi(m) (the expected value of tanh(L/2) shortfall) and
  its inverse.  The standard two-segment fit is used:

      ln phi(m) = -0.4527 m^0.86 + 0.0218                      for m < 10
      ln phi(m) = ln sqrt(pi/m) - m/4 + ln(1 - 10/(7m))        for m >= 10

  A check combine maps phi -> phi*(2 - phi); working on ln phi keeps the
  arithmetic stable far into the saturated regime (phi underflows to zero,
  ln phi stays finite).  A variable combine doubles the mean.  Channels with
  larger mean are more reliable.

Design-noise convention: construct_ga maps its design Eb/N0 through a fixed
design rate (default 1/2), sigma^2 = 1/(2 * rate * 10^(EbN0/10)).  Keeping
sigma independent of K makes the ranking a single permutation per (N, design
point), so information sets are nested in K.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "CodeSpec",
    "ReliabilityOrder",
    "SpecFormatError",
    "polarization_weight_order",
    "gaussian_approx_order",
    "construct_pw",
    "construct_ga",
    "load_spec",
    "save_spec",
]

PW_BETA = 2.0 ** 0.25

# boundary value of ln phi at m = 10, where the two fit segments meet
_LN_PHI_SPLIT = -0.4527 * 10.0 ** 0.86 + 0.0218


# ---- code specification ----


@dataclass(frozen=True)
class CodeSpec:
    """A polar code: length N = 2^n, information set A, construction label."""

    N: int
    A: tuple[int, ...]
    construction: str = "EXPLICIT"

    def __post_init__(self):
        n = self.N.bit_length() - 1
        if self.N < 2 or (1 << n) != self.N:
            raise ValueError(f"code length N={self.N} is not a power of two >= 2")
        A = tuple(sorted(self.A))
        if not A:
            raise ValueError("information set is empty")
        if len(set(A)) != len(A):
            raise ValueError("information set has duplicate positions")
        if A[0] < 1 or A[-1] > self.N:
            raise ValueError(f"information set not within [1, {self.N}]")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "_info", frozenset(A))

    @property
    def n(self) -> int:
        return self.N.bit_length() - 1

    @property
    def K(self) -> int:
        return len(self.A)

    @property
    def R(self) -> float:
        return len(self.A) / self.N

    def is_info(self, position: int) -> bool:
        return position in self._info

    def frozen_positions(self) -> tuple[int, ...]:
        return tuple(p for p in range(1, self.N + 1) if p not in self._info)

    @cached_property
    def info_mask(self) -> np.ndarray:
        """Boolean mask over 0-based positions; computed once per spec."""
        mask = np.zeros(self.N, dtype=bool)
        mask[np.asarray(self.A, dtype=np.int64) - 1] = True
        return mask

    @cached_property
    def _min_distance_pair(self) -> tuple[int, tuple[int, ...]]:
        """(minimum row weight, rows attaining it); computed once per spec."""
        arr = np.asarray(self.A, dtype=np.int64)
        weights = np.bitwise_count(arr - 1)
        best = int(weights.min())
        rows = tuple(int(a) for a in arr[weights == best])
        return 1 << best, rows


@dataclass(frozen=True)
class ReliabilityOrder:
    """Permutation of [1, N], most reliable channel first, plus raw scores."""

    ranking: tuple[int, ...]
    scores: tuple[float, ...]

    def top(self, K: int) -> tuple[int, ...]:
        if not 1 <= K <= len(self.ranking):
            raise ValueError(f"K={K} out of range [1, {len(self.ranking)}]")
        return tuple(sorted(self.ranking[:K]))


def _rank(scores: np.ndarray) -> tuple[int, ...]:
    # descending score, ascending index on ties
    idx = np.lexsort((np.arange(1, len(scores) + 1), -scores))
    return tuple(int(i) + 1 for i in idx)


# ---- polarization weight ----


def polarization_weight_order(N: int) -> ReliabilityOrder:
    n = N.bit_length() - 1
    if N < 2 or (1 << n) != N:
        raise ValueError(f"code length N={N} is not a power of two >= 2")
    idx = np.arange(N, dtype=np.int64)
    scores = np.zeros(N)
    for j in range(n):
        scores += ((idx >> j) & 1) * PW_BETA ** j
    return ReliabilityOrder(_rank(scores), tuple(float(s) for s in scores))


def construct_pw(N: int, K: int) -> CodeSpec:
    order = polarization_weight_order(N)
    return CodeSpec(N, order.top(K), "PW")


# ---- gaussian approximation ----


def _ln_phi(m: np.ndarray) -> np.ndarray:
    out = np.empty_like(m)
    small = m < 10.0
    ms = m[small]
    out[small] = -0.4527 * ms ** 0.86 + 0.0218
    ml = m[~small]
    out[~small] = 0.5 * np.log(np.pi / ml) - ml / 4.0 + np.log1p(-10.0 / (7.0 * ml))
    return out


def _inv_ln_phi(target: np.ndarray) -> np.ndarray:
    """Solve ln phi(m) = target for m > 0."""
    m = np.empty_like(target)
    closed = target >= _LN_PHI_SPLIT
    m[closed] = ((0.0218 - target[closed]) / 0.4527) ** (1.0 / 0.86)
    t = target[~closed]
    if t.size:
        # Newton on the large-m segment; ln phi ~ -m/4 there, so -4*target
        # is already close and the iteration converges in a handful of steps
        x = -4.0 * t
        for _ in range(100):
            f = 0.5 * np.log(np.pi / x) - x / 4.0 + np.log1p(-10.0 / (7.0 * x)) - t
            fp = -0.5 / x - 0.25 + (10.0 / (7.0 * x * x)) / (1.0 - 10.0 / (7.0 * x))
            step = f / fp
            x = x - step
            if np.max(np.abs(step)) < 1e-12:
                break
        m[~closed] = x
    return m


def _check_combine(m: np.ndarray) -> np.ndarray:
    ln_phi = _ln_phi(m)
    phi = np.exp(ln_phi)  # underflows to 0 when m is large; that is fine
    return _inv_ln_phi(ln_phi + np.log(2.0 - phi))


def gaussian_approx_order(N: int, sigma: float) -> ReliabilityOrder:
    n = N.bit_length() - 1
    if N < 2 or (1 << n) != N:
        raise ValueError(f"code length N={N} is not a power of two >= 2")
    if not sigma > 0:
        raise ValueError(f"noise std sigma={sigma} must be positive")
    # Shared-prefix recursion: one array per stage instead of one walk per
    # channel.  Child order (check, double) makes the final index i-1 read its
    # digits MSB-first, which is exactly the natural channel order.
    means = np.array([2.0 / (sigma * sigma)])
    for _ in range(n):
        nxt = np.empty(2 * means.size)
        nxt[0::2] = _check_combine(means)
        nxt[1::2] = 2.0 * means
        means = nxt
    return ReliabilityOrder(_rank(means), tuple(float(m) for m in means))


def design_sigma(ebn0_db: float, rate: float) -> float:
    if not 0 < rate <= 1:
        raise ValueError(f"rate {rate} out of (0, 1]")
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


def construct_ga(N: int, K: int, design_ebn0_db: float, design_rate: float = 0.5) -> CodeSpec:
    order = gaussian_approx_order(N, design_sigma(design_ebn0_db, design_rate))
    return CodeSpec(N, order.top(K), f"GA({design_ebn0_db:g}dB)")


# ---- spec files ----


class SpecFormatError(ValueError):
    """Raised for malformed or inconsistent code-spec files."""


_MAGIC = "polarmhw-spec 1"


def save_spec(spec: CodeSpec, path, header_lines=()) -> None:
    lines = [_MAGIC]
    for extra in header_lines:
        lines.append(extra if extra.startswith("#") else f"# {extra}")
    lines += [
        f"N = {spec.N}",
        f"construction = {spec.construction}",
        "A = " + " ".join(str(a) for a in spec.A),
        "",
    ]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))


def load_spec(path) -> CodeSpec:
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read().splitlines()
    if not raw or raw[0].strip() != _MAGIC:
        raise SpecFormatError(f"{path}: line 1: expected header '{_MAGIC}'")
    fields: dict[str, str] = {}
    for lineno, line in enumerate(raw[1:], start=2):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        m = re.fullmatch(r"(\w+)\s*=\s*(.*)", text)
        if not m:
            raise SpecFormatError(f"{path}: line {lineno}: expected 'key = value', got {text!r}")
        key = m.group(1)
        if key in fields:
            raise SpecFormatError(f"{path}: line {lineno}: duplicate field {key!r}")
        fields[key] = m.group(2).strip()
    for required in ("N", "A"):
        if required not in fields:
            raise SpecFormatError(f"{path}: missing required field {required!r}")
    try:
        N = int(fields["N"])
    except ValueError:
        raise SpecFormatError(f"{path}: field N: {fields['N']!r} is not an integer") from None
    try:
        A = tuple(int(tok) for tok in re.split(r"[,\s]+", fields["A"]) if tok)
    except ValueError:
        raise SpecFormatError(f"{path}: field A: expected integers, got {fields['A']!r}") from None
    try:
        return CodeSpec(N, A, fields.get("construction", "EXPLICIT"))
    except ValueError as exc:
        raise SpecFormatError(f"{path}: {exc}") from None
