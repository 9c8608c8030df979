"""Enumeration of minimum-weight information vectors, four independent ways.

* exhaustive_mhw: encode every message (numpy-packed, capped at K <= 22).
* enumerate_subset_scl: per minimum-weight row i and per zero-capacity
  information position j after i, a constrained list search pinned to the
  prefix 1-at-i, 1-at-j recovers the subset U(i, j); list sizes shrink
  geometrically along j.
* enumerate_zero_split: a depth-first walk per row i that follows hard
  decisions, forks at exactly-zero information LLRs, and abandons a branch
  when a frozen position sees a negative LLR.  No metrics, no sorting.
* scl_global_search: one wide unconstrained list search on the all-ones
  input; the minimum-weight survivors are the answer when the list is wider
  than the counting bound.

All four agree on every tested code; the test suite enforces that.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from polarmhw.bitops import encode, generator_row, min_distance
from polarmhw.bound import bound_count, zero_capacity_set
from polarmhw.construction import CodeSpec
from polarmhw.listdec import _TreeState, constrained_scl, scl_decode
from polarmhw.sctree import sc_retrace

__all__ = [
    "MhwResult",
    "ExhaustiveCapError",
    "EnumFormatError",
    "EXHAUSTIVE_CAP",
    "exhaustive_mhw",
    "search_subset",
    "enumerate_subset_scl",
    "zero_split_subset",
    "enumerate_zero_split",
    "scl_global_search",
    "write_enumeration",
    "read_enumeration",
]

EXHAUSTIVE_CAP = 22

_METHODS = ("EXHAUSTIVE", "SUBSET_SCL", "ZERO_SPLIT", "SCL_GLOBAL")


class ExhaustiveCapError(ValueError):
    """Message space too large to sweep; use the global list search oracle."""


class EnumFormatError(ValueError):
    """Malformed enumeration file."""


@dataclass(frozen=True)
class MhwResult:
    d_m: int
    count: int
    vectors: tuple[tuple[int, ...], ...]
    method: str
    max_list_used: int
    warning: str | None = None

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.count != len(self.vectors):
            raise ValueError("count does not match the number of vectors")


def _sorted_vectors(vectors):
    return tuple(sorted(tuple(v) for v in vectors))


def _merge_subsets(per_trigger):
    """Union of per-trigger vector lists; duplicates across triggers break
    the partition law and abort loudly."""
    seen = {}
    for i, vectors in per_trigger:
        for u in vectors:
            if u in seen:
                raise RuntimeError(
                    f"vector enumerated under both triggers {seen[u]} and {i}: {list(u)}"
                )
            seen[u] = i
    return _sorted_vectors(seen)


# ---- exhaustive oracle ----


def exhaustive_mhw(spec, cap: int = EXHAUSTIVE_CAP) -> MhwResult:
    """Sweep all 2**K messages with packed-word codewords.

    The minimum nonzero weight is taken from the sweep itself, not from any
    row-weight shortcut, so this is a genuinely independent oracle.
    """
    K, N = spec.K, spec.N
    if K > cap:
        raise ExhaustiveCapError(
            f"K={K} exceeds the exhaustive cap of {cap}; "
            "use the global list search with L past the counting bound instead"
        )
    words = (N + 63) // 64
    rows = np.zeros((K, words), dtype=np.uint64)
    for k, a in enumerate(sorted(spec.A)):
        for p, v in enumerate(generator_row(a, N)):
            if v:
                rows[k, p // 64] |= np.uint64(1 << (p % 64))
    table = np.zeros((1, words), dtype=np.uint64)
    for k in range(K):
        table = np.vstack([table, table ^ rows[k]])
    weights = np.bitwise_count(table).sum(axis=1)
    d_m = int(weights[1:].min())
    hits = np.nonzero(weights == d_m)[0]
    A = sorted(spec.A)
    vectors = []
    for m in hits:
        m = int(m)
        u = [0] * N
        for k in range(K):
            if (m >> k) & 1:
                u[A[k] - 1] = 1
        vectors.append(tuple(u))
    return MhwResult(d_m, len(vectors), _sorted_vectors(vectors), "EXHAUSTIVE", 0)


# ---- constrained list searches ----


def _single_one(i, N):
    u = [0] * N
    u[i - 1] = 1
    return tuple(u)


def _codeword_weight(u):
    return sum(encode(list(u)))


def _search_pair(spec, i, j, L, d_m, trigger_pm):
    """One constrained search: returns (vectors, note).  A discarded
    candidate that still carried the bare trigger metric may have been on a
    valid trajectory; in that case rerun at full width and report whether
    the schedule truly lost anything."""
    prefix = [0] * j
    prefix[i - 1] = 1
    prefix[j - 1] = 1
    paths, diag = constrained_scl([1] * spec.N, spec, L, prefix, with_diagnostics=True)
    found = {p.decisions for p in paths if _codeword_weight(p.decisions) == d_m}
    note = None
    if diag.min_discarded_pm is not None and diag.min_discarded_pm <= trigger_pm:
        overlap = len(zero_capacity_set(i, spec.N) & set(spec.A))
        wide = constrained_scl([1] * spec.N, spec, 1 << overlap, prefix)
        refound = {p.decisions for p in wide if _codeword_weight(p.decisions) == d_m}
        if refound != found:
            note = (
                f"list size {L} for trigger {i}, split {j} lost "
                f"{len(refound - found)} vectors; recovered at width {1 << overlap}"
            )
            found = refound
    return sorted(found), note


def search_subset(spec, i: int, j: int, L: int):
    """All minimum-weight vectors whose first two ones sit at i and j."""
    d_m, a_m = min_distance(spec)
    if i not in a_m:
        raise ValueError(f"position {i} is not a minimum-weight information row")
    if j not in (zero_capacity_set(i, spec.N) & set(spec.A)):
        raise ValueError(
            f"position {j} is not a zero-capacity information position after {i}"
        )
    trigger_pm = sc_retrace([1] * spec.N, spec, {i}).pm
    vectors, _ = _search_pair(spec, i, j, L, d_m, trigger_pm)
    return vectors


def _subset_scl_trigger(spec, i, d_m):
    """U(i): the bare row message plus every constrained-search subset,
    with the shrinking list schedule 2**(overlap - cnt)."""
    vectors = [_single_one(i, spec.N)]
    splits = sorted(zero_capacity_set(i, spec.N) & set(spec.A))
    if not splits:
        return vectors, 0, None
    trigger_pm = sc_retrace([1] * spec.N, spec, {i}).pm
    max_list = 0
    notes = []
    for cnt, j in enumerate(splits, start=1):
        L = 1 << (len(splits) - cnt)
        max_list = max(max_list, L)
        found, note = _search_pair(spec, i, j, L, d_m, trigger_pm)
        vectors.extend(found)
        if note:
            notes.append(note)
    return vectors, max_list, "; ".join(notes) if notes else None


def enumerate_subset_scl(spec, threads: int = 1) -> MhwResult:
    d_m, a_m = min_distance(spec)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outs = list(pool.map(lambda i: _subset_scl_trigger(spec, i, d_m), a_m))
    else:
        outs = [_subset_scl_trigger(spec, i, d_m) for i in a_m]
    vectors = _merge_subsets(zip(a_m, (o[0] for o in outs)))
    max_list = max((o[1] for o in outs), default=0)
    notes = [o[2] for o in outs if o[2]]
    warning = "; ".join(notes) if notes else None
    return MhwResult(d_m, len(vectors), vectors, "SUBSET_SCL", max_list, warning)


# ---- zero-split walker ----


def zero_split_subset(spec, i: int):
    """Depth-first enumeration of U(i) by following hard decisions.

    Returns (leaves, branch_positions, kills): surviving decision vectors,
    the positions where an exactly zero information LLR forked the walk,
    and how many branches died at a negative frozen LLR.
    """
    N = spec.N
    n = N.bit_length() - 1
    leaves = []
    branch_positions = set()
    kills = 0
    stack = [(_TreeState([1] * N, n), [], 1)]
    while stack:
        tree, decisions, pos = stack.pop()
        alive = True
        while pos <= N:
            llr = tree.leaf_llr(pos - 1)
            if pos < i:
                bit = 0
            elif pos == i:
                bit = 1
            elif not spec.is_info(pos):
                if llr < 0:
                    alive = False
                    break
                bit = 0
            elif llr == 0:
                branch_positions.add(pos)
                twin = tree.clone()
                twin.commit(pos - 1, 1)
                stack.append((twin, decisions + [1], pos + 1))
                bit = 0
            else:
                bit = 0 if llr > 0 else 1
            tree.commit(pos - 1, bit)
            decisions.append(bit)
            pos += 1
        if alive:
            leaves.append(tuple(decisions))
        else:
            kills += 1
    return sorted(leaves), branch_positions, kills


def enumerate_zero_split(spec, threads: int = 1) -> MhwResult:
    d_m, a_m = min_distance(spec)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outs = list(pool.map(lambda i: zero_split_subset(spec, i), a_m))
    else:
        outs = [zero_split_subset(spec, i) for i in a_m]
    per_trigger = []
    for i, (leaves, _, _) in zip(a_m, outs):
        kept = [u for u in leaves if _codeword_weight(u) == d_m]
        per_trigger.append((i, kept))
    vectors = _merge_subsets(per_trigger)
    return MhwResult(d_m, len(vectors), vectors, "ZERO_SPLIT", 0)


# ---- global list search ----


def scl_global_search(spec, L: int) -> MhwResult:
    d_m, _ = min_distance(spec)
    warning = None
    needed = bound_count(spec, materialize_sets=False).total + 1
    if L < needed:
        warning = (
            f"possible omission: list size {L} is below the counting bound "
            f"plus one ({needed})"
        )
    survivors = scl_decode([1] * spec.N, spec, L)
    vectors = {
        p.decisions
        for p in survivors
        if any(p.decisions) and _codeword_weight(p.decisions) == d_m
    }
    return MhwResult(d_m, len(vectors), _sorted_vectors(vectors), "SCL_GLOBAL", L, warning)


# ---- enumeration files ----

_ENUM_MAGIC = "polarmhw-enum 1"


def _pack_bits(bits):
    value = 0
    for k, b in enumerate(bits):
        value |= int(b) << k
    return value


def _unpack_bits(value, length):
    return tuple((value >> k) & 1 for k in range(length))


def write_enumeration(path, spec, result: MhwResult, header_lines=()) -> None:
    """Stable text dump: header fields then one lexicographically sorted
    record per vector (message bits in A order and the full u, hex-packed).
    header_lines are embedded as comments right after the magic line."""
    A = sorted(spec.A)
    lines = [_ENUM_MAGIC]
    for extra in header_lines:
        lines.append(extra if extra.startswith("#") else f"# {extra}")
    lines += [
        f"N={spec.N}",
        f"K={spec.K}",
        "A=" + " ".join(str(a) for a in A),
        f"d_m={result.d_m}",
        f"method={result.method}",
        f"count={result.count}",
        f"maxListUsed={result.max_list_used}",
    ]
    if result.warning:
        lines.append(f"# warning: {result.warning}")
    for u in sorted(result.vectors):
        msg = _pack_bits(u[a - 1] for a in A)
        lines.append(f"msg={msg:x} u={_pack_bits(u):x} w={_codeword_weight(u)}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_enumeration(path):
    """Parse an enumeration file back into (CodeSpec, MhwResult)."""
    with open(path, encoding="utf-8") as fh:
        raw = [line.rstrip("\n") for line in fh]
    if not raw or raw[0] != _ENUM_MAGIC:
        raise EnumFormatError(f"{path}: missing '{_ENUM_MAGIC}' header")
    fields = {}
    records = []
    for lineno, line in enumerate(raw[1:], start=2):
        if not line or line.startswith("#"):
            continue
        if line.startswith("msg="):
            parts = line.split()
            if len(parts) != 3 or not parts[1].startswith("u=") or not parts[2].startswith("w="):
                raise EnumFormatError(f"{path}:{lineno}: bad record {line!r}")
            records.append(
                (int(parts[0][4:], 16), int(parts[1][2:], 16), int(parts[2][2:]))
            )
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise EnumFormatError(f"{path}:{lineno}: expected key=value, got {line!r}")
        if key in fields:
            raise EnumFormatError(f"{path}:{lineno}: duplicate field {key!r}")
        fields[key] = value
    for need in ("N", "K", "A", "d_m", "method", "count", "maxListUsed"):
        if need not in fields:
            raise EnumFormatError(f"{path}: missing field {need!r}")
    try:
        N = int(fields["N"])
        K = int(fields["K"])
        A = tuple(int(tok) for tok in fields["A"].split())
        d_m = int(fields["d_m"])
        count = int(fields["count"])
        max_list = int(fields["maxListUsed"])
    except ValueError as exc:
        raise EnumFormatError(f"{path}: {exc}") from exc
    if len(A) != K:
        raise EnumFormatError(f"{path}: K={K} but A lists {len(A)} positions")
    if count != len(records):
        raise EnumFormatError(f"{path}: header count {count} != {len(records)} records")
    spec = CodeSpec(N, A)
    vectors = []
    for msg, packed, _ in records:
        u = _unpack_bits(packed, N)
        if _pack_bits(u[a - 1] for a in sorted(A)) != msg:
            raise EnumFormatError(f"{path}: message/u mismatch for u={packed:x}")
        if any(u[p] for p in range(N) if (p + 1) not in spec.A):
            raise EnumFormatError(f"{path}: nonzero frozen position in u={packed:x}")
        vectors.append(u)
    result = MhwResult(d_m, count, _sorted_vectors(vectors), fields["method"], max_list)
    return spec, result
