import random

from polarmhw.bitops import encode


class RawSpec:
    """Duck-typed stand-in for CodeSpec, allowing empty information sets."""

    def __init__(self, N, A):
        self.N = N
        self.A = tuple(sorted(A))
        self._info = frozenset(A)

    @property
    def K(self):
        return len(self.A)

    def is_info(self, position):
        return position in self._info


def message_to_u(spec, message_bits):
    u = [0] * spec.N
    for pos, bit in zip(spec.A, message_bits):
        u[pos - 1] = bit
    return tuple(u)


def first_one(u):
    for pos, bit in enumerate(u, start=1):
        if bit:
            return pos
    return None


def brute_force_minimum_weight(spec):
    """Scalar reference enumeration over every nonzero message.

    Returns (min nonzero codeword weight, set of attaining u vectors).  Kept
    deliberately naive and list-based so it shares no code path with the
    packed-word oracle inside the package.
    """
    assert spec.K <= 16, "scalar reference is for small codes only"
    best = None
    vectors = []
    for m in range(1, 1 << spec.K):
        u = message_to_u(spec, [(m >> k) & 1 for k in range(spec.K)])
        w = sum(encode(list(u)))
        if best is None or w < best:
            best, vectors = w, [u]
        elif w == best:
            vectors.append(u)
    return best, set(vectors)


def group_by_trigger(vectors):
    groups = {}
    for u in vectors:
        groups.setdefault(first_one(u), set()).add(u)
    return groups


def random_specs(count, N_choices, seed, max_K=16):
    """Reproducible stream of random information sets as RawSpec-compatible CodeSpecs."""
    from polarmhw.construction import CodeSpec

    rng = random.Random(seed)
    out = []
    for _ in range(count):
        N = rng.choice(list(N_choices))
        K = rng.randint(1, min(N, max_K))
        A = rng.sample(range(1, N + 1), K)
        out.append(CodeSpec(N, tuple(A)))
    return out
