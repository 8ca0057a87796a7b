"""Pure-Python sweep kernels.

Reference implementation of the enumeration loops; a compiled Cython
twin (maskrecon._kernels) with identical signatures and results is
preferred at import time when available.  Everything here works on plain
integers: gadget kinds are passed as the small codes from
GadgetKind.code, two-branch gadgets receive their wraparound offset
pre-reduced mod q.

All loops enumerate every mask value explicitly.  Closed-form shortcuts
for the preimage sets exist for the two-branch gadgets, but these
kernels are the ground-truth side of those claims and must not use them.
"""

from __future__ import annotations

BACKEND = "python"

# kind codes (see GadgetKind.code)
_IDENTITY, _BARRETT, _MONTGOMERY, _UNMASKED, _LOSSY = range(5)


def _eval(kind: int, q: int, off: int, t: int, x: int, m: int) -> int:
    if kind == _IDENTITY:
        return (x - m) % q
    if kind == _BARRETT or kind == _MONTGOMERY:
        return x - m if m <= x else (x - m + off) % q
    if kind == _UNMASKED:
        return x
    return (x + m // t) % q


def output_histogram(kind, q, off, t, x):
    """Counts[v] = |{m : G(x, m) = v}| by a full mask sweep."""
    counts = [0] * q
    for m in range(q):
        counts[_eval(kind, q, off, t, x, m)] += 1
    return counts


def sweep_max_mult(kind, q, off, t, secrets):
    """Per-secret (max multiplicity, smallest v attaining it)."""
    out = []
    for x in secrets:
        counts = output_histogram(kind, q, off, t, x)
        best = 0
        best_v = 0
        for v in range(q):
            if counts[v] > best:
                best = counts[v]
                best_v = v
        out.append((best, best_v))
    return out


def preimage_count(kind, q, off, t, x, v):
    n = 0
    for m in range(q):
        if _eval(kind, q, off, t, x, m) == v:
            n += 1
    return n


def preimage_list(kind, q, off, t, x, v):
    return [m for m in range(q) if _eval(kind, q, off, t, x, m) == v]


def renewal_count(kind, q, off, t, x, w_target):
    """|{(m1, f) : G(x, m1) - f = w_target}| over all q^2 pairs."""
    n = 0
    for m1 in range(q):
        a = _eval(kind, q, off, t, x, m1)
        for f in range(q):
            if (a - f) % q == w_target:
                n += 1
    return n


def pipeline_histogram(kinds, q, offs, ts, x):
    """Counts over the output value for every mask tuple of the pipeline.

    Stage i consumes the previous value minus a fresh mask (no fresh mask
    before stage 0) and its own state mask; all q^k * q^(k-1) tuples are
    enumerated, sharing common prefixes.
    """
    k = len(kinds)
    counts = [0] * q

    def rec(depth, a):
        kind, off, t = kinds[depth], offs[depth], ts[depth]
        if depth == k - 1:
            for m in range(q):
                counts[_eval(kind, q, off, t, a, m)] += 1
        else:
            for m in range(q):
                out = _eval(kind, q, off, t, a, m)
                for f in range(q):
                    rec(depth + 1, (out - f) % q)

    rec(0, x)
    return counts


def cross_check_sweep(q, s, w, q_prime, secrets):
    """Full-algorithm vs two-branch comparison over all masks per secret.

    Returns (pairs_checked, mismatches, first_x, first_m); the first
    mismatch is the smallest (x, m) in scan order, or (-1, -1).
    """
    R = 1 << s
    wmod = 1 << w
    off = pow(2, w - s if w >= s else 0, q)
    pairs = 0
    bad = 0
    first_x = -1
    first_m = -1
    for x in secrets:
        xs = x << s
        for m in range(q):
            T = (xs - (m << s)) % wmod
            red = (T + ((T % R) * q_prime % R) * q) >> s
            internal = x - m if m <= x else (x - m + off) % q
            if red % q != internal:
                bad += 1
                if first_x < 0:
                    first_x = x
                    first_m = m
            pairs += 1
    return pairs, bad, first_x, first_m
