"""Hardware-faithful single-mask gadgets over Z_q.

Five gadget kinds are modeled:

* identity   -- the masked butterfly wire, x - m; bijective in the mask.
* barrett    -- two-branch masked Barrett reduction; the wraparound branch
                adds 2^s mod q.
* montgomery -- two-branch masked Montgomery reduction; the wraparound
                branch adds 2^(w-s) mod q, where w is the hardware
                register width.  w - s saturates at 0, so for w < s the
                offset collapses to 1.
* unmasked   -- passes the secret straight through; worst case for the
                mask-preimage multiplicity (every mask hits).
* lossy      -- synthetic gadget x + floor(m/t); its multiplicity is
                measured, not assumed, at construction.

The Montgomery full reduction algorithm is also provided so that the
two-branch map can be cross-validated against the real algorithm on the
wrapped register value T = (x*2^s - m*2^s) mod 2^w.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from .zq import Modulus, Residue, add, canon, pow2_mod, sub


class GadgetKind(enum.Enum):
    IDENTITY = "identity"
    BARRETT = "barrett"
    MONTGOMERY = "montgomery"
    UNMASKED = "unmasked"
    LOSSY = "lossy"

    @property
    def code(self) -> int:
        """Small integer code shared with the sweep kernels."""
        return _KIND_CODES[self]


_KIND_CODES = {
    GadgetKind.IDENTITY: 0,
    GadgetKind.BARRETT: 1,
    GadgetKind.MONTGOMERY: 2,
    GadgetKind.UNMASKED: 3,
    GadgetKind.LOSSY: 4,
}


def identity_compute(q: Modulus, x: Residue, m: Residue) -> Residue:
    """Masked butterfly wire: x - m."""
    return sub(x, m)


def barrett_compute(q: Modulus, s: int, x: Residue, m: Residue) -> Residue:
    """Two-branch Barrett internal map; wraparound adds 2^s mod q."""
    if m.val <= x.val:
        return sub(x, m)
    return add(sub(x, m), pow2_mod(s, q))


def collision_offset(q: Modulus, s: int, w: int) -> Residue:
    """Montgomery wraparound constant 2^(w-s) mod q, saturating at w < s."""
    return pow2_mod(max(w - s, 0), q)


def montgomery_compute(q: Modulus, s: int, w: int, x: Residue, m: Residue) -> Residue:
    """Two-branch Montgomery internal map; wraparound adds 2^(w-s) mod q."""
    if m.val <= x.val:
        return sub(x, m)
    return add(sub(x, m), collision_offset(q, s, w))


def unmasked_compute(q: Modulus, x: Residue, m: Residue) -> Residue:
    """Unprotected stage: the mask is ignored entirely."""
    return x


def lossy_compute(q: Modulus, t: int, x: Residue, m: Residue) -> Residue:
    """Synthetic mask-lossy gadget: x + floor(m/t)."""
    if t < 1:
        raise ValueError("lossiness factor t must be >= 1")
    return add(x, canon(m.val // t, q))


def masked_montgomery_input(q: Modulus, s: int, w: int, x: Residue, m: Residue) -> int:
    """Register value T = (x*2^s - m*2^s) mod 2^w seen by the reducer.

    The subtraction happens over the integers and wraps modulo 2^w,
    exactly as it does in a w-bit datapath.
    """
    if w < 1:
        raise ValueError("register width w must be >= 1")
    return ((x.val << s) - (m.val << s)) % (1 << w)


def montgomery_full_reduce(q: Modulus, s: int, T: int) -> Residue:
    """Classic Montgomery reduction of T with radix R = 2^s.

    Computes q' = -q^(-1) mod R, then (T + ((T mod R) * q' mod R) * q) / R;
    the division is exact by construction.  The result is reduced fully
    into Z_q, so the identity result == T * R^(-1) mod q holds for any
    T >= 0, not just for T < q*R.
    """
    if s < 1:
        raise ValueError("radix exponent s must be >= 1")
    if q.q % 2 == 0:
        raise ValueError("modulus must be odd to invert it modulo 2^s")
    if T < 0:
        raise ValueError("T must be non-negative")
    R = 1 << s
    q_prime = (-pow(q.q, -1, R)) % R
    t = T + ((T % R) * q_prime % R) * q.q
    if t % R != 0:
        raise AssertionError("Montgomery division not exact")
    return canon(t >> s, q)


def cross_check_montgomery(q: Modulus, s: int, w: int, x: Residue, m: Residue) -> bool:
    """Does the full algorithm agree with the two-branch map for (x, m)?

    Both sides are compared as elements of Z_q.
    """
    T = masked_montgomery_input(q, s, w, x, m)
    return montgomery_full_reduce(q, s, T) == montgomery_compute(q, s, w, x, m)


def min_register_width(q: Modulus, s: int) -> int:
    """Smallest w for which the w-bit register holds any q*2^s product."""
    return math.ceil(math.log2(q.q * (1 << s)))


@dataclass(frozen=True)
class GadgetSpec:
    """A named gadget with its parameters and declared max multiplicity.

    ``declared_max_mult`` is the bound the gadget claims for
    |{m : compute(x, m) = v}| over all (x, v); the oracle module measures
    the actual value and compares.
    """

    kind: GadgetKind
    q: Modulus
    s: int = 0
    w: int = 0
    t: int = 1
    declared_max_mult: int = 1

    def __post_init__(self):
        if self.declared_max_mult < 1:
            raise ValueError("declared_max_mult must be >= 1")
        if self.kind is GadgetKind.LOSSY and self.t < 1:
            raise ValueError("lossiness factor t must be >= 1")

    @classmethod
    def identity(cls, q: Modulus, declared_max_mult: int | None = None) -> "GadgetSpec":
        return cls(GadgetKind.IDENTITY, q,
                   declared_max_mult=declared_max_mult or 1)

    @classmethod
    def barrett(cls, q: Modulus, s: int,
                declared_max_mult: int | None = None) -> "GadgetSpec":
        return cls(GadgetKind.BARRETT, q, s=s,
                   declared_max_mult=declared_max_mult or 2)

    @classmethod
    def montgomery(cls, q: Modulus, s: int, w: int,
                   declared_max_mult: int | None = None) -> "GadgetSpec":
        need = min_register_width(q, s)
        if w < need:
            warnings.warn(
                f"register width w={w} is below ceil(log2(q*2^s))={need}; "
                f"the register can wrap more than once and the two-branch "
                f"map may diverge from the full algorithm",
                UserWarning, stacklevel=2)
        return cls(GadgetKind.MONTGOMERY, q, s=s, w=w,
                   declared_max_mult=declared_max_mult or 2)

    @classmethod
    def unmasked(cls, q: Modulus, declared_max_mult: int | None = None) -> "GadgetSpec":
        return cls(GadgetKind.UNMASKED, q,
                   declared_max_mult=declared_max_mult or q.q)

    @classmethod
    def lossy(cls, q: Modulus, t: int,
              declared_max_mult: int | None = None) -> "GadgetSpec":
        if not 1 <= t <= q.q:
            raise ValueError(f"lossiness factor t must satisfy 1 <= t <= q, got {t}")
        if declared_max_mult is None:
            from .oracle import lossy_max_mult
            declared_max_mult = lossy_max_mult(q, t)
        return cls(GadgetKind.LOSSY, q, t=t, declared_max_mult=declared_max_mult)

    def compute(self, x: Residue, m: Residue) -> Residue:
        if self.kind is GadgetKind.IDENTITY:
            return identity_compute(self.q, x, m)
        if self.kind is GadgetKind.BARRETT:
            return barrett_compute(self.q, self.s, x, m)
        if self.kind is GadgetKind.MONTGOMERY:
            return montgomery_compute(self.q, self.s, self.w, x, m)
        if self.kind is GadgetKind.UNMASKED:
            return unmasked_compute(self.q, x, m)
        return lossy_compute(self.q, self.t, x, m)

    def offset_val(self) -> int:
        """Wraparound offset used by the two-branch kinds (0 otherwise)."""
        if self.kind is GadgetKind.BARRETT:
            return pow2_mod(self.s, self.q).val
        if self.kind is GadgetKind.MONTGOMERY:
            return collision_offset(self.q, self.s, self.w).val
        return 0

    def label(self) -> str:
        if self.kind is GadgetKind.BARRETT:
            return f"barrett(s={self.s})"
        if self.kind is GadgetKind.MONTGOMERY:
            return f"montgomery(s={self.s},w={self.w})"
        if self.kind is GadgetKind.LOSSY:
            return f"lossy(t={self.t})"
        return self.kind.value

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "q": self.q.q,
            "s": self.s if self.kind in (GadgetKind.BARRETT, GadgetKind.MONTGOMERY) else None,
            "w": self.w if self.kind is GadgetKind.MONTGOMERY else None,
            "t": self.t if self.kind is GadgetKind.LOSSY else None,
            "declared_max_mult": self.declared_max_mult,
        }
