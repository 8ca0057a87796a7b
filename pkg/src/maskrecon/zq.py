"""Canonical arithmetic over Z_q.

Every residue is stored as its least non-negative representative; the
branch conditions of the masked reduction gadgets compare these
representatives directly, so no lazy-reduction tricks are allowed here.
Python integers are unbounded, so products such as q * 2^s at signature
scale (about 2^46) never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass


class ModulusMismatchError(ValueError):
    """Raised when residues from different rings are combined."""


@dataclass(frozen=True)
class Modulus:
    """Ring size q.  Any q >= 2 is accepted; primality is not checked."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or self.q < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {self.q!r}")

    def __int__(self) -> int:
        return self.q


@dataclass(frozen=True)
class Residue:
    """An element of Z_q with its canonical representative ``val``."""

    val: int
    q: Modulus

    def __post_init__(self):
        if not 0 <= self.val < self.q.q:
            raise ValueError(f"residue {self.val} out of range for q={self.q.q}")

    def __int__(self) -> int:
        return self.val


def canon(n: int, q: Modulus) -> Residue:
    """Embed a (possibly negative) integer into Z_q."""
    return Residue(n % q.q, q)


def _same_modulus(a: Residue, b: Residue) -> Modulus:
    if a.q != b.q:
        raise ModulusMismatchError(f"moduli differ: {a.q.q} vs {b.q.q}")
    return a.q


def add(a: Residue, b: Residue) -> Residue:
    q = _same_modulus(a, b)
    return Residue((a.val + b.val) % q.q, q)


def sub(a: Residue, b: Residue) -> Residue:
    q = _same_modulus(a, b)
    return Residue((a.val - b.val) % q.q, q)


def pow2_mod(e: int, q: Modulus) -> Residue:
    """2^e reduced into Z_q, by square-and-reduce (safe for any e >= 0)."""
    if e < 0:
        raise ValueError("exponent must be non-negative")
    return Residue(pow(2, e, q.q), q)
