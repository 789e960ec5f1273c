"""Elementary number theory used by the component counts.

Everything here works on plain Python integers, so results are exact at any
size; factorisation is delegated to :func:`sympy.factorint`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, prod

from sympy import factorint
from sympy.ntheory import is_quad_residue as _sympy_is_qr

from .errors import DomainError, InvalidProfileError

__all__ = [
    "ProfileInvariants",
    "check_profile",
    "derive_profile",
    "euler_phi",
    "factorize",
    "is_quadratic_residue",
    "rho",
    "split_w",
    "valid_divisibilities",
]


def _check_positive(m: int, name: str = "m") -> None:
    if m < 1:
        raise DomainError(f"{name} must be >= 1, got {m}")


def factorize(m: int) -> list[tuple[int, int]]:
    """Return ``[(prime, exponent), ...]`` sorted by prime; ``[]`` for 1."""
    _check_positive(m)
    return sorted(factorint(m).items())


def rho(m: int) -> int:
    """Number of distinct primes dividing ``m`` (``rho(1) == 0``)."""
    return len(factorize(m))


def euler_phi(m: int) -> int:
    result = m
    for p, _ in factorize(m):
        result = result // p * (p - 1)
    return result


def is_quadratic_residue(num: int, den: int, m: int) -> bool:
    """True iff ``num * den^-1`` is a square modulo ``m``.

    Moduli 1 and 2 always answer True. The denominator has to be a unit mod
    ``m``; otherwise :class:`DomainError` is raised.
    """
    _check_positive(m)
    if gcd(den, m) != 1:
        raise DomainError(f"denominator {den} is not invertible mod {m}")
    if m <= 2:
        return True
    a = num * pow(den, -1, m) % m
    return bool(_sympy_is_qr(a, m))


def split_w(w: int, t1: int) -> tuple[int, int]:
    """Split ``w = w_plus * w_minus`` where ``w_plus`` collects the full prime
    powers of ``w`` at primes dividing ``gcd(w, t1)``."""
    _check_positive(w, "w")
    _check_positive(t1, "t1")
    shared = gcd(w, t1)
    w_plus = prod(p**e for p, e in factorize(w) if shared % p == 0)
    return w_plus, w // w_plus


@dataclass(frozen=True)
class ProfileInvariants:
    """All auxiliary integers attached to a polarisation profile (n, d, t)."""

    n: int
    d: int
    t: int
    d1: int
    n1: int
    g: int
    w: int
    g1: int
    t1: int
    w_plus: int
    w_minus: int


def valid_divisibilities(n: int, d: int) -> list[int]:
    """All t with ``t | gcd(2d, 2n+2)``, ascending."""
    big = gcd(2 * d, 2 * n + 2)
    return [t for t in range(1, big + 1) if big % t == 0]


def check_profile(n: int, d: int, t: int) -> None:
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if d < 1 or t < 1:
        raise DomainError(f"d and t must be positive, got d={d}, t={t}")
    if gcd(2 * d, 2 * n + 2) % t:
        raise InvalidProfileError(
            f"t={t} does not divide gcd(2d, 2n+2) = gcd({2 * d}, {2 * n + 2})"
        )


@lru_cache(maxsize=65536)
def derive_profile(n: int, d: int, t: int) -> ProfileInvariants:
    check_profile(n, d, t)
    big = gcd(2 * d, 2 * n + 2)
    d1 = 2 * d // big
    n1 = (2 * n + 2) // big
    g = big // t
    w = gcd(g, t)
    g1 = g // w
    t1 = t // w
    w_plus, w_minus = split_w(w, t1)
    return ProfileInvariants(n, d, t, d1, n1, g, w, g1, t1, w_plus, w_minus)
