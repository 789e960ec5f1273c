"""Component counts for moduli of polarised Kummer-type manifolds.

Three independent routes compute the number of components for a profile
``(n, d, t)``:

* :func:`count_components_closed_form` evaluates the closed formula branch by
  branch on :class:`~kumcount.arith.ProfileInvariants`;
* :func:`count_components_oracle` enumerates the residues ``c mod t`` solving
  the isotropy congruence and identifies ``c`` with ``-c``;
* :func:`enumerate_component_classes` builds the marked rank-2 lattices
  ``(T, l)`` explicitly, and :func:`pairs_isometric` decides marked isometry
  between them by short-vector enumeration.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from .arith import (
    check_profile,
    derive_profile,
    euler_phi,
    is_quadratic_residue,
    rho,
)
from .errors import ConsistencyError, DomainError

BRANCHES = ("T1a", "T1b", "T1c", "T2", "T3a", "T3b", "T3c", "T3d", "ZERO")


def _check_n(n: int) -> None:
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")


def count_embedding_orbit_classes(n: int) -> int:
    """Orbits of primitive embeddings of Lambda_n into 4U: ``2^(rho(n+1)-1)``."""
    _check_n(n)
    return 2 ** (rho(n + 1) - 1)


def count_marked_components(n: int) -> int:
    """Connected components of the marked moduli space, ``2^(rho(n+1)+1)``.

    The map to (embedding orbit, orientation) is 2:1 and there are two
    orientations.
    """
    return 2 * count_embedding_orbit_classes(n) * 2


# -- congruences -------------------------------------------------------------


def isotropy_holds(n: int, d: int, t: int, c: int) -> bool:
    """Whether the graph of ``2d/t -> c(2n+2)/t`` is isotropic.

    Cleared of denominators: ``2d + c^2 (2n+2) = 0 mod 2t^2``.
    """
    check_profile(n, d, t)
    return (2 * d + c * c * (2 * n + 2)) % (2 * t * t) == 0


def congruence_eq2_holds(n: int, d: int, t: int, c: int) -> bool:
    """The reduced form ``g1 (d1 + c^2 n1) = 0 mod 2 t1``."""
    p = derive_profile(n, d, t)
    return p.g1 * (p.d1 + c * c * p.n1) % (2 * p.t1) == 0


def isotropic_residues(n: int, d: int, t: int) -> list[int]:
    """All ``0 <= c < t`` with ``gcd(c, t) = 1`` satisfying the isotropy condition.

    For ``t = 1`` the only residue is ``c = 0``.
    """
    check_profile(n, d, t)
    return [c for c in range(t) if gcd(c, t) == 1 and isotropy_holds(n, d, t, c)]


def class_representatives(residues: Sequence[int], t: int) -> list[int]:
    """Smaller member of each ``{c, t - c}`` pair."""
    return [c for c in residues if 2 * c <= t]


def count_components_oracle(n: int, d: int, t: int) -> int:
    raw = len(isotropic_residues(n, d, t))
    if t <= 2:
        return raw
    if raw % 2:
        raise ConsistencyError(f"odd number of isotropic residues for {(n, d, t)}")
    return raw // 2


# -- closed form ---------------------------------------------------------------


@dataclass(frozen=True)
class CountResult:
    count: int
    branch: str

    def __post_init__(self):
        if self.branch not in BRANCHES:
            raise ValueError(f"unknown branch label {self.branch!r}")
        if (self.branch == "ZERO") != (self.count == 0):
            raise ConsistencyError(f"branch {self.branch} with count {self.count}")


def _odd(x: int) -> bool:
    return x % 2 == 1


def _fired_condition(p) -> str | None:
    """Which of the four bullet conditions holds, as 'a'..'d', or None.

    a: g1 even, (d1,t1) = (n1,t1) = 1, -d1/n1 QR mod t1
    b: g1, t1, d1 odd, (d1,t1) = (n1,2t1) = 1, -d1/n1 QR mod 2t1
    c: g1, t1, w odd, d1 even, (d1,t1) = (n1,2t1) = 1, -d1/4n1 QR mod t1
    d: g1 odd, t1 even, (d1,t1) = (n1,2t1) = 1, -d1/n1 QR mod 2t1
    """
    d1, n1, g1, t1, w = p.d1, p.n1, p.g1, p.t1, p.w
    units_t = gcd(d1, t1) == 1 and gcd(n1, t1) == 1
    units_2t = gcd(d1, t1) == 1 and gcd(n1, 2 * t1) == 1
    if not _odd(g1):
        if units_t and is_quadratic_residue(-d1, n1, t1):
            return "a"
        return None
    if _odd(t1):
        if _odd(d1):
            if units_2t and is_quadratic_residue(-d1, n1, 2 * t1):
                return "b"
        elif _odd(w):
            if units_2t and is_quadratic_residue(-d1, 4 * n1, t1):
                return "c"
        return None
    if units_2t and is_quadratic_residue(-d1, n1, 2 * t1):
        return "d"
    return None


def count_components_closed_form(n: int, d: int, t: int) -> CountResult:
    p = derive_profile(n, d, t)
    fired = _fired_condition(p)
    if fired is None:
        return CountResult(0, "ZERO")
    if t <= 2:
        return CountResult(1, "T3" + fired)
    if fired == "d":
        label, primes = "T2", rho(p.t1 // 2)
    else:
        label, primes = "T1" + fired, rho(p.t1)
    value = p.w_plus * euler_phi(p.w_minus) * Fraction(2) ** (primes - 1)
    if value.denominator != 1:
        raise ConsistencyError(f"non-integral closed form {value} at {(n, d, t)}")
    return CountResult(int(value), label)


# -- marked rank-2 lattices ------------------------------------------------------


@dataclass(frozen=True)
class PairClass:
    """The marked lattice (T, l) attached to an isotropic residue ``c``.

    ``T`` is the overlattice of ``<2d> + <2n+2> = Z e1 + Z e2`` generated by
    ``x = (e1 + c e2)/t``; coordinates are taken in the basis ``(x, e2)`` and
    ``l = e1 = t x - c e2``.
    """

    n: int
    d: int
    t: int
    c: int
    gram: tuple[tuple[int, int], tuple[int, int]]
    l_coords: tuple[int, int]

    @property
    def det(self) -> int:
        (a, b), (_, e) = self.gram
        return a * e - b * b

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        return _pair(self.gram, u, v)


def _pair(gram, u, v) -> int:
    (a, b), (_, e) = gram
    return a * u[0] * v[0] + b * (u[0] * v[1] + u[1] * v[0]) + e * u[1] * v[1]


def build_pair_lattice(n: int, d: int, t: int, c: int) -> PairClass:
    check_profile(n, d, t)
    if gcd(c, t) != 1:
        raise DomainError(f"c={c} is not a unit mod t={t}")
    m = 2 * n + 2
    top = 2 * d + c * c * m
    if top % (t * t) or (top // (t * t)) % 2 or (c * m) % t:
        raise DomainError(f"isotropy fails for (n, d, t, c) = {(n, d, t, c)}")
    xx = top // (t * t)
    xe = c * m // t
    return PairClass(n, d, t, c, ((xx, xe), (xe, m)), (t, -c))


def enumerate_component_classes(n: int, d: int, t: int) -> list[PairClass]:
    reps = class_representatives(isotropic_residues(n, d, t), t)
    return [build_pair_lattice(n, d, t, c) for c in reps]


def _check_positive_definite(gram) -> None:
    (a, b), (b2, e) = gram
    if b != b2:
        raise DomainError("Gram matrix is not symmetric")
    if a <= 0 or a * e - b * b <= 0:
        raise DomainError("Gram matrix is not positive definite")


def vectors_of_norm(gram, norm: int) -> list[tuple[int, int]]:
    """All integer ``v`` with ``v.v == norm`` in a positive definite rank-2 lattice."""
    _check_positive_definite(gram)
    (a, b), (_, e) = gram
    det = a * e - b * b
    # x_i^2 <= norm * adj_ii / det
    bx = isqrt(max(norm * e, 0) // det)
    out = []
    for x in range(-bx, bx + 1):
        # e y^2 + 2 b x y + a x^2 - norm = 0
        disc = (b * x) ** 2 - e * (a * x * x - norm)
        if disc < 0:
            continue
        r = isqrt(disc)
        if r * r != disc:
            continue
        for num in {-b * x + r, -b * x - r}:
            if num % e == 0:
                out.append((x, num // e))
    return sorted(out)


def _complete_basis(v: Sequence[int]) -> tuple[int, int]:
    """Some ``s`` with ``det[v, s] = 1``; ``v`` must be primitive."""
    p, q = v
    g, x, y = _xgcd(p, q)
    if g != 1:
        raise DomainError(f"marked vector {tuple(v)} is not primitive")
    # p*x + q*y = 1, so det[[p, -y], [q, x]] = 1
    return (-y, x)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def marked_isometric(gram1, l1: Sequence[int], gram2, l2: Sequence[int]) -> bool:
    """Is there an isometry of rank-2 lattices taking ``l1`` to ``l2``?

    Complete the marked vector to a basis ``(l1, s)`` of the first lattice and
    search the second for ``w`` with ``w.w = s.s`` and ``l2.w = l1.s``; the
    pair ``(l2, w)`` must then be a basis.
    """
    _check_positive_definite(gram1)
    _check_positive_definite(gram2)
    s = _complete_basis(l1)
    _complete_basis(l2)
    if _pair(gram1, l1, l1) != _pair(gram2, l2, l2):
        return False
    det1 = gram1[0][0] * gram1[1][1] - gram1[0][1] ** 2
    det2 = gram2[0][0] * gram2[1][1] - gram2[0][1] ** 2
    if det1 != det2:
        return False
    target = _pair(gram1, l1, s)
    for w in vectors_of_norm(gram2, _pair(gram1, s, s)):
        if _pair(gram2, l2, w) != target:
            continue
        if abs(l2[0] * w[1] - l2[1] * w[0]) == 1:
            return True
    return False


def pairs_isometric(p1: PairClass, p2: PairClass) -> bool:
    return marked_isometric(p1.gram, p1.l_coords, p2.gram, p2.l_coords)
