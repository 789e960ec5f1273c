"""The lattice Lambda_n = 3U + <-2-2n> and its isometries.

Coordinates are always taken in the fixed basis ``(e1, f1, e2, f2, e3, f3,
delta)``: each ``(e_i, f_i)`` spans a hyperbolic plane and ``delta`` has
square ``-(2n+2)``. Matrices act on column vectors, so column ``j`` of a
matrix is the image of basis vector ``j``.

All arithmetic is carried out on Python integers (numpy ``object`` arrays for
matrices) so long reflection words never overflow.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import ConsistencyError, DomainError

RANK = 7
BASIS_NAMES = ("e1", "f1", "e2", "f2", "e3", "f3", "delta")

# Positive definite 3-space used to read off orientations: p_i = e_i + f_i.
_POSITIVE_FRAME = np.array(
    [
        [1, 0, 0],
        [1, 0, 0],
        [0, 1, 0],
        [0, 1, 0],
        [0, 0, 1],
        [0, 0, 1],
        [0, 0, 0],
    ],
    dtype=object,
)


def basis_vector(name: str) -> tuple[int, ...]:
    v = [0] * RANK
    v[BASIS_NAMES.index(name)] = 1
    return tuple(v)


def as_vector(v: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(x) for x in v)
    if len(out) != RANK:
        raise DomainError(f"expected {RANK} coordinates, got {len(out)}")
    return out


def as_matrix(m) -> np.ndarray:
    arr = np.array([[int(x) for x in row] for row in m], dtype=object)
    if arr.shape != (RANK, RANK):
        raise DomainError(f"expected a {RANK}x{RANK} matrix, got shape {arr.shape}")
    return arr


def is_primitive(v: Sequence[int]) -> bool:
    acc = 0
    for x in v:
        acc = gcd(acc, int(x))
    return acc == 1


def exact_det(m) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [[int(x) for x in row] for row in m]
    size = len(a)
    sign = 1
    prev = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for r in range(k + 1, size):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1] if size else 1


@dataclass(frozen=True)
class DiscriminantClass:
    """An element of the cyclic discriminant group Z/(2n+2).

    ``residue`` is the coefficient of ``delta* = delta / (2n+2)``;
    ``q_value`` is the discriminant quadratic form, a rational mod 2.
    """

    order: int
    residue: int
    q_value: Fraction = field(init=False)

    def __post_init__(self):
        r = self.residue % self.order
        object.__setattr__(self, "residue", r)
        object.__setattr__(self, "q_value", Fraction(-r * r, self.order) % 2)

    def up_to_sign(self) -> "DiscriminantClass":
        return DiscriminantClass(self.order, min(self.residue, self.order - self.residue))


@dataclass(frozen=True)
class OrbitInvariant:
    square: int
    div: int
    disc: DiscriminantClass


class IntegerIsometry:
    """A 7x7 integer matrix preserving the form of a :class:`KummerLattice`."""

    __slots__ = ("lattice", "matrix")

    def __init__(self, lattice: "KummerLattice", matrix):
        m = as_matrix(matrix)
        if not lattice.is_isometry(m):
            raise DomainError("matrix does not preserve the Gram form")
        self.lattice = lattice
        self.matrix = m

    def __matmul__(self, other: "IntegerIsometry") -> "IntegerIsometry":
        return IntegerIsometry(self.lattice, self.matrix.dot(other.matrix))

    def __eq__(self, other):
        if not isinstance(other, IntegerIsometry):
            return NotImplemented
        return self.lattice == other.lattice and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.lattice, tuple(int(x) for x in self.matrix.flat)))

    def __repr__(self):
        return f"IntegerIsometry(n={self.lattice.n}, matrix={self.matrix.tolist()})"

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(x) for x in self.matrix.dot(np.array(as_vector(v), dtype=object)))

    def inverse(self) -> "IntegerIsometry":
        # M^T G M = G gives M^-1 = G^-1 M^T G, integral for an isometry.
        inv = self.lattice.gram_inverse.dot(self.matrix.T).dot(self.lattice.gram)
        rows = []
        for row in inv:
            fr = [Fraction(x) for x in row]
            if any(x.denominator != 1 for x in fr):
                raise ConsistencyError("inverse of an isometry is not integral")
            rows.append([int(x) for x in fr])
        return IntegerIsometry(self.lattice, rows)

    @property
    def det(self) -> int:
        return exact_det(self.matrix)


def identity(lattice: "KummerLattice") -> IntegerIsometry:
    return IntegerIsometry(lattice, np.identity(RANK, dtype=int).tolist())


@dataclass(frozen=True)
class KummerLattice:
    """``Lambda_n = 3U + <-2-2n>`` with the fixed coordinate basis."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"n must be >= 2, got {self.n}")

    @property
    def disc_order(self) -> int:
        return 2 * self.n + 2

    @cached_property
    def gram(self) -> np.ndarray:
        g = np.zeros((RANK, RANK), dtype=object)
        for i in range(3):
            g[2 * i, 2 * i + 1] = g[2 * i + 1, 2 * i] = 1
        g[6, 6] = -self.disc_order
        return g

    @cached_property
    def gram_inverse(self) -> np.ndarray:
        # rational only in the delta entry
        g = np.zeros((RANK, RANK), dtype=object)
        for i in range(3):
            g[2 * i, 2 * i + 1] = g[2 * i + 1, 2 * i] = 1
        g[6, 6] = Fraction(-1, self.disc_order)
        return g

    # -- vectors -----------------------------------------------------------

    def inner(self, v: Sequence[int], w: Sequence[int]) -> int:
        a, b = as_vector(v), as_vector(w)
        s = 0
        for i in range(3):
            s += a[2 * i] * b[2 * i + 1] + a[2 * i + 1] * b[2 * i]
        return s - self.disc_order * a[6] * b[6]

    def square(self, v: Sequence[int]) -> int:
        return self.inner(v, v)

    def divisibility(self, v: Sequence[int]) -> int:
        """Positive generator of the ideal ``(v, Lambda_n)``."""
        a = as_vector(v)
        if not any(a):
            raise DomainError("divisibility of the zero vector is undefined")
        acc = 0
        for j in range(RANK):
            acc = gcd(acc, self.inner(a, basis_vector(BASIS_NAMES[j])))
        return acc

    def divisibilities(self, vectors) -> np.ndarray:
        """Vectorised :meth:`divisibility` for an ``(m, 7)`` integer array."""
        arr = np.asarray(vectors)
        if arr.ndim != 2 or arr.shape[1] != RANK:
            raise DomainError(f"expected an (m, {RANK}) array")
        if arr.size and not np.all(np.any(arr != 0, axis=1)):
            raise DomainError("divisibility of the zero vector is undefined")
        return _kernels.divisibility_batch(arr, self.gram)

    def discriminant_class(self, v: Sequence[int]) -> DiscriminantClass:
        """Class of ``v / div(v)`` in the discriminant group."""
        a = as_vector(v)
        div = self.divisibility(a)
        return DiscriminantClass(self.disc_order, a[6] * self.disc_order // div)

    def orbit_invariant(self, v: Sequence[int]) -> OrbitInvariant:
        """(square, divisibility, discriminant class up to sign) of primitive v.

        These are invariant under every element of W, in particular under
        every monodromy operator.
        """
        a = as_vector(v)
        if not is_primitive(a):
            raise DomainError(f"vector {a} is not primitive")
        sq = self.square(a)
        if sq == 0:
            raise DomainError("isotropic vectors have no orbit invariant here")
        return OrbitInvariant(sq, self.divisibility(a), self.discriminant_class(a).up_to_sign())

    # -- isometries --------------------------------------------------------

    def is_isometry(self, m) -> bool:
        try:
            arr = as_matrix(m)
        except (DomainError, TypeError, ValueError):
            return False
        return bool(np.array_equal(arr.T.dot(self.gram).dot(arr), self.gram))

    def _matrix_of(self, m) -> np.ndarray:
        if isinstance(m, IntegerIsometry):
            return m.matrix
        arr = as_matrix(m)
        if not self.is_isometry(arr):
            raise DomainError("matrix is not an isometry of the lattice")
        return arr

    def orientation_sign(self, m) -> int:
        """+1 if ``m`` preserves the orientation of positive 3-planes, else -1."""
        arr = self._matrix_of(m)
        frame = _POSITIVE_FRAME
        b = arr.dot(frame).T.dot(self.gram).dot(frame)
        det = exact_det(b)
        if det == 0:
            raise DomainError("degenerate projection; matrix is not an isometry")
        return 1 if det > 0 else -1

    def discriminant_action(self, m) -> int | None:
        """Action on the generator ``delta*`` of the discriminant group.

        Returns +1 or -1 when ``m`` acts as plus or minus the identity, and
        ``None`` for any other action.
        """
        arr = self._matrix_of(m)
        r = int(arr[6, 6]) % self.disc_order
        if r == 1:
            return 1
        if r == self.disc_order - 1:
            return -1
        return None

    def in_W(self, m) -> bool:
        return self.orientation_sign(m) == 1 and self.discriminant_action(m) is not None

    def chi(self, m) -> int:
        if not self.in_W(m):
            raise DomainError("chi is only defined on orientation preserving isometries acting as +-id")
        return self.discriminant_action(m)

    def is_monodromy(self, m) -> bool:
        """Membership test ``det(m) * chi(m) == 1`` inside W.

        Arbitrary matrices are accepted; anything that is not an isometry
        simply answers False.
        """
        if isinstance(m, IntegerIsometry):
            arr = m.matrix
        elif not self.is_isometry(m):
            return False
        else:
            arr = as_matrix(m)
        if not self.in_W(arr):
            return False
        return exact_det(arr) * self.chi(arr) == 1

    def monodromy_report(self, m) -> dict:
        """Every quantity entering the membership test, plus a verdict and reason."""
        report = {"isometry": self.is_isometry(m)}
        if not report["isometry"]:
            report.update(verdict=False, reason="not an isometry")
            return report
        arr = as_matrix(m)
        orient = self.orientation_sign(arr)
        action = self.discriminant_action(arr)
        det = exact_det(arr)
        report.update(orientation=orient, discriminant_action=action, det=det)
        if orient != 1:
            report.update(chi=None, verdict=False, reason="orientation")
        elif action is None:
            report.update(chi=None, verdict=False, reason="discriminant action")
        elif det * action != 1:
            report.update(chi=action, verdict=False, reason="det*chi = -1")
        else:
            report.update(chi=action, verdict=True, reason="monodromy")
        return report

    def reflection(self, u: Sequence[int]) -> IntegerIsometry:
        """``x -> x + (x,u)u`` if ``u^2 = -2``; ``x -> -x + (x,u)u`` if ``u^2 = 2``."""
        a = as_vector(u)
        sq = self.square(a)
        if sq not in (2, -2):
            raise DomainError(f"reflection needs (u,u) = +-2, got {sq}")
        uu = np.array(a, dtype=object).reshape(RANK, 1)
        # row vector of pairings (b_j, u) for the basis vectors b_j
        pair = (self.gram.dot(uu)).reshape(1, RANK)
        base = np.identity(RANK, dtype=int).astype(object)
        if sq == 2:
            base = -base
        return IntegerIsometry(self, base + uu.dot(pair))


def load_lattice_document(text: str, source: str = "<input>"):
    """Parse a JSON document ``{"n": int, "matrix": [[...]] }`` or ``{"n", "vector"}``.

    Returns ``(lattice, kind, payload)`` with ``kind`` either ``"matrix"`` or
    ``"vector"``. Parse failures raise :class:`DomainError` naming the location.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise DomainError(f"{source}: top level must be an object")
    if "n" not in doc:
        raise DomainError(f"{source}: missing field 'n'")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError(f"{source}: field 'n' must be an integer")
    try:
        lattice = KummerLattice(n)
    except DomainError as exc:
        raise DomainError(f"{source}: field 'n': {exc}") from None
    if "matrix" in doc:
        rows = doc["matrix"]
        if not isinstance(rows, list) or len(rows) != RANK:
            raise DomainError(f"{source}: field 'matrix' must have {RANK} rows")
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != RANK:
                raise DomainError(f"{source}: matrix[{i}] must have {RANK} entries")
            for j, x in enumerate(row):
                if not isinstance(x, int) or isinstance(x, bool):
                    raise DomainError(f"{source}: matrix[{i}][{j}] is not an integer")
        return lattice, "matrix", as_matrix(rows)
    if "vector" in doc:
        vec = doc["vector"]
        if not isinstance(vec, list) or len(vec) != RANK:
            raise DomainError(f"{source}: field 'vector' must have {RANK} entries")
        for i, x in enumerate(vec):
            if not isinstance(x, int) or isinstance(x, bool):
                raise DomainError(f"{source}: vector[{i}] is not an integer")
        return lattice, "vector", as_vector(vec)
    raise DomainError(f"{source}: expected a 'matrix' or 'vector' field")
