"""Exact linear algebra over Q or Z/p.

Vectors are plain tuples of field elements.  Subspaces are stored in reduced
row echelon form, which makes equality of subspaces a comparison of tuples.
Batch eliminations go through sympy's ``DomainMatrix``; the incremental
:class:`EchelonBuilder` exists for spans that are grown one vector at a time
(closures, early-exit span comparisons).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from .errors import InstanceError

Vector = tuple


class Field:
    """A prime field or the rationals, wrapping a sympy domain."""

    def __init__(self, domain, name: str, characteristic: int):
        self.domain = domain
        self.name = name
        self.characteristic = characteristic
        self.zero = domain.zero
        self.one = domain.one

    @classmethod
    def rational(cls) -> "Field":
        return cls(QQ, "rational", 0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        p = int(p)
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise InstanceError(f"fp:{p} is not a prime field")
        return cls(GF(p, symmetric=False), f"fp:{p}", p)

    @classmethod
    def parse(cls, spec: str) -> "Field":
        spec = str(spec).strip()
        if spec in ("rational", "QQ", "Q"):
            return cls.rational()
        if spec.startswith("fp:"):
            try:
                return cls.prime(int(spec[3:]))
            except ValueError:
                pass
        raise InstanceError(f"unknown field {spec!r}; expected 'rational' or 'fp:<p>'")

    def __eq__(self, other):
        return isinstance(other, Field) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"Field({self.name})"

    def __call__(self, x):
        """Coerce an int, Fraction, ``"a/b"`` string or field element."""
        if isinstance(x, str):
            try:
                x = Fraction(x.strip())
            except (ValueError, ZeroDivisionError):
                raise InstanceError(f"not a scalar: {x!r}") from None
        if isinstance(x, Fraction):
            if self.characteristic:
                if x.denominator % self.characteristic == 0:
                    raise InstanceError(f"{x} has no image in {self.name}")
                return self.domain(x.numerator) / self.domain(x.denominator)
            return self.domain(x.numerator, x.denominator)
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return self.domain(x)
        if isinstance(x, float):
            raise InstanceError("floating point scalars are not accepted")
        return self.domain.convert(x)

    def fmt(self, x) -> str:
        if self.characteristic:
            return str(int(x))
        return str(x)

    def plain(self, x):
        """JSON/YAML friendly form: int when integral, else ``"a/b"``."""
        if self.characteristic:
            return int(x)
        if x.denominator == 1:
            return int(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def zeros(self, n: int) -> Vector:
        return (self.zero,) * n

    def unit_vector(self, n: int, i: int) -> Vector:
        v = [self.zero] * n
        v[i] = self.one
        return tuple(v)

    def vector(self, values: Iterable) -> Vector:
        return tuple(self(x) for x in values)

    def invertible(self, x) -> bool:
        return x != self.zero


# -- vector helpers ---------------------------------------------------------

def add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u: Vector) -> Vector:
    return tuple(c * a for a in u)


def is_zero(u: Vector) -> bool:
    return not any(u)


def combine(field: Field, coeffs: Sequence, vectors: Sequence[Vector], n: int) -> Vector:
    acc = [field.zero] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for k, a in enumerate(v):
                if a:
                    acc[k] += c * a
    return tuple(acc)


def support(u: Vector) -> list[int]:
    return [i for i, a in enumerate(u) if a]


# -- batch elimination ------------------------------------------------------

def _sparse(field: Field, rows: Sequence[Vector], ncols: int) -> DomainMatrix:
    data = {}
    for i, r in enumerate(rows):
        nz = {j: a for j, a in enumerate(r) if a}
        if nz:
            data[i] = nz
    return DomainMatrix(data, (len(rows), ncols), field.domain)


def _dense_rows(field: Field, dm: DomainMatrix) -> list[Vector]:
    nrows, ncols = dm.shape
    sdm = dm.to_sdm()
    out = []
    for i in range(nrows):
        r = sdm.get(i, {})
        out.append(tuple(r.get(j, field.zero) for j in range(ncols)))
    return out


def rref(field: Field, rows: Sequence[Vector], ncols: int) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    if not rows:
        return (), ()
    red, pivots = _sparse(field, rows, ncols).rref()
    dense = _dense_rows(field, red)
    return tuple(dense[: len(pivots)]), tuple(pivots)


def left_kernel(field: Field, rows: Sequence[Vector], ncols: int) -> list[Vector]:
    """Basis of ``{c : sum_i c_i rows[i] = 0}``."""
    k = len(rows)
    if k == 0:
        return []
    if ncols == 0:
        return [field.unit_vector(k, i) for i in range(k)]
    ns = _sparse(field, rows, ncols).transpose().nullspace()
    return [r for r in _dense_rows(field, ns) if any(r)]


def solve_left(field: Field, rows: Sequence[Vector], target: Vector) -> Vector | None:
    """Some ``c`` with ``sum_i c_i rows[i] == target``, or None."""
    k = len(rows)
    n = len(target)
    if k == 0:
        return () if is_zero(target) else None
    aug = [tuple(r[j] for r in rows) + (target[j],) for j in range(n)]
    red, pivots = rref(field, aug, k + 1)
    if k in pivots:
        return None
    sol = [field.zero] * k
    for r, p in zip(red, pivots):
        sol[p] = r[k]
    return tuple(sol)


def rank(field: Field, rows: Sequence[Vector], ncols: int) -> int:
    return len(rref(field, rows, ncols)[1])


# -- incremental elimination -----------------------------------------------

class EchelonBuilder:
    """Grow a span one vector at a time, keeping rows fully reduced."""

    def __init__(self, field: Field, n: int):
        self.field = field
        self.n = n
        self._rows: dict[int, dict[int, object]] = {}

    @property
    def dim(self) -> int:
        return len(self._rows)

    def _reduce(self, v: Vector) -> dict[int, object]:
        r = {j: a for j, a in enumerate(v) if a}
        for p, row in self._rows.items():
            c = r.get(p)
            if c:
                for j, a in row.items():
                    x = r.get(j, self.field.zero) - c * a
                    if x:
                        r[j] = x
                    else:
                        r.pop(j, None)
        return r

    def __contains__(self, v: Vector) -> bool:
        return not self._reduce(v)

    def add(self, v: Vector) -> bool:
        """Insert ``v``; return True if the span grew."""
        r = self._reduce(v)
        if not r:
            return False
        p = min(r)
        inv = self.field.one / r[p]
        r = {j: a * inv for j, a in r.items()}
        for row in self._rows.values():
            c = row.get(p)
            if c:
                for j, a in r.items():
                    x = row.get(j, self.field.zero) - c * a
                    if x:
                        row[j] = x
                    else:
                        row.pop(j, None)
        self._rows[p] = r
        return True

    def subspace(self) -> "Subspace":
        zero = self.field.zero
        pivots = tuple(sorted(self._rows))
        rows = tuple(tuple(self._rows[p].get(j, zero) for j in range(self.n)) for p in pivots)
        return Subspace(self.field, self.n, rows, pivots)


# -- subspaces --------------------------------------------------------------

class Subspace:
    """A subspace of ``field^n`` held as a reduced echelon basis."""

    __slots__ = ("field", "n", "rows", "pivots")

    def __init__(self, field: Field, n: int, rows: tuple, pivots: tuple):
        self.field = field
        self.n = n
        self.rows = rows
        self.pivots = pivots

    @classmethod
    def span(cls, field: Field, n: int, vectors: Iterable[Vector]) -> "Subspace":
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != n:
                raise ValueError(f"vector of length {len(v)} in a space of dimension {n}")
        rows, pivots = rref(field, vectors, n)
        return cls(field, n, rows, pivots)

    @classmethod
    def zero(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n, (), ())

    @classmethod
    def full(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n, tuple(field.unit_vector(n, i) for i in range(n)), tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> tuple:
        return self.rows

    def __repr__(self):
        return f"Subspace(dim={self.dim} in {self.n})"

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.n == other.n
            and self.pivots == other.pivots
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.n, self.rows))

    def reduce(self, v: Vector) -> Vector:
        """Canonical residue of ``v`` modulo this subspace."""
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c:
                for j, a in enumerate(row):
                    if a:
                        v[j] -= c * a
        return tuple(v)

    def __contains__(self, v: Vector) -> bool:
        return is_zero(self.reduce(v))

    def coords(self, v: Vector) -> Vector:
        """Coordinates of ``v`` in the echelon basis; ValueError if outside."""
        if v not in self:
            raise ValueError("vector is not in the subspace")
        return tuple(v[p] for p in self.pivots)

    def from_coords(self, c: Sequence) -> Vector:
        return combine(self.field, c, self.rows, self.n)

    def _check(self, other: "Subspace"):
        if self.n != other.n or self.field != other.field:
            raise ValueError("subspaces live in different ambient spaces")

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(r in other for r in self.rows)

    def __lt__(self, other: "Subspace") -> bool:
        return self <= other and self.dim < other.dim

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, self.n, self.rows + other.rows)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if not self.dim or not other.dim:
            return Subspace.zero(self.field, self.n)
        # (a, b) with sum a_i u_i = sum b_j w_j
        rows = list(self.rows) + [scale(-self.field.one, w) for w in other.rows]
        ker = left_kernel(self.field, rows, self.n)
        vecs = [combine(self.field, c[: self.dim], self.rows, self.n) for c in ker]
        return Subspace.span(self.field, self.n, vecs)

    __and__ = intersect


def sum_spaces(field: Field, n: int, spaces: Iterable[Subspace]) -> Subspace:
    rows = []
    for s in spaces:
        rows.extend(s.rows)
    return Subspace.span(field, n, rows)
