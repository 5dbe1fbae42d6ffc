"""
Exact linear algebra over the rationals.

Vectors are tuples of ``fractions.Fraction``. Row reduction, nullspaces and
inverses are delegated to sympy's ``DomainMatrix`` over ``QQ``; everything
returned from this module is converted back to ``Fraction`` so the rest of
the package never sees sympy domain elements.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import AmbientMismatchError, PreconditionError

logger = logging.getLogger(__name__)

Rational = Fraction
QVector = Tuple[Fraction, ...]
Scalar = Union[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def qvector(values: Iterable[Scalar]) -> QVector:
    """Build a QVector from ints or fractions."""
    return tuple(Fraction(value) for value in values)


def zero_vector(length: int) -> QVector:
    """The zero vector of the given length."""
    return (ZERO,) * length


def unit_vector(length: int, index: int) -> QVector:
    """Standard basis vector with a 1 at ``index``."""
    return tuple(ONE if i == index else ZERO for i in range(length))


def is_zero(vector: Sequence[Fraction]) -> bool:
    """True when every coordinate vanishes."""
    return not any(vector)


def add_vectors(left: Sequence[Fraction], right: Sequence[Fraction]) -> QVector:
    """Coordinatewise sum of two vectors of the same length."""
    if len(left) != len(right):
        raise AmbientMismatchError(f"Cannot add vectors of lengths {len(left)} and {len(right)}")
    return tuple(a + b for a, b in zip(left, right))


def scale_vector(vector: Sequence[Fraction], scalar: Scalar) -> QVector:
    """``scalar`` times ``vector``."""
    return tuple(scalar * value for value in vector)


def combine(vectors: Sequence[Sequence[Fraction]], coefficients: Sequence[Scalar], length: int) -> QVector:
    """Linear combination sum(c_i * v_i) of equal-length vectors."""
    acc = [ZERO] * length
    for coefficient, vector in zip(coefficients, vectors):
        if not coefficient:
            continue
        for index, value in enumerate(vector):
            if value:
                acc[index] += coefficient * value
    return tuple(acc)


def _to_qq(value: Fraction) -> Any:
    return QQ(value.numerator, value.denominator)


def _from_qq(value: Any) -> Fraction:
    return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))


@dataclass(frozen=True)
class QMatrix:
    """Sparse rational matrix; only nonzero entries are stored."""
    rows: int
    cols: int
    entries: Mapping[Tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise PreconditionError(f"Matrix shape must be non-negative, got {self.rows}x{self.cols}")
        for (row, col), value in self.entries.items():
            if not (0 <= row < self.rows and 0 <= col < self.cols):
                raise PreconditionError(f"Entry ({row}, {col}) outside a {self.rows}x{self.cols} matrix")
            if not value:
                raise PreconditionError(f"Stored entry ({row}, {col}) is zero")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], cols: int = -1) -> "QMatrix":
        """Build from dense rows; ``cols`` is required when ``rows`` is empty."""
        if cols < 0:
            if not rows:
                raise PreconditionError("Column count is required for a matrix without rows")
            cols = len(rows[0])
        entries: Dict[Tuple[int, int], Fraction] = {}
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise AmbientMismatchError(f"Row {i} has length {len(row)}, expected {cols}")
            for j, value in enumerate(row):
                if value:
                    entries[(i, j)] = Fraction(value)
        return cls(len(rows), cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], rows: int) -> "QMatrix":
        """Build from dense columns, each of length ``rows``."""
        entries: Dict[Tuple[int, int], Fraction] = {}
        for j, column in enumerate(columns):
            if len(column) != rows:
                raise AmbientMismatchError(f"Column {j} has length {len(column)}, expected {rows}")
            for i, value in enumerate(column):
                if value:
                    entries[(i, j)] = Fraction(value)
        return cls(rows, len(columns), entries)

    def row(self, index: int) -> QVector:
        return tuple(self.entries.get((index, j), ZERO) for j in range(self.cols))

    def to_rows(self) -> List[QVector]:
        return [self.row(i) for i in range(self.rows)]

    def to_domain_matrix(self) -> DomainMatrix:
        dod: Dict[int, Dict[int, Any]] = {}
        for (row, col), value in self.entries.items():
            dod.setdefault(row, {})[col] = _to_qq(value)
        return DomainMatrix(dod, (self.rows, self.cols), QQ)

    @classmethod
    def from_domain_matrix(cls, matrix: DomainMatrix) -> "QMatrix":
        rows, cols = matrix.shape
        dense = [[_from_qq(value) for value in row] for row in matrix.to_list()]
        return cls.from_rows(dense, cols=cols)


def rref(m: QMatrix) -> Tuple[QMatrix, Tuple[int, ...]]:
    """Reduced row echelon form with zero rows dropped, plus pivot columns."""
    if m.rows == 0 or not m.entries:
        return QMatrix(0, m.cols), ()
    reduced, pivots = m.to_domain_matrix().rref()
    pivots = tuple(int(p) for p in pivots)
    kept = reduced.to_list()[: len(pivots)]
    dense = [[_from_qq(value) for value in row] for row in kept]
    return QMatrix.from_rows(dense, cols=m.cols), pivots


def rank(m: QMatrix) -> int:
    """Number of pivots in the reduced form."""
    return len(rref(m)[1])


def rank_of(vectors: Sequence[Sequence[Fraction]], length: int) -> int:
    """Rank of ``vectors`` stacked as rows in Q^length."""
    if not vectors:
        return 0
    return rank(QMatrix.from_rows(vectors, cols=length))


def inverse(m: QMatrix) -> QMatrix:
    """Inverse of a square invertible matrix."""
    if m.rows != m.cols:
        raise AmbientMismatchError(f"Cannot invert a {m.rows}x{m.cols} matrix")
    if m.rows == 0:
        return m
    return QMatrix.from_domain_matrix(m.to_domain_matrix().inv())


def row_times(vector: Sequence[Fraction], m: QMatrix) -> QVector:
    """Row vector times matrix."""
    if len(vector) != m.rows:
        raise AmbientMismatchError(f"Vector of length {len(vector)} against {m.rows} matrix rows")
    acc = [ZERO] * m.cols
    for (row, col), value in m.entries.items():
        if vector[row]:
            acc[col] += vector[row] * value
    return tuple(acc)


def matrix_times(m: QMatrix, vector: Sequence[Fraction]) -> QVector:
    """Matrix times column vector."""
    if len(vector) != m.cols:
        raise AmbientMismatchError(f"Vector of length {len(vector)} against {m.cols} matrix columns")
    acc = [ZERO] * m.rows
    for (row, col), value in m.entries.items():
        if vector[col]:
            acc[row] += value * vector[col]
    return tuple(acc)


def _leading_index(vector: Sequence[Fraction]) -> int:
    for index, value in enumerate(vector):
        if value:
            return index
    return -1


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim held by a canonical (RREF) basis.

    Build instances through :meth:`span` unless the basis is already canonical.
    """
    ambient_dim: int
    basis: Tuple[QVector, ...] = ()

    def __post_init__(self) -> None:
        for vector in self.basis:
            if len(vector) != self.ambient_dim:
                raise AmbientMismatchError(
                    f"Basis vector of length {len(vector)} in ambient dimension {self.ambient_dim}"
                )

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(_leading_index(vector) for vector in self.basis)

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Scalar]], ambient_dim: int) -> "Subspace":
        """Canonical subspace spanned by ``vectors``; zero vectors are dropped."""
        rows = [qvector(vector) for vector in vectors]
        for row in rows:
            if len(row) != ambient_dim:
                raise AmbientMismatchError(f"Vector of length {len(row)} in ambient dimension {ambient_dim}")
        rows = [row for row in rows if not is_zero(row)]
        if not rows:
            return cls(ambient_dim)
        reduced, _ = rref(QMatrix.from_rows(rows, cols=ambient_dim))
        return cls(ambient_dim, tuple(reduced.to_rows()))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim)

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple(unit_vector(ambient_dim, i) for i in range(ambient_dim)))

    def reduce(self, vector: Sequence[Fraction]) -> QVector:
        """Normal form of ``vector`` modulo this subspace (zero at every pivot)."""
        if len(vector) != self.ambient_dim:
            raise AmbientMismatchError(
                f"Vector of length {len(vector)} against ambient dimension {self.ambient_dim}"
            )
        acc = list(Fraction(value) for value in vector)
        for row, pivot in zip(self.basis, self.pivots):
            coefficient = acc[pivot]
            if coefficient:
                for index, value in enumerate(row):
                    if value:
                        acc[index] -= coefficient * value
        return tuple(acc)

    def contains(self, vector: Sequence[Fraction]) -> bool:
        return is_zero(self.reduce(vector))

    def issubspace(self, other: "Subspace") -> bool:
        """True when every basis vector of ``self`` lies in ``other``."""
        return all(other.contains(vector) for vector in self.basis)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ambient_dim": self.ambient_dim,
            "basis": [[[value.numerator, value.denominator] for value in row] for row in self.basis],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Subspace":
        basis = tuple(
            tuple(Fraction(int(num), int(den)) for num, den in row) for row in data["basis"]
        )
        return cls(int(data["ambient_dim"]), basis)


def nullspace(m: QMatrix) -> Subspace:
    """Canonical basis of {v : m v = 0}."""
    if m.cols == 0:
        return Subspace.zero(0)
    if not m.entries:
        return Subspace.full(m.cols)
    kernel = m.to_domain_matrix().nullspace()
    vectors = [[_from_qq(value) for value in row] for row in kernel.to_list()]
    return Subspace.span(vectors, m.cols)


def complement(s: Subspace) -> Subspace:
    """Coordinate subspace on the non-pivot positions of ``s``."""
    pivots = set(s.pivots)
    return Subspace(
        s.ambient_dim,
        tuple(unit_vector(s.ambient_dim, i) for i in range(s.ambient_dim) if i not in pivots),
    )


def relative_complement(inner: Subspace, outer: Subspace) -> Tuple[QVector, ...]:
    """Rows of ``outer``'s canonical basis whose pivots are not pivots of ``inner``.

    Together with ``inner`` they form a basis of ``outer``; for ``outer`` the
    whole space this is exactly :func:`complement`.
    """
    if inner.ambient_dim != outer.ambient_dim:
        raise AmbientMismatchError(
            f"Ambient dimensions differ: {inner.ambient_dim} and {outer.ambient_dim}"
        )
    if not inner.issubspace(outer):
        raise PreconditionError("Inner subspace is not contained in the outer subspace")
    inner_pivots = set(inner.pivots)
    return tuple(row for row, pivot in zip(outer.basis, outer.pivots) if pivot not in inner_pivots)


def span_sum(a: Subspace, b: Subspace) -> Subspace:
    """Canonical basis of a + b."""
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatchError(f"Ambient dimensions differ: {a.ambient_dim} and {b.ambient_dim}")
    return Subspace.span(a.basis + b.basis, a.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Canonical basis of the intersection of two subspaces."""
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatchError(f"Ambient dimensions differ: {a.ambient_dim} and {b.ambient_dim}")
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    columns: List[Sequence[Fraction]] = list(a.basis)
    columns.extend(scale_vector(vector, -1) for vector in b.basis)
    relations = nullspace(QMatrix.from_columns(columns, a.ambient_dim))
    vectors = [combine(a.basis, relation[: a.dim], a.ambient_dim) for relation in relations.basis]
    return Subspace.span(vectors, a.ambient_dim)


def member(s: Subspace, v: Sequence[Fraction]) -> bool:
    """True iff ``v`` lies in the span of ``s``."""
    return s.contains(v)


def express(vectors: Sequence[Sequence[Fraction]], target: Sequence[Fraction], length: int) -> Optional[QVector]:
    """Coefficients c with sum(c_i * v_i) = target, or None when target is outside the span.

    ``vectors`` must be linearly independent.
    """
    if not vectors:
        return () if is_zero(target) else None
    _, pivots = rref(QMatrix.from_rows(vectors, cols=length))
    if len(pivots) != len(vectors):
        raise PreconditionError("Cannot express a vector in a dependent family")
    square = QMatrix.from_rows([[vector[c] for c in pivots] for vector in vectors], cols=len(pivots))
    coefficients = row_times([Fraction(target[c]) for c in pivots], inverse(square))
    if combine(vectors, coefficients, length) != tuple(Fraction(value) for value in target):
        return None
    return coefficients
