"""
Graded and graded filtered vector spaces, the Gr functor at the level of
dimension tables, and tensor products of filtrations.

A graded space is only ever known up to a truncation degree N, so every
table here is indexed by 0 <= n <= N.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import FiltrationInvalidError, PreconditionError
from .exactq import QVector, Subspace, ZERO

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a yes/no verification, with the first counterexample found."""
    ok: bool
    witness: Optional[Dict[str, Any]] = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> Dict[str, Any]:
        return {"ok": self.ok, "witness": self.witness}

    @classmethod
    def passed(cls) -> "CheckResult":
        return cls(True)

    @classmethod
    def failed(cls, **witness: Any) -> "CheckResult":
        return cls(False, dict(witness))


@dataclass(frozen=True)
class GradedDims:
    """Dimensions of V_0, ..., V_N."""
    dims: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.dims:
            raise PreconditionError("A graded space needs at least degree 0")
        if any(d < 0 for d in self.dims):
            raise PreconditionError(f"Negative dimension in {self.dims}")

    @property
    def N(self) -> int:
        return len(self.dims) - 1

    def __getitem__(self, n: int) -> int:
        return self.dims[n]

    def truncate(self, max_degree: int) -> "GradedDims":
        return GradedDims(self.dims[: max_degree + 1])


@dataclass(frozen=True)
class TensorBasis:
    """Ordered basis of (A (x) B)_n = sum_p A_p (x) B_{n-p}.

    Blocks are ordered by increasing p; inside a block the pair (i, j) sits at
    offset + i * dim B_{n-p} + j.
    """
    left: GradedDims
    right: GradedDims

    @property
    def N(self) -> int:
        return min(self.left.N, self.right.N)

    def blocks(self, n: int) -> List[Tuple[int, int, int, int]]:
        """(p, offset, dim A_p, dim B_{n-p}) for every block of degree n."""
        result = []
        offset = 0
        for p in range(n + 1):
            dl, dr = self.left[p], self.right[n - p]
            result.append((p, offset, dl, dr))
            offset += dl * dr
        return result

    def dim(self, n: int) -> int:
        return sum(dl * dr for _, _, dl, dr in self.blocks(n))

    def offset(self, n: int, p: int) -> int:
        return self.blocks(n)[p][1]

    def index(self, n: int, p: int, i: int, j: int) -> int:
        _, offset, _, dr = self.blocks(n)[p]
        return offset + i * dr + j

    def split(self, n: int, index: int) -> Tuple[int, int, int]:
        """Inverse of :meth:`index`: (p, i, j)."""
        for p, offset, dl, dr in self.blocks(n):
            if offset <= index < offset + dl * dr:
                i, j = divmod(index - offset, dr)
                return p, i, j
        raise PreconditionError(f"Index {index} outside tensor degree {n}")

    def kron(self, n: int, p: int, u: Sequence[Fraction], w: Sequence[Fraction]) -> QVector:
        """The vector u (x) w of A_p (x) B_{n-p}, embedded in degree n."""
        acc = [ZERO] * self.dim(n)
        _, offset, _, dr = self.blocks(n)[p]
        for i, ui in enumerate(u):
            if not ui:
                continue
            base = offset + i * dr
            for j, wj in enumerate(w):
                if wj:
                    acc[base + j] = ui * wj
        return tuple(acc)


@dataclass(frozen=True)
class FiltrationTable:
    """Decreasing filtration V_n = V_n^(0) ⊇ V_n^(1) ⊇ ... ⊇ V_n^(K(n)) = 0.

    ``layers`` holds (n, k) for 0 <= k < K(n); layers at or past the bound are
    the zero subspace.
    """
    ambient: GradedDims
    layers: Mapping[Tuple[int, int], Subspace]
    bound: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bound) != len(self.ambient.dims):
            raise FiltrationInvalidError(
                f"Bound table covers {len(self.bound)} degrees, ambient covers {len(self.ambient.dims)}"
            )

    @property
    def N(self) -> int:
        return self.ambient.N

    def layer(self, n: int, k: int) -> Subspace:
        if k >= self.bound[n]:
            return Subspace.zero(self.ambient[n])
        try:
            return self.layers[(n, k)]
        except KeyError as exc:
            raise FiltrationInvalidError(f"Missing layer ({n}, {k})") from exc

    def validate(self) -> None:
        """Raise FiltrationInvalidError unless every table invariant holds."""
        for n in range(self.N + 1):
            dim = self.ambient[n]
            if self.bound[n] < 0:
                raise FiltrationInvalidError(f"Negative bound K({n})")
            for (m, k), space in self.layers.items():
                if m == n and space.ambient_dim != dim:
                    raise FiltrationInvalidError(
                        f"Layer ({n}, {k}) lives in dimension {space.ambient_dim}, expected {dim}"
                    )
                if m == n and k >= self.bound[n] and space.dim:
                    raise FiltrationInvalidError(f"Layer ({n}, {k}) is nonzero past the bound K({n})")
            if self.layer(n, 0).dim != dim:
                raise FiltrationInvalidError(f"Layer ({n}, 0) is not the whole degree-{n} space")
            for k in range(self.bound[n]):
                if not self.layer(n, k + 1).issubspace(self.layer(n, k)):
                    raise FiltrationInvalidError(f"Layer ({n}, {k + 1}) is not contained in layer ({n}, {k})")

    def dims_table(self) -> Dict[Tuple[int, int], int]:
        return {
            (n, k): self.layer(n, k).dim
            for n in range(self.N + 1)
            for k in range(self.bound[n] + 1)
        }

    def restrict(self, max_degree: int) -> "FiltrationTable":
        """The same filtration seen only up to ``max_degree``."""
        if max_degree > self.N:
            raise PreconditionError(f"Cannot restrict degree-{self.N} table to {max_degree}")
        return FiltrationTable(
            ambient=self.ambient.truncate(max_degree),
            layers={key: space for key, space in self.layers.items() if key[0] <= max_degree},
            bound=self.bound[: max_degree + 1],
        )

    @classmethod
    def trivial(cls, ambient: GradedDims) -> "FiltrationTable":
        """V^(0) = V and V^(1) = 0."""
        layers = {(n, 0): Subspace.full(ambient[n]) for n in range(ambient.N + 1)}
        bound = tuple(1 if ambient[n] else 0 for n in range(ambient.N + 1))
        return cls(ambient=ambient, layers=layers, bound=bound)


@dataclass(frozen=True)
class GrSpace:
    """dim Gr(V)_n at layer k, i.e. dim V_n^(k) - dim V_n^(k+1)."""
    dims: Mapping[Tuple[int, int], int] = field(default_factory=dict)

    def get(self, n: int, k: int) -> int:
        return self.dims.get((n, k), 0)

    def total(self, n: int) -> int:
        return sum(d for (m, _), d in self.dims.items() if m == n)

    def to_dict(self) -> Dict[str, Any]:
        return {f"{n},{k}": d for (n, k), d in sorted(self.dims.items())}


def gr(ft: FiltrationTable) -> GrSpace:
    """Dimension table of the associated graded space."""
    ft.validate()
    dims: Dict[Tuple[int, int], int] = {}
    for n in range(ft.N + 1):
        for k in range(ft.bound[n]):
            dims[(n, k)] = ft.layer(n, k).dim - ft.layer(n, k + 1).dim
    return GrSpace(dims)


def _tensor_bound(a: FiltrationTable, b: FiltrationTable, n: int) -> int:
    bound = 0
    for p in range(n + 1):
        if a.ambient[p] and b.ambient[n - p]:
            bound = max(bound, a.bound[p] + b.bound[n - p] - 1)
    return bound


def tensor_filtration(a: FiltrationTable, b: FiltrationTable) -> FiltrationTable:
    """(A (x) B)^(k) = sum_{i+j=k} A^(i) (x) B^(j), degree by degree."""
    basis = TensorBasis(a.ambient, b.ambient)
    top = basis.N
    ambient = GradedDims(tuple(basis.dim(n) for n in range(top + 1)))
    bounds = tuple(_tensor_bound(a, b, n) for n in range(top + 1))
    layers: Dict[Tuple[int, int], Subspace] = {}

    for n in range(top + 1):
        total = ambient[n]
        for k in range(bounds[n]):
            rows: List[QVector] = []
            # Blocks occupy disjoint coordinates, so per-block canonical bases
            # concatenate into the canonical basis of the sum.
            for p, offset, dl, dr in basis.blocks(n):
                if not dl or not dr:
                    continue
                block_vectors = []
                for i in range(k + 1):
                    left = a.layer(p, i)
                    right = b.layer(n - p, k - i)
                    for u in left.basis:
                        for w in right.basis:
                            block_vectors.append(
                                [ui * wj for ui in u for wj in w]
                            )
                block = Subspace.span(block_vectors, dl * dr)
                for row in block.basis:
                    padded = [ZERO] * total
                    padded[offset:offset + dl * dr] = row
                    rows.append(tuple(padded))
            layers[(n, k)] = Subspace(total, tuple(rows))
        logger.debug("Tensor filtration degree %s: bound %s", n, bounds[n])

    return FiltrationTable(ambient=ambient, layers=layers, bound=bounds)


def check_gr_tensor_iso(
    a: FiltrationTable,
    b: FiltrationTable,
    product: Optional[FiltrationTable] = None,
) -> CheckResult:
    """dim Gr(A (x) B)(n, k) = sum dim Gr(A)(p, i) * dim Gr(B)(q, j) over p+q=n, i+j=k.

    ``product`` defaults to :func:`tensor_filtration` of ``a`` and ``b``; pass
    a stored table to audit it instead.
    """
    if product is None:
        product = tensor_filtration(a, b)
    gr_a, gr_b, gr_ab = gr(a), gr(b), gr(product)

    for n in range(product.N + 1):
        top = max(
            [product.bound[n]]
            + [a.bound[p] + b.bound[n - p] for p in range(n + 1)]
        )
        for k in range(top + 1):
            expected = sum(
                gr_a.get(p, i) * gr_b.get(n - p, k - i)
                for p in range(n + 1)
                for i in range(k + 1)
            )
            found = gr_ab.get(n, k)
            if expected != found:
                return CheckResult.failed(degree=n, layer=k, expected=expected, found=found)
    return CheckResult.passed()
