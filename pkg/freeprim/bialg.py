"""
Graded connected bialgebras given by structure constants.

A :class:`Presentation` stores, up to a truncation degree N, a labelled basis
of every H_n, the products of basis elements and their coproducts. On top of
that this module verifies the bialgebra axioms, builds the counital filtration
H^(k) = ker(ε)^k and the associated graded bialgebra Gr(H).
"""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    Any,
    Dict,
    List,
    Mapping,
    MutableMapping,
    NamedTuple,
    Optional,
    Protocol,
    Sequence,
    Tuple,
)

from .errors import (
    AxiomFailureError,
    DegreeDomainError,
    InvariantViolation,
    PreconditionError,
    PresentationInvalidError,
    TruncationError,
)
from .exactq import (
    ONE,
    ZERO,
    QMatrix,
    QVector,
    Subspace,
    combine,
    inverse,
    is_zero,
    relative_complement,
    row_times,
    unit_vector,
)
from .graded import CheckResult, FiltrationTable, GradedDims, TensorBasis, tensor_filtration

logger = logging.getLogger(__name__)

ProductKey = Tuple[int, int, int, int]
CoproductKey = Tuple[int, int]
TensorElement = Dict[Tuple[int, int, int, int], Fraction]


class CoproductTerm(NamedTuple):
    """c * (e_left in degree p) (x) (e_right in degree n - p)."""
    p: int
    left: int
    right: int
    coefficient: Fraction


class SubspaceStore(Protocol):
    """Persistent store for canonical subspaces, keyed by input hash and degree."""

    def load(self, input_hash: str, degree: int, name: str) -> Optional[Subspace]: ...

    def save(self, input_hash: str, degree: int, entries: Mapping[str, Subspace]) -> None: ...


@dataclass(frozen=True)
class Element:
    """A homogeneous element: a degree and coordinates in the basis of H_degree."""
    degree: int
    coords: QVector

    def is_zero(self) -> bool:
        return is_zero(self.coords)


@dataclass(frozen=True, eq=False)
class Presentation:
    """A graded connected bialgebra truncated at degree N.

    Omitted product and coproduct entries are zero. Instances hash by identity
    so derived tables can be memoized per presentation.
    """
    name: str
    N: int
    basis: Tuple[Tuple[str, ...], ...]
    product: Mapping[ProductKey, QVector]
    coproduct: Mapping[CoproductKey, Tuple[CoproductTerm, ...]]

    def __post_init__(self) -> None:
        if self.N < 0:
            raise PresentationInvalidError(f"Truncation degree must be non-negative, got {self.N}")
        if len(self.basis) != self.N + 1:
            raise PresentationInvalidError(
                f"Basis lists {len(self.basis)} degrees, expected {self.N + 1}"
            )
        if len(self.basis[0]) != 1:
            raise PresentationInvalidError(
                f"Presentation '{self.name}' is not connected: dim H_0 = {len(self.basis[0])}"
            )
        for (p, q, i, j), vector in self.product.items():
            if min(p, q) < 0 or p + q > self.N:
                raise PresentationInvalidError(f"Product entry ({p}, {q}) exceeds degree {self.N}")
            if not (0 <= i < self.dim(p) and 0 <= j < self.dim(q)):
                raise PresentationInvalidError(f"Product entry ({p}, {q}, {i}, {j}) has a bad index")
            if len(vector) != self.dim(p + q):
                raise PresentationInvalidError(
                    f"Product ({p}, {q}, {i}, {j}) has {len(vector)} coordinates, expected {self.dim(p + q)}"
                )
        for (n, i), terms in self.coproduct.items():
            if not (0 <= n <= self.N and 0 <= i < self.dim(n)):
                raise PresentationInvalidError(f"Coproduct entry ({n}, {i}) has a bad index")
            for term in terms:
                if not (0 <= term.p <= n):
                    raise PresentationInvalidError(f"Coproduct of ({n}, {i}) has a term in bidegree {term.p}")
                if not (0 <= term.left < self.dim(term.p) and 0 <= term.right < self.dim(n - term.p)):
                    raise PresentationInvalidError(f"Coproduct of ({n}, {i}) has a term with a bad index")

    def dim(self, n: int) -> int:
        return len(self.basis[n]) if 0 <= n <= self.N else 0

    @property
    def dims(self) -> GradedDims:
        return GradedDims(tuple(len(labels) for labels in self.basis))

    @property
    def tensor_basis(self) -> TensorBasis:
        return TensorBasis(self.dims, self.dims)

    def to_dict(self) -> Dict[str, Any]:
        """Canonical JSON-ready form; rationals are [numerator, denominator] pairs."""
        product = []
        for (p, q, i, j) in sorted(self.product):
            result = [
                [value.numerator, value.denominator, index]
                for index, value in enumerate(self.product[(p, q, i, j)])
                if value
            ]
            if result:
                product.append({"p": p, "q": q, "i": i, "j": j, "result": result})
        coproduct = []
        for (n, i) in sorted(self.coproduct):
            terms = [
                [t.coefficient.numerator, t.coefficient.denominator, t.p, t.left, t.right]
                for t in sorted(self.coproduct[(n, i)], key=lambda t: (t.p, t.left, t.right))
                if t.coefficient
            ]
            if terms:
                coproduct.append({"n": n, "i": i, "terms": terms})
        return {
            "name": self.name,
            "N": self.N,
            "basis": [list(labels) for labels in self.basis],
            "product": product,
            "coproduct": coproduct,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Presentation":
        basis = tuple(tuple(str(label) for label in labels) for labels in data["basis"])
        dims = [len(labels) for labels in basis]

        def degree_dim(n: int) -> int:
            if not 0 <= n < len(dims):
                raise PresentationInvalidError(f"Degree {n} outside the basis table")
            return dims[n]

        product: Dict[ProductKey, QVector] = {}
        for entry in data.get("product", []):
            p, q, i, j = int(entry["p"]), int(entry["q"]), int(entry["i"]), int(entry["j"])
            acc = [ZERO] * degree_dim(p + q)
            for num, den, index in entry["result"]:
                if not 0 <= int(index) < len(acc):
                    raise PresentationInvalidError(f"Product ({p}, {q}, {i}, {j}) has index {index} out of range")
                acc[int(index)] += Fraction(int(num), int(den))
            product[(p, q, i, j)] = tuple(acc)

        coproduct: Dict[CoproductKey, Tuple[CoproductTerm, ...]] = {}
        for entry in data.get("coproduct", []):
            key = (int(entry["n"]), int(entry["i"]))
            coproduct[key] = tuple(
                CoproductTerm(int(p), int(left), int(right), Fraction(int(num), int(den)))
                for num, den, p, left, right in entry["terms"]
            )
        return cls(
            name=str(data["name"]),
            N=int(data["N"]),
            basis=basis,
            product=product,
            coproduct=coproduct,
        )

    def content_hash(self) -> str:
        """SHA-256 of the canonical JSON form."""
        memo = memo_for(self)
        if "content_hash" not in memo:
            text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
            memo["content_hash"] = hashlib.sha256(text.encode("utf-8")).hexdigest()
        return str(memo["content_hash"])


_MEMO: "weakref.WeakKeyDictionary[Any, Dict[str, Any]]" = weakref.WeakKeyDictionary()


def memo_for(owner: Any) -> MutableMapping[str, Any]:
    """Per-object table of derived results; entries must be deterministic."""
    table = _MEMO.get(owner)
    if table is None:
        table = {}
        _MEMO[owner] = table
    return table


# ------------------------------------------------------------------
# Elements and structure maps
# ------------------------------------------------------------------
def basis_element(h: Presentation, n: int, i: int) -> Element:
    """The basis vector e_{n,i}."""
    return Element(n, unit_vector(h.dim(n), i))


def unit(h: Presentation) -> Element:
    """The unit of H, spanning H_0."""
    return basis_element(h, 0, 0)


def element(h: Presentation, n: int, coords: Sequence[Any]) -> Element:
    """An element of H_n, checked against dim H_n."""
    if not 0 <= n <= h.N:
        raise DegreeDomainError(f"Degree {n} outside 0..{h.N}")
    if len(coords) != h.dim(n):
        raise PreconditionError(f"Degree {n} needs {h.dim(n)} coordinates, got {len(coords)}")
    return Element(n, tuple(Fraction(c) for c in coords))


def multiply(h: Presentation, x: Element, y: Element) -> Element:
    """m(x, y) from the structure constants."""
    degree = x.degree + y.degree
    if degree > h.N:
        raise TruncationError(f"Product of degrees {x.degree} and {y.degree} exceeds N = {h.N}")
    acc = [ZERO] * h.dim(degree)
    for i, xi in enumerate(x.coords):
        if not xi:
            continue
        for j, yj in enumerate(y.coords):
            if not yj:
                continue
            vector = h.product.get((x.degree, y.degree, i, j))
            if vector is None:
                continue
            c = xi * yj
            for index, value in enumerate(vector):
                if value:
                    acc[index] += c * value
    return Element(degree, tuple(acc))


def multiply_many(h: Presentation, factors: Sequence[Element]) -> Element:
    """Product of ``factors`` from left to right; the empty product is the unit."""
    result = unit(h)
    for factor in factors:
        result = multiply(h, result, factor)
    return result


def counit(h: Presentation, x: Element) -> Fraction:
    """The degree-0 coordinate of ``x``; zero in positive degree."""
    return x.coords[0] if x.degree == 0 else ZERO


def coproduct(h: Presentation, x: Element) -> TensorElement:
    """Δ(x) as a sparse map (p, i, q, j) -> coefficient of e_{p,i} (x) e_{q,j}."""
    result: TensorElement = {}
    for i, xi in enumerate(x.coords):
        if not xi:
            continue
        for term in h.coproduct.get((x.degree, i), ()):
            key = (term.p, term.left, x.degree - term.p, term.right)
            result[key] = result.get(key, ZERO) + xi * term.coefficient
    return {key: value for key, value in result.items() if value}


def tensor_add(target: TensorElement, other: Mapping[Tuple[int, int, int, int], Fraction], scale: Fraction = ONE) -> None:
    """Add ``scale`` times ``other`` into ``target`` in place, dropping cancelled keys."""
    for key, value in other.items():
        total = target.get(key, ZERO) + scale * value
        if total:
            target[key] = total
        else:
            target.pop(key, None)


def tensor_pure(x: Element, y: Element) -> TensorElement:
    """x (x) y."""
    return {
        (x.degree, i, y.degree, j): xi * yj
        for i, xi in enumerate(x.coords)
        if xi
        for j, yj in enumerate(y.coords)
        if yj
    }


def tensor_multiply(h: Presentation, a: TensorElement, b: TensorElement) -> TensorElement:
    """Product in H (x) H: (x (x) y)(z (x) w) = xz (x) yw."""
    result: TensorElement = {}
    for (p1, i1, q1, j1), c1 in a.items():
        for (p2, i2, q2, j2), c2 in b.items():
            left = multiply(h, basis_element(h, p1, i1), basis_element(h, p2, i2))
            right = multiply(h, basis_element(h, q1, j1), basis_element(h, q2, j2))
            tensor_add(result, tensor_pure(left, right), c1 * c2)
    return result


def tensor_swap(t: Mapping[Tuple[int, int, int, int], Fraction]) -> TensorElement:
    """The flip x (x) y -> y (x) x."""
    return {(q, j, p, i): value for (p, i, q, j), value in t.items()}


def tensor_to_vector(h: Presentation, n: int, t: Mapping[Tuple[int, int, int, int], Fraction]) -> QVector:
    """Coordinates of a degree-n tensor in the ordered basis of (H (x) H)_n."""
    basis = h.tensor_basis
    acc = [ZERO] * basis.dim(n)
    for (p, i, q, j), value in t.items():
        if p + q != n:
            raise PreconditionError(f"Tensor term in bidegree ({p}, {q}) inside degree {n}")
        acc[basis.index(n, p, i, j)] += value
    return tuple(acc)


def format_element(labels: Sequence[str], coords: Sequence[Fraction]) -> str:
    """Readable linear combination such as ``F12 - F21`` or ``1/2*S(1,1)``."""
    parts: List[str] = []
    for label, value in zip(labels, coords):
        if not value:
            continue
        sign = "-" if value < 0 else "+"
        magnitude = abs(value)
        text = label if magnitude == 1 else f"{magnitude}*{label}"
        parts.append(f"{sign} {text}")
    if not parts:
        return "0"
    joined = " ".join(parts)
    return joined[2:] if joined.startswith("+ ") else "-" + joined[2:]


# ------------------------------------------------------------------
# Axioms
# ------------------------------------------------------------------
AXIOM_FLAGS = (
    "associativity_ok",
    "coassociativity_ok",
    "counit_ok",
    "compatibility_ok",
    "connected_ok",
)


@dataclass
class AxiomReport:
    """Bialgebra axiom flags, each with the first failing witness."""
    associativity_ok: bool = True
    coassociativity_ok: bool = True
    counit_ok: bool = True
    compatibility_ok: bool = True
    connected_ok: bool = True
    witnesses: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return all(getattr(self, flag) for flag in AXIOM_FLAGS)

    def fail(self, flag: str, **witness: Any) -> None:
        if getattr(self, flag):
            setattr(self, flag, False)
            self.witnesses[flag] = dict(witness)

    def first_failure(self) -> Optional[str]:
        for flag in AXIOM_FLAGS:
            if not getattr(self, flag):
                return flag
        return None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {flag: getattr(self, flag) for flag in AXIOM_FLAGS}
        data["witnesses"] = self.witnesses
        data["verdict"] = self.verdict
        return data


def _check_unit(h: Presentation, report: AxiomReport) -> None:
    one = unit(h)
    for n in range(h.N + 1):
        for i in range(h.dim(n)):
            e = basis_element(h, n, i)
            if multiply(h, one, e) != e or multiply(h, e, one) != e:
                report.fail("connected_ok", degree=n, index=i, reason="unit law")
                return


def _check_associativity(h: Presentation, report: AxiomReport) -> None:
    for total in range(h.N + 1):
        for p in range(total + 1):
            for q in range(total - p + 1):
                r = total - p - q
                for i, j in itertools.product(range(h.dim(p)), range(h.dim(q))):
                    x, y = basis_element(h, p, i), basis_element(h, q, j)
                    xy = multiply(h, x, y)
                    for k in range(h.dim(r)):
                        z = basis_element(h, r, k)
                        if multiply(h, xy, z) != multiply(h, x, multiply(h, y, z)):
                            report.fail("associativity_ok", degrees=[p, q, r], indices=[i, j, k])
                            return


def _coproduct_left(h: Presentation, t: TensorElement) -> Dict[Tuple[int, ...], Fraction]:
    """(Δ (x) id) applied to t."""
    result: Dict[Tuple[int, ...], Fraction] = {}
    for (p, i, q, j), c in t.items():
        for (a, ai, b, bi), d in coproduct(h, basis_element(h, p, i)).items():
            key = (a, ai, b, bi, q, j)
            result[key] = result.get(key, ZERO) + c * d
    return {key: value for key, value in result.items() if value}


def _coproduct_right(h: Presentation, t: TensorElement) -> Dict[Tuple[int, ...], Fraction]:
    """(id (x) Δ) applied to t."""
    result: Dict[Tuple[int, ...], Fraction] = {}
    for (p, i, q, j), c in t.items():
        for (a, ai, b, bi), d in coproduct(h, basis_element(h, q, j)).items():
            key = (p, i, a, ai, b, bi)
            result[key] = result.get(key, ZERO) + c * d
    return {key: value for key, value in result.items() if value}


def _check_coalgebra(h: Presentation, report: AxiomReport) -> None:
    for n in range(h.N + 1):
        for i in range(h.dim(n)):
            e = basis_element(h, n, i)
            delta = coproduct(h, e)
            if report.coassociativity_ok and _coproduct_left(h, delta) != _coproduct_right(h, delta):
                report.fail("coassociativity_ok", degree=n, index=i)
            if report.counit_ok:
                left = [ZERO] * h.dim(n)
                right = [ZERO] * h.dim(n)
                for (p, a, q, b), c in delta.items():
                    if p == 0:
                        left[b] += c
                    if q == 0:
                        right[a] += c
                if tuple(left) != e.coords or tuple(right) != e.coords:
                    report.fail("counit_ok", degree=n, index=i)


def _check_compatibility(h: Presentation, report: AxiomReport) -> None:
    for total in range(h.N + 1):
        for p in range(total + 1):
            q = total - p
            for i, j in itertools.product(range(h.dim(p)), range(h.dim(q))):
                x, y = basis_element(h, p, i), basis_element(h, q, j)
                lhs = coproduct(h, multiply(h, x, y))
                rhs = tensor_multiply(h, coproduct(h, x), coproduct(h, y))
                if lhs != rhs:
                    report.fail("compatibility_ok", degrees=[p, q], indices=[i, j])
                    return


def check_axioms(h: Presentation) -> AxiomReport:
    """Verify the graded bialgebra axioms on all basis tuples of total degree <= N."""
    memo = memo_for(h)
    cached = memo.get("axioms")
    if isinstance(cached, AxiomReport):
        return cached
    report = AxiomReport()
    _check_unit(h, report)
    _check_associativity(h, report)
    _check_coalgebra(h, report)
    _check_compatibility(h, report)
    logger.info("Axiom check for %s up to degree %s: %s", h.name, h.N, "ok" if report.verdict else "failed")
    memo["axioms"] = report
    return report


def ensure_axioms(h: Presentation) -> None:
    """Raise AxiomFailureError unless ``h`` passes :func:`check_axioms`."""
    report = check_axioms(h)
    if not report.verdict:
        flag = report.first_failure() or "unknown"
        raise AxiomFailureError(
            f"Presentation '{h.name}' fails {flag}: {report.witnesses.get(flag)}"
        )


def check_cocommutative(h: Presentation) -> CheckResult:
    """τ∘Δ = Δ on every basis element up to degree N."""
    for n in range(h.N + 1):
        for i in range(h.dim(n)):
            delta = coproduct(h, basis_element(h, n, i))
            if tensor_swap(delta) != delta:
                return CheckResult.failed(degree=n, index=i, label=h.basis[n][i])
    return CheckResult.passed()


def permute_basis(h: Presentation, perms: Mapping[int, Sequence[int]]) -> Presentation:
    """Isomorphic presentation where old basis index i of degree n becomes perms[n][i]."""
    def new_index(n: int, i: int) -> int:
        perm = perms.get(n)
        return perm[i] if perm is not None else i

    for n, perm in perms.items():
        if sorted(perm) != list(range(h.dim(n))):
            raise PreconditionError(f"Degree {n} reordering is not a permutation of {h.dim(n)} indices")
    if 0 in perms and list(perms[0]) != [0]:
        raise PreconditionError("The unit must stay at index 0")

    basis = []
    for n in range(h.N + 1):
        labels = [""] * h.dim(n)
        for i, label in enumerate(h.basis[n]):
            labels[new_index(n, i)] = label
        basis.append(tuple(labels))

    product: Dict[ProductKey, QVector] = {}
    for (p, q, i, j), vector in h.product.items():
        moved = [ZERO] * len(vector)
        for index, value in enumerate(vector):
            moved[new_index(p + q, index)] = value
        product[(p, q, new_index(p, i), new_index(q, j))] = tuple(moved)

    coproduct_table: Dict[CoproductKey, Tuple[CoproductTerm, ...]] = {}
    for (n, i), terms in h.coproduct.items():
        coproduct_table[(n, new_index(n, i))] = tuple(
            CoproductTerm(t.p, new_index(t.p, t.left), new_index(n - t.p, t.right), t.coefficient)
            for t in terms
        )
    return Presentation(h.name, h.N, tuple(basis), product, coproduct_table)


# ------------------------------------------------------------------
# Reduced coproduct and the counital filtration
# ------------------------------------------------------------------
def _middle_offsets(h: Presentation, n: int) -> Tuple[Dict[int, int], int]:
    offsets: Dict[int, int] = {}
    total = 0
    for p in range(1, n):
        offsets[p] = total
        total += h.dim(p) * h.dim(n - p)
    return offsets, total


def reduced_coproduct_matrix(h: Presentation, n: int) -> QMatrix:
    """Matrix of Δ̃ = Δ - id (x) 1 - 1 (x) id from H_n to sum_{0<p<n} H_p (x) H_{n-p}."""
    if not 1 <= n <= h.N:
        raise DegreeDomainError(f"Reduced coproduct needs 1 <= n <= {h.N}, got {n}")
    offsets, rows = _middle_offsets(h, n)
    entries: Dict[Tuple[int, int], Fraction] = {}
    for col in range(h.dim(n)):
        for term in h.coproduct.get((n, col), ()):
            if not 0 < term.p < n:
                continue
            row = offsets[term.p] + term.left * h.dim(n - term.p) + term.right
            total = entries.get((row, col), ZERO) + term.coefficient
            if total:
                entries[(row, col)] = total
            else:
                entries.pop((row, col), None)
    return QMatrix(rows, h.dim(n), entries)


def _cached_layers(h: Presentation, n: int, cache: Optional[SubspaceStore]) -> Optional[List[Subspace]]:
    if cache is None:
        return None
    layers = []
    for k in range(n + 1):
        space = cache.load(h.content_hash(), n, f"layer:{k}")
        if space is None or space.ambient_dim != h.dim(n):
            return None
        layers.append(space)
    return layers


def counital_filtration(h: Presentation, cache: Optional[SubspaceStore] = None) -> FiltrationTable:
    """H_n^(k) = (ker ε)^k ∩ H_n, spanned by k-fold products of positive-degree basis elements."""
    memo = memo_for(h)
    cached = memo.get("counital_filtration")
    if isinstance(cached, FiltrationTable):
        return cached
    ensure_axioms(h)

    layers: Dict[Tuple[int, int], Subspace] = {}
    for n in range(h.N + 1):
        dim = h.dim(n)
        stored = _cached_layers(h, n, cache)
        if stored is not None:
            for k, space in enumerate(stored):
                layers[(n, k)] = space
            logger.debug("Degree %s layers loaded from cache", n)
            continue

        layers[(n, 0)] = Subspace.full(dim)
        if n >= 1:
            layers[(n, 1)] = Subspace.full(dim)
        for k in range(2, n + 1):
            # (ker ε)^k = (ker ε)^(k-1) · ker ε, degree by degree.
            vectors: List[QVector] = []
            for q in range(1, n - k + 2):
                for v in layers[(n - q, k - 1)].basis:
                    left = Element(n - q, v)
                    for j in range(h.dim(q)):
                        vectors.append(multiply(h, left, basis_element(h, q, j)).coords)
            layers[(n, k)] = Subspace.span(vectors, dim)
        logger.debug(
            "Degree %s layer dims: %s", n, [layers[(n, k)].dim for k in range(n + 1)]
        )
        if cache is not None:
            cache.save(h.content_hash(), n, {f"layer:{k}": layers[(n, k)] for k in range(n + 1)})

    table = FiltrationTable(
        ambient=h.dims,
        layers=layers,
        bound=tuple(n + 1 for n in range(h.N + 1)),
    )
    memo["counital_filtration"] = table
    return table


def counital_tensor_filtration(h: Presentation, cache: Optional[SubspaceStore] = None) -> FiltrationTable:
    """Filtration of H (x) H induced by the counital filtration on both factors."""
    memo = memo_for(h)
    cached = memo.get("counital_tensor_filtration")
    if isinstance(cached, FiltrationTable):
        return cached
    filtration = counital_filtration(h, cache)
    table = tensor_filtration(filtration, filtration)
    memo["counital_tensor_filtration"] = table
    return table


# ------------------------------------------------------------------
# Associated graded bialgebra
# ------------------------------------------------------------------
@dataclass(frozen=True)
class GrBasis:
    """Chosen layer complements: H_n = R_0 ⊕ R_1 ⊕ ... with H_n^(k) = R_k ⊕ H_n^(k+1).

    ``to_gr[n]`` converts H_n coordinates (as a row vector) to coordinates
    along the representatives.
    """
    layers: Tuple[Tuple[int, ...], ...]
    representatives: Tuple[Tuple[QVector, ...], ...]
    to_gr: Tuple[QMatrix, ...]

    def gr_coordinates(self, n: int, vector: Sequence[Fraction]) -> QVector:
        return row_times(vector, self.to_gr[n])

    def lift(self, n: int, gr_coords: Sequence[Fraction]) -> QVector:
        """The element of H_n with the given coordinates along the representatives."""
        dim = len(self.representatives[n])
        return combine(self.representatives[n], gr_coords, dim)


def gr_representatives(h: Presentation, cache: Optional[SubspaceStore] = None) -> GrBasis:
    """Representatives in H of a basis of Gr(H), ordered by degree then layer."""
    memo = memo_for(h)
    cached = memo.get("gr_representatives")
    if isinstance(cached, GrBasis):
        return cached
    filtration = counital_filtration(h, cache)

    all_layers: List[Tuple[int, ...]] = []
    all_reps: List[Tuple[QVector, ...]] = []
    to_gr: List[QMatrix] = []
    for n in range(h.N + 1):
        layer_of: List[int] = []
        reps: List[QVector] = []
        for k in range(filtration.bound[n]):
            chosen = relative_complement(filtration.layer(n, k + 1), filtration.layer(n, k))
            reps.extend(chosen)
            layer_of.extend([k] * len(chosen))
        if len(reps) != h.dim(n):
            raise InvariantViolation(f"Layer complements in degree {n} do not form a basis")
        all_layers.append(tuple(layer_of))
        all_reps.append(tuple(reps))
        to_gr.append(inverse(QMatrix.from_rows(reps, cols=h.dim(n))))

    basis = GrBasis(tuple(all_layers), tuple(all_reps), tuple(to_gr))
    memo["gr_representatives"] = basis
    return basis


def gr_class(h: Presentation, x: Element, layer: int, cache: Optional[SubspaceStore] = None) -> QVector:
    """Coordinates in Gr(H)_n of π^(layer)(x) for x in H_n^(layer)."""
    basis = gr_representatives(h, cache)
    coords = basis.gr_coordinates(x.degree, x.coords)
    result = []
    for value, k in zip(coords, basis.layers[x.degree]):
        if k < layer and value:
            raise PreconditionError(f"Element of degree {x.degree} is not in layer {layer}")
        result.append(value if k == layer else ZERO)
    return tuple(result)


def _gr_labels(h: Presentation, basis: GrBasis) -> Tuple[Tuple[str, ...], ...]:
    labels = []
    for n in range(h.N + 1):
        labels.append(tuple(
            f"[{k}]{format_element(h.basis[n], rep)}"
            for k, rep in zip(basis.layers[n], basis.representatives[n])
        ))
    return tuple(labels)


def gr_bialgebra(h: Presentation, cache: Optional[SubspaceStore] = None) -> Presentation:
    """Gr(H) = ⊕ H^(k)/H^(k+1) with m^gr and Δ^gr, in the basis of chosen representatives."""
    memo = memo_for(h)
    cached = memo.get("gr_bialgebra")
    if isinstance(cached, Presentation):
        return cached
    basis = gr_representatives(h, cache)
    logger.info("Building Gr(%s) up to degree %s", h.name, h.N)

    product: Dict[ProductKey, QVector] = {}
    for p in range(h.N + 1):
        for q in range(h.N - p + 1):
            n = p + q
            for i, (k, x) in enumerate(zip(basis.layers[p], basis.representatives[p])):
                for j, (l, y) in enumerate(zip(basis.layers[q], basis.representatives[q])):
                    coords = basis.gr_coordinates(n, multiply(h, Element(p, x), Element(q, y)).coords)
                    kept = [ZERO] * h.dim(n)
                    for index, (value, layer) in enumerate(zip(coords, basis.layers[n])):
                        if not value:
                            continue
                        if layer < k + l:
                            raise InvariantViolation(
                                f"Product of layers {k} and {l} leaves layer {k + l} in degree {n}"
                            )
                        if layer == k + l:
                            kept[index] = value
                    if any(kept):
                        product[(p, q, i, j)] = tuple(kept)

    coproduct_table: Dict[CoproductKey, Tuple[CoproductTerm, ...]] = {}
    for n in range(h.N + 1):
        for i, (k, x) in enumerate(zip(basis.layers[n], basis.representatives[n])):
            terms: Dict[Tuple[int, int, int], Fraction] = {}
            for (p, a, q, b), c in coproduct(h, Element(n, x)).items():
                left_row = basis.to_gr[p].row(a)
                right_row = basis.to_gr[q].row(b)
                for s, ls in enumerate(left_row):
                    if not ls:
                        continue
                    for t, rt in enumerate(right_row):
                        if rt:
                            key = (p, s, t)
                            terms[key] = terms.get(key, ZERO) + c * ls * rt
            kept_terms = []
            for (p, s, t), value in sorted(terms.items()):
                if not value:
                    continue
                total_layer = basis.layers[p][s] + basis.layers[n - p][t]
                if total_layer < k:
                    raise InvariantViolation(
                        f"Coproduct of a layer-{k} element of degree {n} leaves tensor layer {k}"
                    )
                if total_layer == k:
                    kept_terms.append(CoproductTerm(p, s, t, value))
            coproduct_table[(n, i)] = tuple(kept_terms)

    result = Presentation(
        name=f"Gr({h.name})",
        N=h.N,
        basis=_gr_labels(h, basis),
        product=product,
        coproduct=coproduct_table,
    )
    memo["gr_bialgebra"] = result
    return result


# ------------------------------------------------------------------
# The subset-split residual
# ------------------------------------------------------------------
def subset_split_residual(h: Presentation, factors: Sequence[Element]) -> TensorElement:
    """Δ(x_1...x_n) - sum over I ⊆ [n] of (prod_{i∈I} x_i) (x) (prod_{i∉I} x_i)."""
    for position, factor in enumerate(factors):
        if counit(h, factor):
            raise PreconditionError(f"Factor {position} has nonzero counit")
    total = sum(factor.degree for factor in factors)
    if total > h.N:
        raise TruncationError(f"Factors of total degree {total} exceed N = {h.N}")

    residual = coproduct(h, multiply_many(h, factors))
    count = len(factors)
    for mask in range(1 << count):
        chosen = [factors[i] for i in range(count) if mask >> i & 1]
        rest = [factors[i] for i in range(count) if not mask >> i & 1]
        tensor_add(
            residual,
            tensor_pure(multiply_many(h, chosen), multiply_many(h, rest)),
            -ONE,
        )
    return residual


def subset_split_check(
    h: Presentation,
    factors: Sequence[Element],
    cache: Optional[SubspaceStore] = None,
) -> CheckResult:
    """The residual of :func:`subset_split_residual` lies in sum_{k+l>n} H^(k) (x) H^(l)."""
    residual = subset_split_residual(h, factors)
    degree = sum(factor.degree for factor in factors)
    target = counital_tensor_filtration(h, cache).layer(degree, len(factors) + 1)
    vector = tensor_to_vector(h, degree, residual)
    if target.contains(vector):
        return CheckResult.passed()
    return CheckResult.failed(degree=degree, factors=len(factors))


def truncate(h: Presentation, max_degree: int) -> Presentation:
    """The same bialgebra seen only up to ``max_degree``."""
    if max_degree > h.N:
        raise TruncationError(f"Cannot extend '{h.name}' from degree {h.N} to {max_degree}")
    if max_degree == h.N:
        return h
    return Presentation(
        name=h.name,
        N=max_degree,
        basis=h.basis[: max_degree + 1],
        product={key: value for key, value in h.product.items() if key[0] + key[1] <= max_degree},
        coproduct={key: value for key, value in h.coproduct.items() if key[0] <= max_degree},
    )
