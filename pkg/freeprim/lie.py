"""
Primitive elements and graded Lie algebras.

Covers the Lie algebra Prim(H) of a bialgebra (brackets, the derived
subalgebra and its generators), Lyndon-word bases of free Lie algebras,
abstract Lie presentations with their PBW enveloping algebras, and the
certificate that Prim(H) is free up to a truncation degree.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from . import __version__
from .bialg import (
    CoproductTerm,
    Element,
    Presentation,
    ProductKey,
    CoproductKey,
    SubspaceStore,
    check_axioms,
    check_cocommutative,
    counital_filtration,
    gr_bialgebra,
    gr_class,
    memo_for,
    multiply,
    reduced_coproduct_matrix,
)
from .errors import (
    FreePrimError,
    InvalidLieError,
    InvariantViolation,
    PreconditionError,
    PresentationInvalidError,
    TruncationError,
)
from .exactq import ZERO, QVector, Subspace, intersect, nullspace, rank_of, relative_complement, span_sum, unit_vector
from .freealg import GeneratorSet, check_free, decomposables, euler_product, extract_generators
from .graded import CheckResult

logger = logging.getLogger(__name__)

Symbol = Tuple[int, int]


# ------------------------------------------------------------------
# Primitives and brackets in a bialgebra
# ------------------------------------------------------------------
def primitives(h: Presentation, n: int, cache: Optional[SubspaceStore] = None) -> Subspace:
    """Prim(H)_n = ker Δ̃ in degree n."""
    memo = memo_for(h)
    key = f"prim:{n}"
    if key in memo:
        cached: Subspace = memo[key]
        return cached
    space = None
    if cache is not None:
        space = cache.load(h.content_hash(), n, "prim")
        if space is not None and space.ambient_dim != h.dim(n):
            space = None
    if space is None:
        space = nullspace(reduced_coproduct_matrix(h, n))
        if cache is not None:
            cache.save(h.content_hash(), n, {"prim": space})
    memo[key] = space
    return space


def primitive_dims(h: Presentation, cache: Optional[SubspaceStore] = None) -> Tuple[int, ...]:
    return (0,) + tuple(primitives(h, n, cache).dim for n in range(1, h.N + 1))


def bracket(h: Presentation, x: Element, y: Element, check_primitive: bool = True) -> Element:
    """[x, y] = xy - yx."""
    if x.degree + y.degree > h.N:
        raise TruncationError(f"Bracket of degrees {x.degree} and {y.degree} exceeds N = {h.N}")
    xy = multiply(h, x, y).coords
    yx = multiply(h, y, x).coords
    result = Element(x.degree + y.degree, tuple(a - b for a, b in zip(xy, yx)))
    if (
        check_primitive
        and x.degree >= 1
        and y.degree >= 1
        and primitives(h, x.degree).contains(x.coords)
        and primitives(h, y.degree).contains(y.coords)
        and not primitives(h, result.degree).contains(result.coords)
    ):
        raise InvariantViolation(
            f"Bracket of primitives in degrees {x.degree} and {y.degree} is not primitive"
        )
    return result


def derived_subspace(h: Presentation, n: int, cache: Optional[SubspaceStore] = None) -> Subspace:
    """[g, g]_n for g = Prim(H)."""
    memo = memo_for(h)
    key = f"derived:{n}"
    if key in memo:
        cached: Subspace = memo[key]
        return cached
    vectors = []
    for p in range(1, n // 2 + 1):
        q = n - p
        for u in primitives(h, p, cache).basis:
            for w in primitives(h, q, cache).basis:
                vectors.append(bracket(h, Element(p, u), Element(q, w), check_primitive=False).coords)
    space = Subspace.span(vectors, h.dim(n))
    memo[key] = space
    return space


def lie_generators(h: Presentation, cache: Optional[SubspaceStore] = None) -> GeneratorSet:
    """Canonical complement of [g, g]_n inside Prim(H)_n for every n."""
    generators: List[Tuple[QVector, ...]] = [()]
    for n in range(1, h.N + 1):
        generators.append(relative_complement(derived_subspace(h, n, cache), primitives(h, n, cache)))
    return GeneratorSet(tuple(generators))


def prim_filtration(h: Presentation, cache: Optional[SubspaceStore] = None) -> Dict[Tuple[int, int], int]:
    """dim Prim(H)_n ∩ H_n^(k) for 1 <= n <= N and 0 <= k <= n + 1."""
    filtration = counital_filtration(h, cache)
    dims = {}
    for n in range(1, h.N + 1):
        prim = primitives(h, n, cache)
        for k in range(filtration.bound[n] + 1):
            dims[(n, k)] = intersect(prim, filtration.layer(n, k)).dim
    return dims


def check_gr_prim_embedding(h: Presentation, cache: Optional[SubspaceStore] = None) -> CheckResult:
    """Classes of filtered primitives are primitive in Gr(H) and brackets pass to classes."""
    filtration = counital_filtration(h, cache)
    gr = gr_bialgebra(h, cache)
    pieces: Dict[Tuple[int, int], Tuple[QVector, ...]] = {}
    for n in range(1, h.N + 1):
        prim = primitives(h, n, cache)
        for k in range(1, filtration.bound[n]):
            space = intersect(prim, filtration.layer(n, k))
            pieces[(n, k)] = space.basis
            for x in space.basis:
                image = gr_class(h, Element(n, x), k, cache)
                if not primitives(gr, n).contains(image):
                    return CheckResult.failed(degree=n, layer=k, reason="class not primitive")

    for (p, k), xs in pieces.items():
        for (q, l), ys in pieces.items():
            if p + q > h.N:
                continue
            for x in xs:
                for y in ys:
                    lifted = bracket(h, Element(p, x), Element(q, y), check_primitive=False)
                    left = gr_class(h, lifted, k + l, cache)
                    right = bracket(
                        gr,
                        Element(p, gr_class(h, Element(p, x), k, cache)),
                        Element(q, gr_class(h, Element(q, y), l, cache)),
                        check_primitive=False,
                    ).coords
                    if left != right:
                        return CheckResult.failed(degrees=[p, q], layers=[k, l], reason="bracket")
    return CheckResult.passed()


def check_generated_by_primitives(h: Presentation, cache: Optional[SubspaceStore] = None) -> CheckResult:
    """Prim(H)_n + (A₊²)_n = H_n in every positive degree."""
    for n in range(1, h.N + 1):
        total = span_sum(primitives(h, n, cache), decomposables(h, n)).dim
        if total != h.dim(n):
            return CheckResult.failed(degree=n, spanned=total, dimension=h.dim(n))
    return CheckResult.passed()


# ------------------------------------------------------------------
# Lyndon words
# ------------------------------------------------------------------
@dataclass(frozen=True)
class LyndonTree:
    """A leaf symbol (degree, index) or the bracket [left, right]."""
    symbol: Optional[Symbol] = None
    left: Optional["LyndonTree"] = None
    right: Optional["LyndonTree"] = None

    @property
    def foliage(self) -> Tuple[Symbol, ...]:
        if self.symbol is not None:
            return (self.symbol,)
        assert self.left is not None and self.right is not None
        return self.left.foliage + self.right.foliage

    @property
    def degree(self) -> int:
        return sum(d for d, _ in self.foliage)

    def render(self, name: Callable[[Symbol], str] = lambda s: f"x{s[0]}_{s[1]}") -> str:
        if self.symbol is not None:
            return name(self.symbol)
        assert self.left is not None and self.right is not None
        return f"[{self.left.render(name)},{self.right.render(name)}]"


def is_lyndon(word: Sequence[Symbol]) -> bool:
    """Strictly smaller than each of its proper suffixes."""
    if not word:
        return False
    w = tuple(word)
    return all(w < w[i:] for i in range(1, len(w)))


def standard_bracketing(word: Sequence[Symbol]) -> LyndonTree:
    w = tuple(word)
    if len(w) == 1:
        return LyndonTree(symbol=w[0])
    for split in range(1, len(w)):
        if is_lyndon(w[split:]):
            return LyndonTree(left=standard_bracketing(w[:split]), right=standard_bracketing(w[split:]))
    raise InvariantViolation(f"Word {w} has no Lyndon suffix")


def _alphabet(u: Union[Sequence[int], Mapping[int, int]]) -> List[Symbol]:
    if isinstance(u, Mapping):
        items: Iterable[Tuple[int, int]] = u.items()
        if u.get(0, 0):
            raise PreconditionError("Generators must have positive degree")
    else:
        if u and u[0]:
            raise PreconditionError(
                f"Multiplicities are indexed by degree from 0, so u[0] must be 0; got {u[0]}"
            )
        items = enumerate(u)
    return sorted((d, i) for d, count in items if d >= 1 for i in range(count))


def _weighted_words(alphabet: Sequence[Symbol], n: int) -> Iterator[Tuple[Symbol, ...]]:
    if n == 0:
        yield ()
        return
    for symbol in alphabet:
        if symbol[0] <= n:
            for rest in _weighted_words(alphabet, n - symbol[0]):
                yield (symbol,) + rest


def lyndon_basis(u: Union[Sequence[int], Mapping[int, int]], n: int) -> List[LyndonTree]:
    """Standard bracketings of the Lyndon words of weighted degree n, in lexicographic order.

    ``u`` gives the number of symbols in each degree, either as a sequence
    indexed by degree (so ``u[0]`` is 0 and two letters are ``[0, 2]``) or as
    a mapping degree -> count such as ``{1: 2}``.
    """
    alphabet = _alphabet(u)
    return [standard_bracketing(w) for w in _weighted_words(alphabet, n) if is_lyndon(w)]


def evaluate_tree(h: Presentation, tree: LyndonTree, generators: GeneratorSet) -> Element:
    if tree.symbol is not None:
        d, i = tree.symbol
        return Element(d, generators.generators[d][i])
    assert tree.left is not None and tree.right is not None
    return bracket(
        h,
        evaluate_tree(h, tree.left, generators),
        evaluate_tree(h, tree.right, generators),
        check_primitive=False,
    )


@dataclass(frozen=True)
class LyndonDegree:
    degree: int
    count: int
    rank: int
    spans: bool


def lyndon_evaluation(
    h: Presentation,
    generators: GeneratorSet,
    cache: Optional[SubspaceStore] = None,
) -> List[LyndonDegree]:
    """Per degree, evaluate the Lyndon basis on ``generators`` and compare with Prim(H)_n."""
    records = []
    for n in range(1, h.N + 1):
        trees = lyndon_basis(generators.multiplicities, n)
        images = [evaluate_tree(h, tree, generators).coords for tree in trees]
        prim = primitives(h, n, cache)
        found = rank_of(images, h.dim(n))
        spans = (
            found == len(trees) == prim.dim
            and all(prim.contains(image) for image in images)
        )
        records.append(LyndonDegree(n, len(trees), found, spans))
        logger.debug("Degree %s Lyndon evaluation: %s trees, rank %s", n, len(trees), found)
    return records


# ------------------------------------------------------------------
# Certificate
# ------------------------------------------------------------------
STAGES = ("free", "axioms", "gr_cocommutative", "gr_dimensions", "lie_generators", "lyndon", "pbw")


@dataclass
class StageResult:
    name: str
    ok: bool
    witness: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "ok": self.ok, "witness": self.witness}


@dataclass
class DegreeRecord:
    degree: int
    dim_h: int
    generators: int
    dim_prim: Optional[int] = None
    dim_derived: Optional[int] = None
    lie_generators: Optional[int] = None
    lyndon_count: Optional[int] = None
    lyndon_rank: Optional[int] = None
    spans: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "dim_h": self.dim_h,
            "generators": self.generators,
            "dim_prim": self.dim_prim,
            "dim_derived": self.dim_derived,
            "lie_generators": self.lie_generators,
            "lyndon_count": self.lyndon_count,
            "lyndon_rank": self.lyndon_rank,
            "spans": self.spans,
        }


@dataclass
class Certificate:
    """Audit trail of one freeness certification of Prim(H) up to degree N."""
    model: str
    N: int
    input_hash: str
    stages: List[StageResult] = field(default_factory=list)
    degrees: List[DegreeRecord] = field(default_factory=list)
    gr_cocommutative_ok: Optional[bool] = None
    pbw_ok: Optional[bool] = None
    prim_filtration: Dict[Tuple[int, int], int] = field(default_factory=dict)
    gr_prim_embedding_ok: Optional[bool] = None
    gr_prim_free_ok: Optional[bool] = None
    gr_pbw_ok: Optional[bool] = None
    gr_generated_by_primitives_ok: Optional[bool] = None

    @property
    def verdict(self) -> bool:
        if len(self.stages) < len(STAGES) or not all(stage.ok for stage in self.stages):
            return False
        flags = (
            self.gr_cocommutative_ok,
            self.pbw_ok,
            self.gr_prim_embedding_ok,
            self.gr_prim_free_ok,
            self.gr_pbw_ok,
            self.gr_generated_by_primitives_ok,
        )
        # None marks a check that does not apply, e.g. PBW for a noncocommutative H.
        return all(flag is not False for flag in flags)

    def first_failure(self) -> Optional[StageResult]:
        return next((stage for stage in self.stages if not stage.ok), None)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tool": {"name": "freeprim", "version": __version__},
            "model": self.model,
            "N": self.N,
            "input_hash": self.input_hash,
            "stages": [stage.to_dict() for stage in self.stages],
            "degrees": [record.to_dict() for record in self.degrees],
            "gr_cocommutative_ok": self.gr_cocommutative_ok,
            "pbw_ok": self.pbw_ok,
            "prim_filtration": {f"{n},{k}": d for (n, k), d in sorted(self.prim_filtration.items())},
            "gr_prim_embedding_ok": self.gr_prim_embedding_ok,
            "gr_prim_free_ok": self.gr_prim_free_ok,
            "gr_pbw_ok": self.gr_pbw_ok,
            "gr_generated_by_primitives_ok": self.gr_generated_by_primitives_ok,
            "verdict": self.verdict,
        }


def _lyndon_ok(records: Sequence[LyndonDegree]) -> Optional[LyndonDegree]:
    return next((record for record in records if not record.spans), None)


def certify_prim_free(h: Presentation, cache: Optional[SubspaceStore] = None) -> Certificate:
    """Run the freeness certification stages in order, stopping at the first failure."""
    certificate = Certificate(model=h.name, N=h.N, input_hash=h.content_hash())

    def stage(name: str, result: CheckResult) -> bool:
        certificate.stages.append(StageResult(name, result.ok, result.witness))
        logger.info("Stage %s for %s: %s", name, h.name, "ok" if result.ok else "failed")
        return result.ok

    generators = extract_generators(h)
    certificate.degrees = [
        DegreeRecord(n, h.dim(n), generators.multiplicities[n]) for n in range(1, h.N + 1)
    ]
    if not stage("free", check_free(h, generators)):
        return certificate

    report = check_axioms(h)
    failure = report.first_failure()
    axioms = CheckResult.passed() if failure is None else CheckResult.failed(
        axiom=failure, **report.witnesses.get(failure, {})
    )
    if not stage("axioms", axioms):
        return certificate

    gr = gr_bialgebra(h, cache)
    cocommutative = check_cocommutative(gr)
    certificate.gr_cocommutative_ok = cocommutative.ok
    if not stage("gr_cocommutative", cocommutative):
        return certificate

    mismatch = next((n for n in range(h.N + 1) if gr.dim(n) != h.dim(n)), None)
    dims = CheckResult.passed() if mismatch is None else CheckResult.failed(
        degree=mismatch, dim_h=h.dim(mismatch), dim_gr=gr.dim(mismatch)
    )
    if not stage("gr_dimensions", dims):
        return certificate

    try:
        lie_gens = lie_generators(h, cache)
    except FreePrimError as exc:
        stage("lie_generators", CheckResult.failed(reason=exc.message))
        return certificate
    for record in certificate.degrees:
        n = record.degree
        record.dim_prim = primitives(h, n, cache).dim
        record.dim_derived = derived_subspace(h, n, cache).dim
        record.lie_generators = lie_gens.multiplicities[n]
    stage("lie_generators", CheckResult.passed())

    records = lyndon_evaluation(h, lie_gens, cache)
    for record, lyndon in zip(certificate.degrees, records):
        record.lyndon_count = lyndon.count
        record.lyndon_rank = lyndon.rank
        record.spans = lyndon.spans
    bad = _lyndon_ok(records)
    if not stage("lyndon", CheckResult.passed() if bad is None else CheckResult.failed(
        degree=bad.degree, count=bad.count, rank=bad.rank
    )):
        return certificate

    prim_dims = primitive_dims(h, cache)
    if check_cocommutative(h):
        expected = euler_product(prim_dims, h.N)
        certificate.pbw_ok = expected == tuple(h.dims.dims)
        pbw = CheckResult.passed() if certificate.pbw_ok else CheckResult.failed(
            expected=list(expected), found=list(h.dims.dims)
        )
    else:
        pbw = CheckResult.passed()
    stage("pbw", pbw)

    certificate.prim_filtration = prim_filtration(h, cache)
    certificate.gr_prim_embedding_ok = check_gr_prim_embedding(h, cache).ok
    gr_gens = lie_generators(gr)
    certificate.gr_prim_free_ok = _lyndon_ok(lyndon_evaluation(gr, gr_gens)) is None
    certificate.gr_pbw_ok = euler_product(primitive_dims(gr), gr.N) == tuple(gr.dims.dims)
    certificate.gr_generated_by_primitives_ok = check_generated_by_primitives(gr).ok
    logger.info("Certificate for %s up to degree %s: verdict %s", h.name, h.N, certificate.verdict)
    return certificate


# ------------------------------------------------------------------
# Abstract Lie presentations and enveloping algebras
# ------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class LiePresentation:
    """Graded Lie algebra g = g_1 ⊕ ... ⊕ g_N by bracket structure constants.

    ``bracket[(p, q, i, j)]`` is [e_{p,i}, e_{q,j}] in degree p + q; omitted
    entries are zero and brackets past N are truncated away.
    """
    name: str
    N: int
    dims: Tuple[int, ...]
    bracket: Mapping[ProductKey, QVector]
    labels: Optional[Tuple[Tuple[str, ...], ...]] = None

    def __post_init__(self) -> None:
        if len(self.dims) != self.N + 1:
            raise InvalidLieError(f"Lie dims cover {len(self.dims)} degrees, expected {self.N + 1}")
        if self.dims[0] != 0:
            raise InvalidLieError("A connected graded Lie algebra has g_0 = 0")
        for (p, q, i, j), vector in self.bracket.items():
            if min(p, q) < 1 or p + q > self.N:
                raise InvalidLieError(f"Bracket entry ({p}, {q}) outside degrees 1..{self.N}")
            if not (0 <= i < self.dims[p] and 0 <= j < self.dims[q]):
                raise InvalidLieError(f"Bracket entry ({p}, {q}, {i}, {j}) has a bad index")
            if len(vector) != self.dims[p + q]:
                raise InvalidLieError(f"Bracket ({p}, {q}, {i}, {j}) has the wrong length")
        if self.labels is not None and tuple(len(names) for names in self.labels) != self.dims:
            raise InvalidLieError("Labels do not match the dimensions")

    def label(self, symbol: Symbol) -> str:
        d, i = symbol
        if self.labels is not None:
            return self.labels[d][i]
        return f"g{d}_{i}"

    def symbols(self) -> List[Symbol]:
        return [(d, i) for d in range(1, self.N + 1) for i in range(self.dims[d])]


def lie_bracket(g: LiePresentation, x: Element, y: Element) -> Element:
    """Bilinear extension of the structure constants; brackets past N vanish."""
    degree = x.degree + y.degree
    if degree > g.N:
        return Element(degree, ())
    acc = [ZERO] * g.dims[degree]
    for i, xi in enumerate(x.coords):
        if not xi:
            continue
        for j, yj in enumerate(y.coords):
            vector = g.bracket.get((x.degree, y.degree, i, j))
            if not yj or vector is None:
                continue
            for index, value in enumerate(vector):
                if value:
                    acc[index] += xi * yj * value
    return Element(degree, tuple(acc))


def _g_element(g: LiePresentation, symbol: Symbol) -> Element:
    d, i = symbol
    return Element(d, unit_vector(g.dims[d], i))


def check_lie(g: LiePresentation) -> CheckResult:
    """Antisymmetry and the Jacobi identity on basis pairs and triples of total degree <= N."""
    symbols = g.symbols()
    for x in symbols:
        for y in symbols:
            if x[0] + y[0] > g.N:
                continue
            xy = lie_bracket(g, _g_element(g, x), _g_element(g, y)).coords
            yx = lie_bracket(g, _g_element(g, y), _g_element(g, x)).coords
            if any(a + b for a, b in zip(xy, yx)):
                return CheckResult.failed(identity="antisymmetry", symbols=[list(x), list(y)])
    for x in symbols:
        for y in symbols:
            for z in symbols:
                if x[0] + y[0] + z[0] > g.N:
                    continue
                ex, ey, ez = (_g_element(g, s) for s in (x, y, z))
                total = [ZERO] * g.dims[x[0] + y[0] + z[0]]
                for a, b, c in ((ex, ey, ez), (ey, ez, ex), (ez, ex, ey)):
                    term = lie_bracket(g, a, lie_bracket(g, b, c)).coords
                    total = [s + t for s, t in zip(total, term)]
                if any(total):
                    return CheckResult.failed(identity="jacobi", symbols=[list(x), list(y), list(z)])
    return CheckResult.passed()


def _pbw_monomials(symbols: Sequence[Symbol], n: int, start: int = 0) -> Iterator[Tuple[Symbol, ...]]:
    if n == 0:
        yield ()
        return
    for position in range(start, len(symbols)):
        symbol = symbols[position]
        if symbol[0] <= n:
            for rest in _pbw_monomials(symbols, n - symbol[0], position):
                yield (symbol,) + rest


class _Straightener:
    """Normal forms of words in U(g) over the ordered PBW basis; see docs/straightening.md."""

    def __init__(self, g: LiePresentation) -> None:
        self.g = g
        self._memo: Dict[Tuple[Symbol, ...], Dict[Tuple[Symbol, ...], Fraction]] = {}

    def normal_form(self, word: Tuple[Symbol, ...]) -> Dict[Tuple[Symbol, ...], Fraction]:
        if word in self._memo:
            return self._memo[word]
        position = next((i for i in range(len(word) - 1) if word[i] > word[i + 1]), None)
        if position is None:
            result = {word: Fraction(1)}
        else:
            head, y, x, tail = word[:position], word[position], word[position + 1], word[position + 2:]
            result = dict(self.normal_form(head + (x, y) + tail))
            # y x = x y + [y, x]
            commutator = lie_bracket(self.g, _g_element(self.g, y), _g_element(self.g, x))
            for index, c in enumerate(commutator.coords):
                if not c:
                    continue
                for monomial, value in self.normal_form(head + ((commutator.degree, index),) + tail).items():
                    total = result.get(monomial, ZERO) + c * value
                    if total:
                        result[monomial] = total
                    else:
                        result.pop(monomial, None)
        self._memo[word] = result
        return result


def enveloping(g: LiePresentation) -> Presentation:
    """U(g) truncated at N in the PBW basis of nondecreasing monomials."""
    verdict = check_lie(g)
    if not verdict:
        raise InvalidLieError(f"'{g.name}' is not a Lie algebra: {verdict.witness}")

    symbols = g.symbols()
    monomials = [list(_pbw_monomials(symbols, n)) for n in range(g.N + 1)]
    index = [{monomial: i for i, monomial in enumerate(degree)} for degree in monomials]

    def monomial_degree(monomial: Tuple[Symbol, ...]) -> int:
        return sum(d for d, _ in monomial)

    basis = tuple(
        tuple("·".join(g.label(s) for s in monomial) or "1" for monomial in degree)
        for degree in monomials
    )

    straightener = _Straightener(g)
    product: Dict[ProductKey, QVector] = {}
    for p in range(g.N + 1):
        for q in range(g.N - p + 1):
            for i, left in enumerate(monomials[p]):
                for j, right in enumerate(monomials[q]):
                    acc = [ZERO] * len(monomials[p + q])
                    for monomial, value in straightener.normal_form(left + right).items():
                        acc[index[p + q][monomial]] += value
                    product[(p, q, i, j)] = tuple(acc)

    coproduct: Dict[CoproductKey, Tuple[CoproductTerm, ...]] = {}
    for n in range(g.N + 1):
        for i, monomial in enumerate(monomials[n]):
            terms: Dict[Tuple[int, int, int], Fraction] = {}
            length = len(monomial)
            for mask in range(1 << length):
                chosen = tuple(monomial[k] for k in range(length) if mask >> k & 1)
                rest = tuple(monomial[k] for k in range(length) if not mask >> k & 1)
                p = monomial_degree(chosen)
                key = (p, index[p][chosen], index[n - p][rest])
                terms[key] = terms.get(key, ZERO) + 1
            coproduct[(n, i)] = tuple(CoproductTerm(p, a, b, c) for (p, a, b), c in sorted(terms.items()))

    try:
        return Presentation(f"U({g.name})", g.N, basis, product, coproduct)
    except PresentationInvalidError as exc:
        raise InvariantViolation(f"Enveloping algebra of '{g.name}' is malformed: {exc.message}") from exc


def _embed(slots: Mapping[Symbol, int], degree: int, vector: Sequence[Fraction], length: int) -> QVector:
    acc = [ZERO] * length
    for i, value in enumerate(vector):
        if value:
            acc[slots[(degree, i)]] = Fraction(value)
    return tuple(acc)


def check_derived_is_square_part(g: LiePresentation) -> CheckResult:
    """In U(g), g_n ∩ (ker ε)²_n equals the image of [g, g]_n for every n <= N."""
    u = enveloping(g)
    filtration = counital_filtration(u)
    symbols = g.symbols()
    for n in range(1, g.N + 1):
        # Position of each one-letter monomial e_{n,i} in the PBW basis of U(g)_n.
        singles = {
            monomial[0]: position
            for position, monomial in enumerate(_pbw_monomials(symbols, n))
            if len(monomial) == 1
        }

        image = Subspace.span(
            [_embed(singles, n, unit_vector(g.dims[n], i), u.dim(n)) for i in range(g.dims[n])], u.dim(n)
        )
        brackets = [
            _embed(singles, n, lie_bracket(g, _g_element(g, x), _g_element(g, y)).coords, u.dim(n))
            for x in symbols
            for y in symbols
            if x[0] + y[0] == n
        ]
        derived = Subspace.span(brackets, u.dim(n))
        found = intersect(image, filtration.layer(n, 2))
        if found != derived:
            return CheckResult.failed(degree=n, intersection=found.dim, derived=derived.dim)
    return CheckResult.passed()
