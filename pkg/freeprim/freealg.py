"""
Free graded algebras: decomposables, generator extraction, word-evaluation
freeness checks and Hilbert series bookkeeping.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from .bialg import (
    Element,
    Presentation,
    SubspaceStore,
    basis_element,
    gr_bialgebra,
    gr_representatives,
    memo_for,
    multiply,
    unit,
)
from .errors import DegreeDomainError, LiftFailedError, PreconditionError
from .exactq import QVector, Subspace, rank_of, relative_complement
from .graded import CheckResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratorSet:
    """Homogeneous generators per degree; ``generators[0]`` is always empty.

    ``layers`` records, when the set was lifted from Gr(H), the filtration
    layer each generator represents.
    """
    generators: Tuple[Tuple[QVector, ...], ...]
    layers: Optional[Tuple[Tuple[int, ...], ...]] = None

    def __post_init__(self) -> None:
        if self.generators and self.generators[0]:
            raise PreconditionError("Generators must have positive degree")

    @property
    def N(self) -> int:
        return len(self.generators) - 1

    @property
    def multiplicities(self) -> Tuple[int, ...]:
        return tuple(len(vectors) for vectors in self.generators)

    def elements(self, n: int) -> List[Element]:
        return [Element(n, vector) for vector in self.generators[n]]

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "multiplicities": list(self.multiplicities),
            "generators": [
                [[[value.numerator, value.denominator] for value in vector] for vector in vectors]
                for vectors in self.generators
            ],
        }
        if self.layers is not None:
            data["layers"] = [list(layer) for layer in self.layers]
        return data


@dataclass(frozen=True)
class HilbertData:
    a: Tuple[int, ...]
    v: Tuple[int, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {"a": list(self.a), "v": list(self.v)}


def decomposables(h: Presentation, n: int) -> Subspace:
    """A₊² in degree n: span of m(x, y) over basis pairs with positive degrees summing to n."""
    if not 1 <= n <= h.N:
        raise DegreeDomainError(f"Decomposables need 1 <= n <= {h.N}, got {n}")
    memo = memo_for(h)
    key = f"decomposables:{n}"
    if key not in memo:
        vectors = [
            multiply(h, basis_element(h, p, i), basis_element(h, n - p, j)).coords
            for p in range(1, n)
            for i in range(h.dim(p))
            for j in range(h.dim(n - p))
        ]
        memo[key] = Subspace.span(vectors, h.dim(n))
    space: Subspace = memo[key]
    return space


def extract_generators(h: Presentation) -> GeneratorSet:
    """Canonical complement of the decomposables in every positive degree."""
    generators: List[Tuple[QVector, ...]] = [()]
    for n in range(1, h.N + 1):
        generators.append(relative_complement(decomposables(h, n), Subspace.full(h.dim(n))))
    result = GeneratorSet(tuple(generators))
    logger.debug("Generators of %s: %s", h.name, result.multiplicities)
    return result


def _word_values(
    h: Presentation, g: GeneratorSet, remaining: int, prefix: Element
) -> Iterator[Element]:
    # First part ascending, so compositions come out in lexicographic order.
    if remaining == 0:
        yield prefix
        return
    for d in range(1, remaining + 1):
        for generator in g.elements(d):
            yield from _word_values(h, g, remaining - d, multiply(h, prefix, generator))


def word_evaluations(h: Presentation, g: GeneratorSet, n: int) -> List[QVector]:
    """Values in H_n of all generator words of total degree n."""
    return [value.coords for value in _word_values(h, g, n, unit(h))]


def check_free(h: Presentation, g: GeneratorSet) -> CheckResult:
    """Generator words form a basis of H_n for every n <= N."""
    if g.N < h.N:
        raise PreconditionError(f"Generator set stops at degree {g.N}, presentation at {h.N}")
    counts = word_count(g.multiplicities, h.N)
    for n in range(1, h.N + 1):
        if counts[n] != h.dim(n):
            return CheckResult.failed(degree=n, words=counts[n], dimension=h.dim(n))
        found = rank_of(word_evaluations(h, g, n), h.dim(n))
        if found != h.dim(n):
            return CheckResult.failed(degree=n, words=counts[n], rank=found, dimension=h.dim(n))
    return CheckResult.passed()


def lift_generators_from_gr(h: Presentation, cache: Optional[SubspaceStore] = None) -> GeneratorSet:
    """Representatives in H of the canonical generators of Gr(H)."""
    gr = gr_bialgebra(h, cache)
    gr_generators = extract_generators(gr)
    verdict = check_free(gr, gr_generators)
    if not verdict:
        raise LiftFailedError(f"Gr({h.name}) is not free: {verdict.witness}")

    basis = gr_representatives(h, cache)
    lifted: List[Tuple[QVector, ...]] = [()]
    layers: List[Tuple[int, ...]] = [()]
    for n in range(1, h.N + 1):
        vectors = []
        degree_layers = []
        for w in gr_generators.generators[n]:
            vectors.append(basis.lift(n, w))
            degree_layers.append(min(k for k, value in zip(basis.layers[n], w) if value))
        lifted.append(tuple(vectors))
        layers.append(tuple(degree_layers))

    result = GeneratorSet(tuple(lifted), tuple(layers))
    verdict = check_free(h, result)
    if not verdict:
        raise LiftFailedError(f"Lifted generators of {h.name} are not free: {verdict.witness}")
    return result


# ------------------------------------------------------------------
# Series
# ------------------------------------------------------------------
def invert_hilbert(a: Sequence[int]) -> Tuple[int, ...]:
    """v with sum a_n t^n = 1 / (1 - sum v_n t^n) modulo t^len(a)."""
    if not a or a[0] != 1:
        raise PreconditionError("A Hilbert series of a connected algebra starts with 1")
    v = [0] * len(a)
    for n in range(1, len(a)):
        v[n] = a[n] - sum(v[k] * a[n - k] for k in range(1, n))
    return tuple(v)


def hilbert_data(h: Presentation) -> HilbertData:
    a = tuple(h.dims.dims)
    return HilbertData(a, invert_hilbert(a))


def word_count(v: Sequence[int], N: int) -> Tuple[int, ...]:
    """Coefficients of 1 / (1 - sum v_d t^d) up to t^N."""
    counts = [0] * (N + 1)
    counts[0] = 1
    for n in range(1, N + 1):
        counts[n] = sum(v[d] * counts[n - d] for d in range(1, n + 1) if d < len(v))
    return tuple(counts)


def euler_product(c: Sequence[int], N: int) -> Tuple[int, ...]:
    """Coefficients of prod_{n>=1} (1 - t^n)^(-c_n) up to t^N."""
    series = [0] * (N + 1)
    series[0] = 1
    for n in range(1, min(len(c), N + 1)):
        if not c[n]:
            continue
        factor = [0] * (N + 1)
        for k in range(N // n + 1):
            factor[n * k] = math.comb(c[n] + k - 1, k)
        series = [
            sum(series[i] * factor[m - i] for i in range(m + 1))
            for m in range(N + 1)
        ]
    return tuple(series)
