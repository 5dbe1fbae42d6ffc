"""
Built-in presentations.

Every table here is produced combinatorially (words, compositions,
permutations) and never through the checking code in ``bialg``, so running
the checks on these models tests one code path against another.
"""

from __future__ import annotations

import itertools
import logging
import string
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .bialg import CoproductKey, CoproductTerm, Element, Presentation, ProductKey
from .config import DEFAULT_FQSYM_CAP
from .errors import InvariantViolation, PreconditionError, ResourceCapError
from .exactq import QVector, express, unit_vector
from .freealg import GeneratorSet
from .lie import LiePresentation, LyndonTree, bracket, evaluate_tree, lyndon_basis

logger = logging.getLogger(__name__)

MODEL_KINDS = ("tensor", "nsym", "fqsym")

Word = Tuple[int, ...]


def _letter(i: int) -> str:
    return string.ascii_lowercase[i] if i < 26 else f"l{i}"


def _table(
    name: str,
    words: Sequence[Sequence[Word]],
    concat_product: Dict[ProductKey, Dict[int, int]],
    coproduct: Dict[CoproductKey, Dict[Tuple[int, int, int], int]],
    labels: Sequence[Sequence[str]],
) -> Presentation:
    product: Dict[ProductKey, QVector] = {}
    for (p, q, i, j), result in concat_product.items():
        vector = [Fraction(0)] * len(words[p + q])
        for index, count in result.items():
            vector[index] += count
        product[(p, q, i, j)] = tuple(vector)
    coproduct_table = {
        key: tuple(CoproductTerm(p, a, b, Fraction(c)) for (p, a, b), c in sorted(terms.items()) if c)
        for key, terms in coproduct.items()
    }
    return Presentation(
        name=name,
        N=len(words) - 1,
        basis=tuple(tuple(names) for names in labels),
        product=product,
        coproduct=coproduct_table,
    )


def _check_degree(N: int) -> None:
    if N < 1:
        raise PreconditionError(f"Truncation degree must be at least 1, got {N}")


def tensor_model(d: int, N: int) -> Presentation:
    """T(V) on d primitive letters: concatenation and the unshuffle coproduct."""
    if d < 1:
        raise PreconditionError(f"The tensor model needs at least one letter, got {d}")
    _check_degree(N)
    words = [list(itertools.product(range(d), repeat=n)) for n in range(N + 1)]
    index = [{w: i for i, w in enumerate(ws)} for ws in words]

    product: Dict[ProductKey, Dict[int, int]] = {}
    for p in range(N + 1):
        for q in range(N - p + 1):
            for i, u in enumerate(words[p]):
                for j, w in enumerate(words[q]):
                    product[(p, q, i, j)] = {index[p + q][u + w]: 1}

    coproduct: Dict[CoproductKey, Dict[Tuple[int, int, int], int]] = {}
    for n in range(N + 1):
        for i, w in enumerate(words[n]):
            terms: Dict[Tuple[int, int, int], int] = {}
            for mask in range(1 << n):
                left = tuple(w[k] for k in range(n) if mask >> k & 1)
                right = tuple(w[k] for k in range(n) if not mask >> k & 1)
                key = (len(left), index[len(left)][left], index[len(right)][right])
                terms[key] = terms.get(key, 0) + 1
            coproduct[(n, i)] = terms

    labels = [["".join(_letter(c) for c in w) or "1" for w in ws] for ws in words]
    logger.debug("Built tensor model on %s letters up to degree %s", d, N)
    return _table(f"tensor({d})", words, product, coproduct, labels)


def compositions(n: int) -> List[Word]:
    """Compositions of n ordered by number of parts, then lexicographically."""
    if n == 0:
        return [()]
    found = []
    for cuts in range(n):
        for positions in itertools.combinations(range(1, n), cuts):
            bounds = (0,) + positions + (n,)
            found.append(tuple(bounds[k + 1] - bounds[k] for k in range(len(bounds) - 1)))
    return sorted(found, key=lambda c: (len(c), c))


def nsym_model(N: int) -> Presentation:
    """Noncommutative symmetric functions in the S-basis: S_c = S_{c_1} ... S_{c_k}."""
    _check_degree(N)
    words = [compositions(n) for n in range(N + 1)]
    index = [{c: i for i, c in enumerate(cs)} for cs in words]

    product: Dict[ProductKey, Dict[int, int]] = {}
    for p in range(N + 1):
        for q in range(N - p + 1):
            for i, u in enumerate(words[p]):
                for j, w in enumerate(words[q]):
                    product[(p, q, i, j)] = {index[p + q][u + w]: 1}

    # Δ(S_m) = sum_{i+j=m} S_i (x) S_j, extended multiplicatively; S_0 = 1 drops out.
    coproduct: Dict[CoproductKey, Dict[Tuple[int, int, int], int]] = {}
    for n in range(N + 1):
        for i, c in enumerate(words[n]):
            terms: Dict[Tuple[int, int, int], int] = {}
            for split in itertools.product(*(range(part + 1) for part in c)):
                left = tuple(a for a in split if a)
                right = tuple(part - a for part, a in zip(c, split) if part - a)
                p = sum(left)
                key = (p, index[p][left], index[n - p][right])
                terms[key] = terms.get(key, 0) + 1
            coproduct[(n, i)] = terms

    labels = [["S(" + ",".join(str(part) for part in c) + ")" if c else "1" for c in cs] for cs in words]
    logger.debug("Built NSym up to degree %s", N)
    return _table("nsym", words, product, coproduct, labels)


def standardize(word: Sequence[int]) -> Word:
    """The permutation with the same relative order as a word of distinct letters."""
    ranks = {letter: rank + 1 for rank, letter in enumerate(sorted(word))}
    return tuple(ranks[letter] for letter in word)


def fqsym_model(N: int, cap: int = DEFAULT_FQSYM_CAP) -> Presentation:
    """Malvenuto-Reutenauer algebra in the F-basis: shifted shuffle and deconcatenation."""
    _check_degree(N)
    if N > cap:
        raise ResourceCapError(f"FQSym up to degree {N} exceeds the configured cap {cap}")
    words = [list(itertools.permutations(range(1, n + 1))) for n in range(N + 1)]
    index = [{sigma: i for i, sigma in enumerate(perms)} for perms in words]

    product: Dict[ProductKey, Dict[int, int]] = {}
    for p in range(N + 1):
        for q in range(N - p + 1):
            for i, sigma in enumerate(words[p]):
                for j, tau in enumerate(words[q]):
                    shifted = [letter + p for letter in tau]
                    result: Dict[int, int] = {}
                    for slots in itertools.combinations(range(p + q), p):
                        left, right = iter(sigma), iter(shifted)
                        chosen = set(slots)
                        merged = tuple(next(left) if k in chosen else next(right) for k in range(p + q))
                        result[index[p + q][merged]] = result.get(index[p + q][merged], 0) + 1
                    product[(p, q, i, j)] = result

    coproduct: Dict[CoproductKey, Dict[Tuple[int, int, int], int]] = {}
    for n in range(N + 1):
        for i, sigma in enumerate(words[n]):
            terms: Dict[Tuple[int, int, int], int] = {}
            for cut in range(n + 1):
                key = (cut, index[cut][standardize(sigma[:cut])], index[n - cut][standardize(sigma[cut:])])
                terms[key] = terms.get(key, 0) + 1
            coproduct[(n, i)] = terms

    labels = [["F" + "".join(str(letter) for letter in sigma) if sigma else "1" for sigma in perms] for perms in words]
    logger.debug("Built FQSym up to degree %s", N)
    return _table("fqsym", words, product, coproduct, labels)


def square_zero_model() -> Presentation:
    """Q[x]/(x²) with x primitive in degree 1, truncated at degree 2."""
    one = (Fraction(1),)
    return Presentation(
        name="square-zero",
        N=2,
        basis=(("1",), ("x",), ()),
        product={(0, 0, 0, 0): one, (0, 1, 0, 0): one, (1, 0, 0, 0): one},
        coproduct={
            (0, 0): (CoproductTerm(0, 0, 0, Fraction(1)),),
            (1, 0): (CoproductTerm(0, 0, 0, Fraction(1)), CoproductTerm(1, 0, 0, Fraction(1))),
        },
    )


@dataclass(frozen=True)
class ModelId:
    """A built-in model with its truncation degree."""
    kind: str
    N: int
    letters: int = 2

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise PreconditionError(f"Unknown model '{self.kind}', expected one of {', '.join(MODEL_KINDS)}")
        _check_degree(self.N)
        if self.letters < 1:
            raise PreconditionError(f"Letter count must be at least 1, got {self.letters}")

    def build(self, fqsym_cap: int = DEFAULT_FQSYM_CAP) -> Presentation:
        if self.kind == "tensor":
            return tensor_model(self.letters, self.N)
        if self.kind == "nsym":
            return nsym_model(self.N)
        return fqsym_model(self.N, cap=fqsym_cap)


# ------------------------------------------------------------------
# Lie presentations
# ------------------------------------------------------------------
def _pad_dims(dims: Sequence[int], N: int) -> Tuple[int, ...]:
    padded = list(dims[: N + 1]) + [0] * max(0, N + 1 - len(dims))
    return tuple(padded)


def abelian_lie(dims: Sequence[int], N: int) -> LiePresentation:
    """Abelian graded Lie algebra with dims[d] basis elements in degree d."""
    _check_degree(N)
    return LiePresentation(name="abelian", N=N, dims=_pad_dims(dims, N), bracket={})


def heisenberg_lie(N: int) -> LiePresentation:
    """x, y in degree 1 and z = [x, y] central in degree 2."""
    _check_degree(N)
    dims = _pad_dims((0, 2, 1), N)
    structure: Dict[ProductKey, QVector] = {}
    labels: List[Tuple[str, ...]] = [(), ("x", "y"), ("z",)][: N + 1]
    if N >= 2:
        structure[(1, 1, 0, 1)] = (Fraction(1),)
        structure[(1, 1, 1, 0)] = (Fraction(-1),)
    labels += [()] * (N + 1 - len(labels))
    return LiePresentation(name="heisenberg", N=N, dims=dims, bracket=structure, labels=tuple(labels))


def free_lie(letters: int, N: int) -> LiePresentation:
    """Free Lie algebra on degree-1 letters, Lyndon basis, constants read off inside T(V)."""
    _check_degree(N)
    tensor = tensor_model(letters, N)
    symbols = GeneratorSet(
        ((),) + tuple(
            tuple(unit_vector(letters, i) for i in range(letters)) if d == 1 else ()
            for d in range(1, N + 1)
        )
    )
    trees: List[List[LyndonTree]] = [[]] + [lyndon_basis({1: letters}, n) for n in range(1, N + 1)]
    images = [[evaluate_tree(tensor, tree, symbols).coords for tree in degree] for degree in trees]

    structure: Dict[ProductKey, QVector] = {}
    for p in range(1, N + 1):
        for q in range(1, N - p + 1):
            for i, x in enumerate(images[p]):
                for j, y in enumerate(images[q]):
                    value = bracket(tensor, Element(p, x), Element(q, y), check_primitive=False)
                    coords = express(images[p + q], value.coords, tensor.dim(p + q))
                    if coords is None:
                        raise InvariantViolation(f"Bracket in degree {p + q} left the Lyndon span")
                    if any(coords):
                        structure[(p, q, i, j)] = coords

    labels = tuple(
        tuple(tree.render(lambda s: _letter(s[1])) for tree in degree) for degree in trees
    )
    return LiePresentation(
        name=f"free({letters})",
        N=N,
        dims=tuple(len(degree) for degree in trees),
        bracket=structure,
        labels=labels,
    )
