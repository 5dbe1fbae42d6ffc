"""Unit tests for primitives, Lyndon bases, the freeness certificate and enveloping algebras."""

from __future__ import annotations

import unittest
from fractions import Fraction
from typing import List

from freeprim.bialg import (
    Element,
    Presentation,
    basis_element,
    check_axioms,
    check_cocommutative,
    gr_bialgebra,
    permute_basis,
)
from freeprim.errors import InvalidLieError, PreconditionError, TruncationError
from freeprim.exactq import add_vectors, qvector
from freeprim.freealg import check_free, euler_product, extract_generators, word_count
from freeprim.lie import (
    STAGES,
    LiePresentation,
    bracket,
    certify_prim_free,
    check_derived_is_square_part,
    check_generated_by_primitives,
    check_gr_prim_embedding,
    check_lie,
    derived_subspace,
    enveloping,
    is_lyndon,
    lie_generators,
    lyndon_basis,
    primitive_dims,
    primitives,
    standard_bracketing,
)
from freeprim.models import (
    abelian_lie,
    fqsym_model,
    free_lie,
    heisenberg_lie,
    nsym_model,
    square_zero_model,
    tensor_model,
)


class PrimitiveTests(unittest.TestCase):
    def test_degree_two_examples(self) -> None:
        self.assertEqual(primitives(nsym_model(3), 2).basis, (qvector([1, Fraction(-1, 2)]),))
        self.assertEqual(primitives(fqsym_model(3), 2).basis, (qvector([1, -1]),))

    def test_tensor_dimensions_count_lyndon_words(self) -> None:
        dims = primitive_dims(tensor_model(2, 6))
        self.assertEqual(dims, (0, 2, 1, 2, 3, 6, 9))
        self.assertEqual(dims[1:], tuple(len(lyndon_basis([0, 2], n)) for n in range(1, 7)))

    def test_bracket_of_letters(self) -> None:
        h = tensor_model(2, 3)
        a, b = basis_element(h, 1, 0), basis_element(h, 1, 1)
        self.assertEqual(bracket(h, a, b).coords, qvector([0, 1, -1, 0]))
        self.assertTrue(bracket(h, a, a).is_zero())

    def test_bracket_past_truncation(self) -> None:
        h = tensor_model(2, 3)
        x = basis_element(h, 2, 1)
        with self.assertRaises(TruncationError):
            bracket(h, x, x)

    def test_derived_subspace(self) -> None:
        self.assertEqual(derived_subspace(tensor_model(2, 3), 2).dim, 1)
        self.assertEqual(derived_subspace(tensor_model(2, 3), 3).dim, 2)
        self.assertEqual(derived_subspace(nsym_model(4), 2).dim, 0)
        self.assertEqual(derived_subspace(nsym_model(4), 3).dim, 1)

    def test_lie_generator_multiplicities(self) -> None:
        self.assertEqual(lie_generators(tensor_model(2, 4)).multiplicities, (0, 2, 0, 0, 0))
        self.assertEqual(lie_generators(nsym_model(4)).multiplicities, (0, 1, 1, 1, 1))
        self.assertEqual(lie_generators(fqsym_model(3)).multiplicities, (0, 1, 1, 2))

    def test_nsym_is_generated_by_primitives(self) -> None:
        self.assertTrue(check_generated_by_primitives(nsym_model(4)).ok)

    def test_filtered_primitives_embed_into_gr(self) -> None:
        self.assertTrue(check_gr_prim_embedding(fqsym_model(4)).ok)


class PrimitiveBracketTests(unittest.TestCase):
    def setUp(self) -> None:
        self.models = (tensor_model(2, 4), nsym_model(5), fqsym_model(4))

    def basis(self, h: Presentation, n: int) -> List[Element]:
        return [Element(n, vector) for vector in primitives(h, n).basis]

    def test_brackets_of_primitives_are_antisymmetric_primitives(self) -> None:
        for h in self.models:
            for p in range(1, h.N):
                for q in range(1, h.N - p + 1):
                    for x in self.basis(h, p):
                        for y in self.basis(h, q):
                            with self.subTest(model=h.name, degrees=(p, q)):
                                xy = bracket(h, x, y)
                                yx = bracket(h, y, x)
                                self.assertTrue(primitives(h, p + q).contains(xy.coords))
                                self.assertTrue(all(v == 0 for v in add_vectors(xy.coords, yx.coords)))

    def test_jacobi_identity_on_primitives(self) -> None:
        for h in self.models:
            for p in range(1, h.N + 1):
                for q in range(1, h.N - p + 1):
                    for r in range(1, h.N - p - q + 1):
                        for x in self.basis(h, p):
                            for y in self.basis(h, q):
                                for z in self.basis(h, r):
                                    total = add_vectors(
                                        add_vectors(
                                            bracket(h, x, bracket(h, y, z)).coords,
                                            bracket(h, y, bracket(h, z, x)).coords,
                                        ),
                                        bracket(h, z, bracket(h, x, y)).coords,
                                    )
                                    with self.subTest(model=h.name, degrees=(p, q, r)):
                                        self.assertTrue(all(v == 0 for v in total))


class LyndonTests(unittest.TestCase):
    def test_is_lyndon(self) -> None:
        a, b = (1, 0), (1, 1)
        self.assertTrue(is_lyndon([a, a, b]))
        self.assertTrue(is_lyndon([a]))
        self.assertFalse(is_lyndon([a, b, a]))
        self.assertFalse(is_lyndon([a, a]))
        self.assertFalse(is_lyndon([]))

    def test_standard_bracketing_uses_the_longest_lyndon_suffix(self) -> None:
        a, b = (1, 0), (1, 1)
        tree = standard_bracketing([a, a, b, b])
        self.assertEqual(tree.render(lambda s: "ab"[s[1]]), "[a,[[a,b],b]]")
        self.assertEqual(tree.degree, 4)

    def test_two_letters_in_degree_three(self) -> None:
        trees = lyndon_basis([0, 2], 3)
        self.assertEqual([tree.render(lambda s: "ab"[s[1]]) for tree in trees], ["[a,[a,b]]", "[[a,b],b]"])

    def test_one_symbol_per_degree(self) -> None:
        counts = [len(lyndon_basis({d: 1 for d in range(1, 7)}, n)) for n in range(1, 7)]
        self.assertEqual(counts, [1, 1, 2, 3, 6, 9])

    def test_sequences_are_indexed_by_degree(self) -> None:
        self.assertEqual(len(lyndon_basis({1: 2}, 3)), 2)
        with self.assertRaises(PreconditionError):
            lyndon_basis([2], 3)
        with self.assertRaises(PreconditionError):
            lyndon_basis({0: 1, 1: 1}, 2)

    def test_lyndon_counts_match_word_counts(self) -> None:
        for u in ((0, 2), (0, 2, 1, 3), (0, 1, 0, 2)):
            counts = (0,) + tuple(len(lyndon_basis(u, n)) for n in range(1, 6))
            with self.subTest(u=u):
                self.assertEqual(euler_product(counts, 5), word_count(u, 5))


class CertificateTests(unittest.TestCase):
    def test_tensor_algebra(self) -> None:
        certificate = certify_prim_free(tensor_model(2, 5))

        self.assertTrue(certificate.verdict)
        self.assertEqual([stage.name for stage in certificate.stages], list(STAGES))
        self.assertEqual([r.lyndon_rank for r in certificate.degrees], [2, 1, 2, 3, 6])
        self.assertTrue(certificate.pbw_ok)

    def test_noncommutative_symmetric_functions(self) -> None:
        certificate = certify_prim_free(nsym_model(6))

        self.assertTrue(certificate.verdict)
        self.assertEqual([r.lie_generators for r in certificate.degrees], [1, 1, 1, 1, 1, 1])
        self.assertEqual([r.dim_prim for r in certificate.degrees], [1, 1, 2, 3, 6, 9])
        self.assertTrue(all(r.spans for r in certificate.degrees))

    def test_noncocommutative_input_skips_pbw(self) -> None:
        certificate = certify_prim_free(fqsym_model(4))

        self.assertTrue(certificate.verdict)
        self.assertIsNone(certificate.pbw_ok)
        self.assertTrue(certificate.gr_cocommutative_ok)
        self.assertTrue(certificate.gr_pbw_ok)
        self.assertEqual([r.lie_generators for r in certificate.degrees][:2], [1, 1])

    def test_square_zero_fails_at_freeness(self) -> None:
        certificate = certify_prim_free(square_zero_model())

        self.assertFalse(certificate.verdict)
        self.assertEqual(len(certificate.stages), 1)
        failure = certificate.first_failure()
        assert failure is not None
        self.assertEqual(failure.name, "free")
        self.assertEqual(failure.witness, {"degree": 2, "words": 1, "dimension": 0})
        self.assertFalse(certificate.to_dict()["verdict"])

    def test_basis_reordering_does_not_change_the_tables(self) -> None:
        h = nsym_model(4)
        moved = permute_basis(h, {3: [1, 3, 0, 2], 4: list(reversed(range(8)))})

        original = certify_prim_free(h).to_dict()
        reordered = certify_prim_free(moved).to_dict()

        for key in ("stages", "degrees", "prim_filtration", "verdict"):
            self.assertEqual(original[key], reordered[key])

    def test_certificate_is_deterministic(self) -> None:
        first = certify_prim_free(nsym_model(4)).to_dict()
        second = certify_prim_free(nsym_model(4)).to_dict()
        self.assertEqual(first, second)
        self.assertEqual(first["tool"]["name"], "freeprim")

    def test_pbw_identity_for_cocommutative_models(self) -> None:
        for h in (tensor_model(2, 4), nsym_model(5)):
            self.assertEqual(euler_product(primitive_dims(h), h.N), h.dims.dims)


class EnvelopingTests(unittest.TestCase):
    def test_abelian_gives_a_polynomial_ring(self) -> None:
        u = enveloping(abelian_lie([0, 1], 4))
        self.assertEqual(u.dims.dims, (1, 1, 1, 1, 1))
        self.assertEqual(u.basis[3], ("g1_0·g1_0·g1_0",))

    def test_free_lie_gives_the_tensor_algebra(self) -> None:
        g = free_lie(2, 4)
        self.assertEqual(g.labels[2] if g.labels else None, ("[a,b]",))
        u = enveloping(g)

        self.assertEqual(u.dims.dims, (1, 2, 4, 8, 16))
        self.assertTrue(check_free(u, extract_generators(u)).ok)
        self.assertEqual(extract_generators(u).multiplicities, (0, 2, 0, 0, 0))

    def test_enveloping_algebras_are_cocommutative_bialgebras(self) -> None:
        for g in (heisenberg_lie(4), free_lie(2, 4), abelian_lie([0, 1, 1], 4)):
            with self.subTest(lie=g.name):
                u = enveloping(g)
                self.assertTrue(check_axioms(u).verdict, check_axioms(u).witnesses)
                self.assertTrue(check_cocommutative(u).ok)

    def test_heisenberg_commutator(self) -> None:
        u = enveloping(heisenberg_lie(3))
        x, y = Element(1, qvector([1, 0])), Element(1, qvector([0, 1]))
        commutator = bracket(u, y, x, check_primitive=False)
        # y x - x y = -z
        self.assertEqual(u.basis[2], ("x·x", "x·y", "y·y", "z"))
        self.assertEqual(commutator.coords, qvector([0, 0, 0, -1]))

    def test_derived_algebra_is_the_square_part(self) -> None:
        for g in (abelian_lie([0, 1, 1], 4), free_lie(2, 4), heisenberg_lie(4)):
            with self.subTest(lie=g.name):
                self.assertTrue(check_derived_is_square_part(g).ok)

    def test_broken_antisymmetry(self) -> None:
        g = LiePresentation("broken", 2, (0, 1, 1), {(1, 1, 0, 0): qvector([1])})
        self.assertEqual(check_lie(g).witness, {"identity": "antisymmetry", "symbols": [[1, 0], [1, 0]]})
        with self.assertRaises(InvalidLieError):
            enveloping(g)

    def test_broken_jacobi(self) -> None:
        structure = {
            (1, 1, 0, 1): qvector([1]),
            (1, 1, 1, 0): qvector([-1]),
            (1, 2, 2, 0): qvector([1]),
            (2, 1, 0, 2): qvector([-1]),
        }
        g = LiePresentation("broken", 3, (0, 3, 1, 1), structure)
        result = check_lie(g)
        self.assertFalse(result.ok)
        assert result.witness is not None
        self.assertEqual(result.witness["identity"], "jacobi")

    def test_nonzero_degree_zero_part(self) -> None:
        with self.assertRaises(InvalidLieError):
            LiePresentation("bad", 1, (1, 1), {})


class GrPrimitiveTests(unittest.TestCase):
    def test_gr_of_fqsym_satisfies_pbw(self) -> None:
        graded = gr_bialgebra(fqsym_model(4))
        # Free Lie algebra on generators counted by (1, 1, 3, 13).
        self.assertEqual(primitive_dims(graded), (0, 1, 1, 4, 17))
        self.assertEqual(euler_product(primitive_dims(graded), 4), graded.dims.dims)
        self.assertEqual(lie_generators(graded).multiplicities, (0, 1, 1, 3, 13))

    def test_filtered_primitives_are_smaller(self) -> None:
        h = fqsym_model(4)
        graded = gr_bialgebra(h)
        for n in range(1, h.N + 1):
            self.assertLessEqual(primitives(h, n).dim, primitives(graded, n).dim)


if __name__ == "__main__":
    unittest.main()
