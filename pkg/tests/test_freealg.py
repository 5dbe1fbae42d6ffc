"""Unit tests for generator extraction, freeness checks and Hilbert series helpers."""

from __future__ import annotations

import unittest

from freeprim.bialg import counital_filtration, gr_bialgebra
from freeprim.errors import DegreeDomainError, PreconditionError
from freeprim.exactq import qvector
from freeprim.freealg import (
    check_free,
    decomposables,
    euler_product,
    extract_generators,
    hilbert_data,
    invert_hilbert,
    lift_generators_from_gr,
    word_count,
    word_evaluations,
)
from freeprim.models import fqsym_model, nsym_model, square_zero_model, tensor_model


class DecomposableTests(unittest.TestCase):
    def test_examples(self) -> None:
        self.assertEqual(decomposables(nsym_model(3), 2).basis, (qvector([0, 1]),))
        self.assertEqual(decomposables(fqsym_model(3), 2).basis, (qvector([1, 1]),))
        self.assertEqual(decomposables(tensor_model(2, 3), 1).dim, 0)

    def test_decomposables_are_the_second_layer(self) -> None:
        for h in (nsym_model(4), fqsym_model(4)):
            filtration = counital_filtration(h)
            for n in range(1, h.N + 1):
                self.assertEqual(decomposables(h, n), filtration.layer(n, 2))

    def test_degree_range(self) -> None:
        with self.assertRaises(DegreeDomainError):
            decomposables(nsym_model(2), 0)
        with self.assertRaises(DegreeDomainError):
            decomposables(nsym_model(2), 3)


class GeneratorTests(unittest.TestCase):
    def test_multiplicities(self) -> None:
        self.assertEqual(extract_generators(tensor_model(2, 4)).multiplicities, (0, 2, 0, 0, 0))
        self.assertEqual(extract_generators(nsym_model(5)).multiplicities, (0, 1, 1, 1, 1, 1))
        self.assertEqual(extract_generators(fqsym_model(5)).multiplicities, (0, 1, 1, 3, 13, 71))

    def test_models_are_free(self) -> None:
        for h in (tensor_model(2, 4), nsym_model(5), fqsym_model(4)):
            with self.subTest(model=h.name):
                self.assertTrue(check_free(h, extract_generators(h)).ok)

    def test_square_zero_is_not_free(self) -> None:
        h = square_zero_model()
        result = check_free(h, extract_generators(h))
        self.assertFalse(result.ok)
        self.assertEqual(result.witness, {"degree": 2, "words": 1, "dimension": 0})

    def test_word_evaluations_in_lexicographic_order(self) -> None:
        h = nsym_model(3)
        values = word_evaluations(h, extract_generators(h), 3)
        # S1 S1 S1, S1 S2, S2 S1, S3
        self.assertEqual(values, [
            qvector([0, 0, 0, 1]),
            qvector([0, 1, 0, 0]),
            qvector([0, 0, 1, 0]),
            qvector([1, 0, 0, 0]),
        ])

    def test_to_dict(self) -> None:
        data = extract_generators(nsym_model(2)).to_dict()
        self.assertEqual(data["multiplicities"], [0, 1, 1])
        self.assertEqual(data["generators"][2], [[[1, 1], [0, 1]]])
        self.assertNotIn("layers", data)


class LiftTests(unittest.TestCase):
    def test_tensor_letters_lift_to_themselves(self) -> None:
        lifted = lift_generators_from_gr(tensor_model(2, 3))
        self.assertEqual(lifted.generators[1], (qvector([1, 0]), qvector([0, 1])))
        self.assertEqual(lifted.layers, ((), (1, 1), (), ()))

    def test_fqsym_lift_matches_the_hilbert_series(self) -> None:
        h = fqsym_model(4)
        lifted = lift_generators_from_gr(h)
        self.assertEqual(lifted.multiplicities, (0, 1, 1, 3, 13))
        self.assertEqual(lifted.multiplicities, extract_generators(h).multiplicities)

    def test_nsym_lifts_are_indecomposable(self) -> None:
        h = nsym_model(4)
        lifted = lift_generators_from_gr(h)
        for n in range(1, h.N + 1):
            for vector in lifted.generators[n]:
                self.assertFalse(decomposables(h, n).contains(vector))
        assert lifted.layers is not None
        self.assertEqual(lifted.layers[1:], ((1,), (1,), (1,), (1,)))

    def test_gr_is_free_with_the_same_counts(self) -> None:
        h = fqsym_model(4)
        graded = gr_bialgebra(h)
        generators = extract_generators(graded)
        self.assertTrue(check_free(graded, generators).ok)
        self.assertEqual(generators.multiplicities, extract_generators(h).multiplicities)


class SeriesTests(unittest.TestCase):
    def test_invert_hilbert(self) -> None:
        self.assertEqual(invert_hilbert([1, 2, 4, 8]), (0, 2, 0, 0))
        self.assertEqual(invert_hilbert([1, 1, 2, 6, 24, 120]), (0, 1, 1, 3, 13, 71))
        self.assertEqual(invert_hilbert([1, 1, 2, 4, 8]), (0, 1, 1, 1, 1))

    def test_invert_hilbert_needs_a_connected_series(self) -> None:
        with self.assertRaises(PreconditionError):
            invert_hilbert([2, 1])
        with self.assertRaises(PreconditionError):
            invert_hilbert([])

    def test_word_count_inverts_invert_hilbert(self) -> None:
        a = (1, 1, 2, 6, 24, 120)
        self.assertEqual(word_count(invert_hilbert(a), 5), a)

    def test_hilbert_data(self) -> None:
        data = hilbert_data(nsym_model(3))
        self.assertEqual(data.to_dict(), {"a": [1, 1, 2, 4], "v": [0, 1, 1, 1]})

    def test_euler_product(self) -> None:
        self.assertEqual(euler_product((0, 1), 4), (1, 1, 1, 1, 1))
        self.assertEqual(euler_product((0, 2, 1, 2, 3), 4), (1, 2, 4, 8, 16))
        self.assertEqual(euler_product((0, 1, 1, 2, 3), 4), (1, 1, 2, 4, 8))


if __name__ == "__main__":
    unittest.main()
