"""Unit tests for presentation files and JSON output."""

from __future__ import annotations

import json
import tempfile
import unittest
from pathlib import Path

from freeprim.errors import PresentationInvalidError
from freeprim.formats import (
    export_presentation,
    load_presentation,
    parse_presentation,
    render_json,
    write_json,
)
from freeprim.models import nsym_model, square_zero_model


class PresentationFileTests(unittest.TestCase):
    def setUp(self) -> None:
        self.tmp_dir = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp_dir.name)

    def tearDown(self) -> None:
        self.tmp_dir.cleanup()

    def _document(self) -> dict:
        return square_zero_model().to_dict()

    def test_export_and_load(self) -> None:
        h = nsym_model(3)
        path = self.root / "nested" / "nsym.json"
        export_presentation(h, path)

        loaded = load_presentation(path)

        self.assertEqual(loaded.to_dict(), h.to_dict())
        self.assertEqual(loaded.content_hash(), h.content_hash())

    def test_rationals_are_pairs(self) -> None:
        document = self._document()
        document["coproduct"][1]["terms"] = [[2, 4, 0, 0, 0], [1, 1, 1, 0, 0]]
        h = parse_presentation(json.dumps(document))
        self.assertEqual(h.to_dict()["coproduct"][1]["terms"][0], [1, 2, 0, 0, 0])

    def test_zero_denominator(self) -> None:
        document = self._document()
        document["product"][0]["result"] = [[1, 0, 0]]
        with self.assertRaises(PresentationInvalidError):
            parse_presentation(json.dumps(document))

    def test_unknown_keys(self) -> None:
        document = self._document()
        document["comment"] = "not allowed"
        with self.assertRaises(PresentationInvalidError):
            parse_presentation(json.dumps(document))

    def test_index_out_of_range(self) -> None:
        document = self._document()
        document["product"][0]["result"] = [[1, 1, 4]]
        with self.assertRaises(PresentationInvalidError):
            parse_presentation(json.dumps(document))

    def test_disconnected_basis(self) -> None:
        document = self._document()
        document["basis"][0] = ["1", "u"]
        with self.assertRaises(PresentationInvalidError):
            parse_presentation(json.dumps(document))

    def test_not_json(self) -> None:
        with self.assertRaises(PresentationInvalidError):
            parse_presentation("{ not json")

    def test_missing_file(self) -> None:
        with self.assertRaises(PresentationInvalidError):
            load_presentation(self.root / "absent.json")

    def test_file_that_is_not_utf8(self) -> None:
        path = self.root / "binary.json"
        path.write_bytes(b"\xff\xfe")
        with self.assertRaises(PresentationInvalidError):
            load_presentation(path)


class JsonOutputTests(unittest.TestCase):
    def setUp(self) -> None:
        self.tmp_dir = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp_dir.name)

    def tearDown(self) -> None:
        self.tmp_dir.cleanup()

    def test_render_is_canonical(self) -> None:
        text = render_json({"b": 1, "a": ["é"]})
        self.assertEqual(text, '{\n  "a": [\n    "é"\n  ],\n  "b": 1\n}\n')

    def test_write_replaces_atomically(self) -> None:
        path = self.root / "out.json"
        write_json(path, {"value": 1})
        write_json(path, {"value": 2})

        self.assertEqual(json.loads(path.read_text(encoding="utf-8")), {"value": 2})
        self.assertEqual([p.name for p in self.root.iterdir()], ["out.json"])


if __name__ == "__main__":
    unittest.main()
