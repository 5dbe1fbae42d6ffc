"""End-to-end tests for the click command line interface."""

from __future__ import annotations

import json
import logging
import tempfile
import unittest
from pathlib import Path
from typing import Any, Dict, List

from click.testing import CliRunner, Result

from freeprim.cli import cli

FIXTURE = Path(__file__).parent / "data" / "x1_squared_zero.json"


class CliTests(unittest.TestCase):
    def setUp(self) -> None:
        logging.disable(logging.CRITICAL)
        self.root_handlers = list(logging.getLogger().handlers)
        self.tmp_dir = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp_dir.name)
        self.cache_dir = self.root / "cache"
        self.runner = CliRunner()

    def tearDown(self) -> None:
        logging.disable(logging.NOTSET)
        # The group callback calls basicConfig against the runner's captured stderr.
        logging.getLogger().handlers[:] = self.root_handlers
        self.tmp_dir.cleanup()

    def invoke(self, *args: str) -> Result:
        return self.runner.invoke(cli, [*args, "--cache-dir", str(self.cache_dir)])

    def document(self, result: Result) -> Dict[str, Any]:
        self.assertEqual(result.exit_code, 0, result.output)
        data: Dict[str, Any] = json.loads(result.stdout)
        return data

    def test_axioms(self) -> None:
        data = self.document(self.invoke("axioms", "--model", "nsym", "-N", "5"))
        self.assertTrue(data["axioms"]["verdict"])
        self.assertEqual(data["model"], "nsym")
        self.assertEqual(data["N"], 5)
        self.assertEqual(self.invoke("axioms", "--model", "fqsym", "-N", "3").exit_code, 0)

    def test_invalid_file(self) -> None:
        broken = self.root / "broken.json"
        broken.write_text('{"name": "x", "N": 1, "basis": [["1"], ["x"]], "extra": true}', encoding="utf-8")

        result = self.invoke("axioms", "--file", str(broken))

        self.assertEqual(result.exit_code, 2)

    def test_certify_tensor(self) -> None:
        data = self.document(self.invoke("certify", "--model", "tensor", "-N", "5"))
        certificate = data["certificate"]
        self.assertTrue(certificate["verdict"])
        self.assertEqual([r["lyndon_rank"] for r in certificate["degrees"]], [2, 1, 2, 3, 6])
        self.assertEqual(len(data["input_hash"]), 64)

    def test_certify_square_zero_fixture(self) -> None:
        out = self.root / "certificate.json"
        result = self.invoke("certify", "--file", str(FIXTURE), "--out", str(out))

        self.assertEqual(result.exit_code, 1)
        written = json.loads(out.read_text(encoding="utf-8"))
        stages: List[Dict[str, Any]] = written["certificate"]["stages"]
        self.assertEqual([stage["name"] for stage in stages], ["free"])
        self.assertEqual(stages[0]["witness"]["degree"], 2)
        self.assertFalse(written["certificate"]["verdict"])

    def test_tables(self) -> None:
        data = self.document(self.invoke("tables", "--model", "nsym", "-N", "4"))
        rows = data["tables"]
        self.assertEqual([row["dim_h"] for row in rows], [1, 1, 2, 4, 8])
        self.assertEqual([row["dim_prim"] for row in rows], [None, 1, 1, 2, 3])
        self.assertEqual([row["lie_generators"] for row in rows], [None, 1, 1, 1, 1])
        self.assertEqual(rows[2]["layers"], [2, 2, 1, 0])

    def test_primitives_and_filtration(self) -> None:
        data = self.document(self.invoke("primitives", "--model", "fqsym", "-N", "2"))
        self.assertEqual(data["primitives"][1]["basis"], ["F12 - F21"])

        data = self.document(self.invoke("filtration", "--model", "fqsym", "-N", "2"))
        self.assertEqual(data["filtration"]["gr"]["2,2"], 1)

    def test_grcheck_and_generators(self) -> None:
        data = self.document(self.invoke("grcheck", "--model", "fqsym", "-N", "3"))
        self.assertFalse(data["grcheck"]["h_cocommutative"]["ok"])
        self.assertTrue(data["grcheck"]["gr_cocommutative"]["ok"])

        data = self.document(self.invoke("generators", "--model", "fqsym", "-N", "4"))
        self.assertEqual(data["generators"]["multiplicities"], [0, 1, 1, 3, 13])
        self.assertEqual(data["lifted"]["multiplicities"], [0, 1, 1, 3, 13])

    def test_resource_cap(self) -> None:
        result = self.invoke("certify", "--model", "fqsym", "-N", "6")
        self.assertEqual(result.exit_code, 3)

    def test_input_errors(self) -> None:
        binary = self.root / "binary.json"
        binary.write_bytes(b"\xff\xfe")
        cases = [
            ("certify",),
            ("certify", "--model", "nsym"),
            ("certify", "--model", "nsym", "-N", "0"),
            ("certify", "--model", "nsym", "-N", "3", "--file", str(FIXTURE)),
            ("certify", "--file", str(self.root / "absent.json")),
            ("certify", "--model", "bogus", "-N", "3"),
            ("axioms", "--file", str(binary)),
        ]
        for args in cases:
            with self.subTest(args=args):
                self.assertEqual(self.invoke(*args).exit_code, 2)

    def test_export_round_trip(self) -> None:
        exported = self.root / "nsym.json"
        result = self.invoke("export", "--model", "nsym", "-N", "3", "--out", str(exported))
        self.assertEqual(result.exit_code, 0, result.output)

        from_model = self.invoke("certify", "--model", "nsym", "-N", "3", "--no-cache")
        from_file = self.invoke("certify", "--file", str(exported), "--no-cache")

        self.assertEqual(from_model.exit_code, 0)
        self.assertEqual(from_model.stdout, from_file.stdout)

    def test_warm_and_cold_cache_agree(self) -> None:
        cold = self.invoke("certify", "--model", "fqsym", "-N", "4")
        self.assertTrue(any(self.cache_dir.glob("*-4.json")))
        warm = self.invoke("certify", "--model", "fqsym", "-N", "4")

        self.assertEqual(cold.exit_code, 0)
        self.assertEqual(cold.stdout, warm.stdout)

    def test_truncating_a_file(self) -> None:
        exported = self.root / "nsym.json"
        self.invoke("export", "--model", "nsym", "-N", "4", "--out", str(exported))

        data = self.document(self.invoke("axioms", "--file", str(exported), "-N", "2"))

        self.assertEqual(data["N"], 2)

    def test_text_format(self) -> None:
        result = self.invoke("certify", "--model", "nsym", "-N", "3", "--format", "text")
        self.assertEqual(result.exit_code, 0)
        self.assertIn("✅ nsym up to degree 3", result.stdout)
        self.assertIn("lyndon", result.stdout)


if __name__ == "__main__":
    unittest.main()
