#!/usr/bin/env python3
"""
Development script for type checking and testing.
"""

import argparse
import subprocess
import sys
from pathlib import Path


def run_mypy() -> bool:
    """Run mypy type checking."""
    print("🔍 Running mypy type checking...")
    result = subprocess.run([
        sys.executable, "-m", "mypy",
        "freeprim/", "main.py"
    ], cwd=Path(__file__).parent)

    if result.returncode == 0:
        print("✅ Type checking passed!")
        return True
    else:
        print("❌ Type checking failed!")
        return False


def run_smoke_test() -> bool:
    """Certify the two-letter tensor model up to degree 4."""
    print("🧪 Running certification smoke test...")

    try:
        from freeprim.lie import certify_prim_free
        from freeprim.models import tensor_model

        certificate = certify_prim_free(tensor_model(2, 4))
        ranks = [record.lyndon_rank for record in certificate.degrees]

        if certificate.verdict and ranks == [2, 1, 2, 3]:
            print(f"✅ tensor(2) certified, Lyndon ranks {ranks}")
            return True
        else:
            print(f"❌ Smoke test failed: verdict {certificate.verdict}, ranks {ranks}")
            return False

    except Exception as e:
        print(f"❌ Smoke test failed with error: {e}")
        return False


def run_unit_tests(pattern: str) -> bool:
    """Execute the unittest suite."""
    print("📦 Running unit tests...")
    result = subprocess.run(
        [sys.executable, "-m", "unittest", "discover", "-s", "tests", "-p", pattern],
        cwd=Path(__file__).parent,
    )
    if result.returncode == 0:
        print("✅ Unit tests passed!")
        return True
    print("❌ Unit tests failed!")
    return False


def main() -> None:
    """Run all development checks."""
    parser = argparse.ArgumentParser(description="Run development checks for freeprim")
    parser.add_argument("--pattern", default="test_*.py",
                        help="Only run test modules matching this pattern")
    parser.add_argument("--skip-mypy", action="store_true",
                        help="Skip the type checker")

    args = parser.parse_args()

    print("🚀 Running development checks for freeprim\n")

    checks_passed = 0
    total_checks = 2 if args.skip_mypy else 3

    if not args.skip_mypy:
        if run_mypy():
            checks_passed += 1
        print()

    if run_smoke_test():
        checks_passed += 1

    print()

    if run_unit_tests(args.pattern):
        checks_passed += 1

    print(f"\n📊 Results: {checks_passed}/{total_checks} core checks passed")

    if checks_passed == total_checks:
        print("🎉 All checks passed! Ready for development.")
        sys.exit(0)
    else:
        print("⚠️  Some checks failed. Please fix issues before continuing.")
        sys.exit(1)


if __name__ == "__main__":
    main()
