#!/usr/bin/env python3
"""
Smoke test for the gm components

Runs each layer once on the cusp x^2 + y^3 without going through the
command line. Usable both under pytest and as a standalone script.
"""

import sys
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

CUSP = "x^2+y^3"


def test_config():
    """Test configuration loading"""
    print("🔧 Testing Configuration...")
    from config import Config
    assert Config.validate()
    print(f"   Default precision: {Config.DEFAULT_PREC}")
    print(f"   Stability margin: {Config.STABILITY_MARGIN}")


def test_parser():
    """Test polynomial parsing"""
    print("\n🔤 Testing Parser...")
    from poly_parser import parse_polynomial
    f = parse_polynomial(CUSP)
    assert f.variables == ("x", "y")
    print(f"   Parsed: {f}")


def test_milnor_algebra():
    """Test standard basis and Milnor number"""
    print("\n🧮 Testing Milnor Algebra...")
    from local_basis import milnor_number
    from poly_parser import parse_polynomial
    report = milnor_number(parse_polynomial(CUSP))
    assert report.mu == 2
    print(f"   mu = {report.mu}, basis = {report.basis_strings()}")


def test_brieskorn_lattice():
    """Test the t-matrix on the Brieskorn lattice"""
    print("\n📐 Testing Brieskorn Lattice...")
    from brieskorn import det_valuation, singularity_context, t_matrix
    from poly_parser import parse_polynomial
    f = parse_polynomial(CUSP)
    context = singularity_context(f)
    tmatrix = t_matrix(f, context, 6)
    assert det_valuation(tmatrix) == 2
    print(f"   T(s) precision: {tmatrix.precision}")


def test_connection():
    """Test saturation of the Gauss-Manin connection"""
    print("\n🔗 Testing Connection...")
    from brieskorn import gm_connection_qh, singularity_context
    from connection import Verdict, saturate
    from poly_parser import parse_polynomial
    f = parse_polynomial(CUSP)
    result = saturate(gm_connection_qh(f, singularity_context(f), 6))
    assert result.verdict is Verdict.REGULAR
    print(f"   Verdict: {result.verdict.value}")


def test_service():
    """Test the full pipeline"""
    print("\n🚀 Testing Service...")
    from gm_service import GaussManinService, RunConfig
    report = GaussManinService(RunConfig(prec_s=6, prec_t=6)).run("all", CUSP)
    assert report["verdict"] == "regular"
    print(f"   Rotations: {report['rotations']}")


def main():
    """Run all tests"""
    print("🚀 gm - Component Tests\n")
    print("=" * 50)

    tests = [
        test_config,
        test_parser,
        test_milnor_algebra,
        test_brieskorn_lattice,
        test_connection,
        test_service,
    ]

    passed = 0
    total = len(tests)

    for test in tests:
        try:
            test()
            passed += 1
            print("✅ OK")
        except Exception as e:
            print(f"❌ Test failed with exception: {e}")

    print("\n" + "=" * 50)
    print(f"📊 Test Results: {passed}/{total} tests passed")

    if passed == total:
        print("🎉 All tests passed!")
        return True
    else:
        print("⚠️ Some tests failed. Please check the errors above.")
        return False


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
