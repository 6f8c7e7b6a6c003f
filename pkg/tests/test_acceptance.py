"""The thirteen acceptance criteria, at their stated tolerances.

Run under pytest (a summary line per criterion is printed at the end) or as
a script: ``python3 tests/test_acceptance.py``.
"""

import math
import sys

import numpy as np

from harmclose import (
    CoeffSeq,
    ConvexNullSeq,
    GridSpec,
    Verdict,
    check_binomial_convexity,
    check_curvature_bound,
    check_fejer_positivity,
    check_linear_sum,
    check_rotated_difference,
    check_square_sum,
    check_weighted_difference,
    closed_form,
    concavity_indicator,
    construct_cumulative,
    construct_primitive,
    couple_g_from_h,
    curvature_quantity,
    cusp_detect,
    from_family,
    parabola_profile,
    parabola_region_check,
    trace_circle_image,
    validate_convex_null,
)
from harmclose.cli import main as cli_main
from harmclose.criteria import binomial_convexity_terms, generalized_binomial
from harmclose.series import for_sampling, seq_for_sampling

TOL = 1e-12
RADII = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99)


def naive_binomial_terms(a, alpha, beta, upto):
    """Triple loop straight from the definition, no convolutions."""
    def coef(j):
        return a[j] if j < len(a) else 0j

    plus, minus = [], []
    for n in range(upto + 1):
        tp = tm = 0j
        for k in range(1, n + 1):
            sp = sm = 0j
            for j in range(1, k + 1):
                c = (-1) ** (k - j) * generalized_binomial(alpha, k - j) * coef(j)
                sp += j * (j + 1) * c
                sm += j * (j - 1) * c
            tp += sp * generalized_binomial(beta, n - k)
            tm += sm * generalized_binomial(beta, n - k)
        plus.append(tp)
        minus.append(tm)
    return np.array(plus), np.array(minus)


def random_h(rng, length):
    a = np.zeros(length + 1, dtype=complex)
    a[1] = 1.0
    size = length - 1
    radius = rng.uniform(0, 1, size)
    a[2:] = radius * np.exp(2j * np.pi * rng.uniform(0, 1, size))
    return CoeffSeq(a)


def test_criterion_01_hypocycloid_linear_sum():
    """hypocycloid: linear coefficient sum is exactly 1, verdict Pass"""
    rep = check_linear_sum(from_family("hypocycloid", 8))
    assert abs(rep.partial_sum - 1.0) <= TOL
    assert rep.verdict is Verdict.PASS


def test_criterion_02_log_family_rotated_sum():
    """log family, m in {0.25, 0.5, 1}, phi = 0: rotated-difference total 1, Pass"""
    for m in (0.25, 0.5, 1.0):
        rep = check_rotated_difference(from_family("log", 64, m=m), 0.0)
        assert abs(rep.total - 1.0) <= TOL, m
        assert rep.verdict is Verdict.PASS, m


def test_criterion_03_dilog_weighted_telescoping():
    """dilog family: weighted-difference partial 2 - 2/N, total 2 with tail, Pass"""
    for N in (10, 50, 100):
        rep = check_weighted_difference(from_family("dilog", N).h)
        assert abs(rep.partial_sum - (2 - 2 / N)) <= TOL, N
        assert abs(rep.total - 2.0) <= TOL, N
        assert rep.verdict is Verdict.PASS, N


def test_criterion_04_binomial_specializations():
    """binomial double sum reduces to 2x square sum (0,0) and the weighted sum (1,0)"""
    rng = np.random.default_rng(20240601)
    # the convolution implementation against the definition, once
    probe = random_h(rng, 9).coeffs
    for alpha, beta in ((0.0, 0.0), (1.0, 0.0), (0.5, 1.5), (2.0, 3.0), (-0.7, 0.3)):
        fast = binomial_convexity_terms(probe, alpha, beta, 14)
        slow = naive_binomial_terms(probe, alpha, beta, 14)
        for f, s in zip(fast, slow):
            np.testing.assert_allclose(f, s, rtol=1e-12, atol=1e-9)
    for _ in range(100):
        h = random_h(rng, int(rng.integers(1, 13)))
        zero_zero = check_binomial_convexity(h, 0.0, 0.0)
        one_zero = check_binomial_convexity(h, 1.0, 0.0)
        assert abs(zero_zero.total - 2 * check_square_sum(h).total) <= TOL
        assert abs(one_zero.total - check_weighted_difference(h).total) <= TOL


def test_criterion_05_parabolic_region():
    """parabolic image lies right of u = -v^2 - 1/4; profile bound below 1"""
    fmap = for_sampling(from_family("parabolic", 64), max(RADII))
    for r in RADII:
        slack, holds = parabola_region_check(trace_circle_image(fmap, r, 720))
        assert holds and slack > 0, r
    for r in (np.arange(100) + 0.5) / 100:
        for t in np.linspace(-1, 1, 100):
            phi_val, psi_val = parabola_profile(r, t)
            assert phi_val <= psi_val + 1e-15
            assert 1 - psi_val > 0


def test_criterion_06_curvature_bound():
    """parabolic h: Re(1 + z h''/h') > -1/2 sampled, matches (1+2z)/(1-z); z - z^2/2 fails"""
    h = from_family("parabolic", 64).h
    rep = check_curvature_bound(h, GridSpec(RADII, 720))
    assert rep.holds_on_grid and rep.min_value > -0.5
    rng = np.random.default_rng(7)
    z = np.sqrt(rng.uniform(0, 0.99**2, 100)) * np.exp(2j * np.pi * rng.uniform(0, 1, 100))
    values = curvature_quantity(seq_for_sampling(h, 0.99), z)
    np.testing.assert_allclose(values, ((1 + 2 * z) / (1 - z)).real, rtol=0, atol=1e-9)
    bad = check_curvature_bound(CoeffSeq.from_powers([1, -0.5]), GridSpec(RADII, 720))
    assert bad.verdict.value == "SampledFail"


def test_criterion_07_coupling_identity():
    """coupling g' = z h' applied to the parabolic h gives b_n = (n-1)/2 exactly"""
    g = couple_g_from_h(from_family("parabolic", 64).h, 2)
    for n in range(1, 65):
        assert g[n] == (n - 1) / 2, n


def test_criterion_08_constructors():
    """primitive (harmonic, b=1/4) and cumulative (geometric, b=1/4) coefficients"""
    f = construct_primitive(ConvexNullSeq.harmonic(), 0.25, 64)
    n = np.arange(2, 65)
    np.testing.assert_allclose(f.h.coeffs[2:], 2 / n**2, rtol=0, atol=TOL)
    np.testing.assert_allclose(f.g.coeffs[2:], f.h.coeffs[2:] / 4, rtol=0, atol=TOL)
    f = construct_cumulative(ConvexNullSeq.geometric(), 0.25, 64)
    np.testing.assert_allclose(f.h.coeffs[2:], (3 - 2.0 ** (2 - n)) / n, rtol=0, atol=TOL)
    np.testing.assert_allclose(f.g.coeffs[2:], f.h.coeffs[2:] / 4, rtol=0, atol=TOL)


def test_criterion_09_convex_null_validation():
    """harmonic and geometric sequences validate with the expected differences"""
    n = np.arange(0, 51)
    rep = validate_convex_null(ConvexNullSeq.harmonic())
    assert rep.valid
    np.testing.assert_allclose(rep.differences[:51], 2 / ((n + 1) * (n + 2)), rtol=0, atol=TOL)
    rep = validate_convex_null(ConvexNullSeq.geometric())
    assert rep.valid
    np.testing.assert_allclose(rep.differences[:51], 2.0 ** (-n), rtol=0, atol=TOL)
    rep = validate_convex_null(ConvexNullSeq.from_list([2, 1, 0.9, 0]))
    assert not rep.valid and rep.first_violation[0] == 1


def test_criterion_10_fejer_positivity():
    """Fejer sum of both sequences has positive real part on r <= 0.99, N = 64"""
    for seq in (ConvexNullSeq.harmonic(), ConvexNullSeq.geometric()):
        rep = check_fejer_positivity(seq, GridSpec(RADII, 720), N=64)
        assert rep.holds_on_grid and rep.min_value > 0


def test_criterion_11_hypocycloid_cusps():
    """hypocycloid at r = 1: exactly 6 cusps, each within 0.01 of k pi/3"""
    cusps = cusp_detect(trace_circle_image(from_family("hypocycloid", 8), 1.0, 720))
    assert len(cusps) == 6
    for t in cusps:
        k = round(t / (math.pi / 3))
        assert abs(t - k * math.pi / 3) <= 0.01


def test_criterion_12_boundary_concavity():
    """parabolic map at r = 1 - 1e-6: max Im(w''/w') <= 1e-6 off the pole at t = 0"""
    fmap = from_family("parabolic", 64)
    cf = closed_form(fmap)
    value, _ = concavity_indicator(fmap, 1 - 1e-6, 720, exact=True, exclude=cf.singularities)
    assert value <= 1e-6


def test_criterion_13_reproduce_twice(tmp_path):
    """reproduce-paper writes 6 SVGs and report.json, byte-identical on a rerun"""
    first, second = tmp_path / "a", tmp_path / "b"
    assert cli_main(["reproduce-paper", "--out", str(first)]) == 0
    assert cli_main(["reproduce-paper", "--out", str(second)]) == 0
    names = sorted(p.name for p in first.iterdir())
    assert len([n for n in names if n.endswith(".svg")]) == 6
    assert names.count("report.json") == 1 and len(names) == 7
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    failures = 0
    tests = [(k, v) for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for name, fn in tests:
        number = int(name.split("_")[2])
        label = fn.__doc__.strip().splitlines()[0]
        try:
            if "tmp_path" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
                with tempfile.TemporaryDirectory() as d:
                    fn(Path(d))
            else:
                fn()
            status = "PASS"
        except AssertionError as exc:
            status, failures = f"FAIL ({exc})", failures + 1
        print(f"criterion {number:>2}: {status}  {label}")
    sys.exit(1 if failures else 0)
