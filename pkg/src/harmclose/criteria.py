"""Coefficient conditions for harmonic close-to-convexity, and sampled disk checks.

Every coefficient checker returns a :class:`ConditionReport`.  The partial
sum runs over the stored coefficients (n <= N).  The remainder comes from the
family tail descriptor, or, for exact polynomials, from the finitely many
terms past N that still involve stored coefficients.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np

from .errors import ParameterError, SingularDerivativeError
from .geometry import GridSpec, local_univalence_margin
from .series import CoeffSeq, HarmonicMap, derivative, horner, seq_for_sampling

TOL = 1e-12
PHI_STEPS = 360
GOLDEN_TOL = 1e-10


class Verdict(str, Enum):
    PASS = "Pass"
    PASS_TRUNCATED = "PassTruncated"
    FAIL = "Fail"


class SampledVerdict(str, Enum):
    PASS = "SampledPass"
    FAIL = "SampledFail"


@dataclass(frozen=True)
class ConditionReport:
    condition_id: str
    partial_sum: float
    tail_bound: Optional[float]
    threshold: float
    margin: float
    verdict: Verdict
    params: dict[str, Any] = field(default_factory=dict)
    horizon: int = 0

    @property
    def total(self) -> float:
        return self.partial_sum + (self.tail_bound or 0.0)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_dict(self) -> dict:
        return {
            "kind": "coefficient",
            "condition_id": self.condition_id,
            "partial_sum": self.partial_sum,
            "tail_bound": self.tail_bound,
            "threshold": self.threshold,
            "margin": self.margin,
            "verdict": self.verdict.value,
            "params": dict(self.params),
            "horizon": self.horizon,
        }


def make_report(condition_id, partial, tail, threshold, params=None, horizon=0) -> ConditionReport:
    """Apply the verdict rule.

    With a known remainder the total decides Pass/Fail; without one only the
    partial sum is known, so the best outcome is PassTruncated.
    """
    partial = float(partial)
    if tail is None:
        verdict = Verdict.PASS_TRUNCATED if partial <= threshold + TOL else Verdict.FAIL
        margin = threshold - partial
    else:
        tail = float(tail)
        total = partial + tail
        verdict = Verdict.PASS if total <= threshold + TOL else Verdict.FAIL
        margin = threshold - total
    return ConditionReport(condition_id, partial, tail, float(threshold), margin, verdict,
                           dict(params or {}), horizon)


def _remainder(seq: CoeffSeq, quantity: str, polynomial_tail: float, phi: float = 0.0):
    if seq.tail is None:
        return polynomial_tail
    return seq.tail.tail(quantity, seq.order, phi)


def _sum_tails(*tails):
    if any(t is None for t in tails):
        return None
    return float(sum(tails))


def _require_normalized(h: CoeffSeq):
    if h[1] != 1:
        raise ParameterError(f"analytic part must satisfy a_1 = 1, got {h[1]}")


def check_linear_sum(fmap: HarmonicMap) -> ConditionReport:
    """sum_{n>=2} n|a_n| + sum_{n>=1} n|b_n| <= 1."""
    a, b = fmap.h.coeffs, fmap.g.coeffs
    n = np.arange(a.size)
    partial = float(np.sum(n[2:] * np.abs(a[2:])) + np.sum(n[1:] * np.abs(b[1:])))
    tail = _sum_tails(_remainder(fmap.h, "linear", 0.0), _remainder(fmap.g, "linear", 0.0))
    return make_report("linear_sum", partial, tail, 1.0, horizon=fmap.order)


def _rotated_terms(c: np.ndarray, rot: complex) -> np.ndarray:
    """|n c_n - rot (n-1) c_{n-1}| for n = 1..N, with c_0 = 0."""
    n = np.arange(c.size)
    prev = np.concatenate(([0j], c[:-1]))
    return np.abs(n * c - rot * (n - 1) * prev)[1:]


def check_rotated_difference(fmap: HarmonicMap, phi: float) -> ConditionReport:
    """sum_{n>=2} |n a_n - e^{i phi}(n-1)a_{n-1}| + sum_{n>=1} |n b_n - e^{i phi}(n-1)b_{n-1}| <= 1.

    phi must already lie in [0, 2 pi); it is not reduced.
    """
    phi = float(phi)
    if not 0 <= phi < 2 * math.pi:
        raise ParameterError(f"phi must satisfy 0 <= phi < 2 pi, got {phi}")
    rot = cmath.exp(1j * phi)
    a, b = fmap.h.coeffs, fmap.g.coeffs
    N = fmap.order
    partial = float(np.sum(_rotated_terms(a, rot)[1:]) + np.sum(_rotated_terms(b, rot)))
    # past N only the cross term |e^{i phi} N c_N| survives for a polynomial
    tail = _sum_tails(_remainder(fmap.h, "rotated", N * abs(a[N]), phi),
                      _remainder(fmap.g, "rotated", N * abs(b[N]), phi))
    return make_report("rotated_difference", partial, tail, 1.0, {"phi": phi}, N)


def _golden_min(f, lo, hi, tol):
    inv = (math.sqrt(5) - 1) / 2
    c, d = hi - inv * (hi - lo), lo + inv * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - inv * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv * (hi - lo)
            fd = f(d)
    x = (lo + hi) / 2
    return x, f(x)


def _wrap(phi: float) -> float:
    phi = math.fmod(phi, 2 * math.pi)
    if phi < 0:
        phi += 2 * math.pi
    return 0.0 if phi >= 2 * math.pi else phi


def best_phi(fmap: HarmonicMap, steps: int = PHI_STEPS) -> tuple[float, ConditionReport]:
    """Search phi in [0, 2 pi) minimizing the rotated-difference total.

    A uniform grid of ``steps`` angles is refined around its best cell by
    golden-section search; the refined angle replaces the grid angle only if
    it is strictly better.
    """
    if steps < 8:
        raise ParameterError("best_phi needs steps >= 8")
    step = 2 * math.pi / steps
    cache: dict[float, ConditionReport] = {}

    def report(phi):
        phi = _wrap(phi)
        if phi not in cache:
            cache[phi] = check_rotated_difference(fmap, phi)
        return cache[phi]

    def objective(phi):
        rep = report(phi)
        return rep.total if rep.tail_bound is not None else rep.partial_sum

    grid = [k * step for k in range(steps)]
    values = [objective(p) for p in grid]
    k = int(np.argmin(values))
    best, best_val = grid[k], values[k]
    if math.isfinite(best_val):
        x, fx = _golden_min(objective, best - step, best + step, GOLDEN_TOL)
        if fx < best_val:
            best = _wrap(x)
    return best, report(best)


def generalized_binomial(alpha: float, m: int) -> float:
    """alpha (alpha-1) ... (alpha-m+1) / m! for real alpha."""
    if m < 0:
        raise ParameterError("m must be >= 0")
    value = 1.0
    for k in range(1, m + 1):
        value = value * (alpha - k + 1) / k
    return value


def _binomials(alpha: float, count: int) -> np.ndarray:
    out = np.empty(count)
    out[0] = 1.0
    for k in range(1, count):
        out[k] = out[k - 1] * (alpha - k + 1) / k
    return out


def _is_natural(x: float) -> bool:
    return float(x).is_integer() and x >= 0


def binomial_convexity_terms(a: np.ndarray, alpha: float, beta: float, upto: int):
    """Outer terms T_n (weights j(j+1) and j(j-1)) for n = 0..upto.

    S_k = sum_{j<=k} (-1)^(k-j) w(j) C(alpha, k-j) a_j and
    T_n = sum_{k<=n} S_k C(beta, n-k); coefficients past len(a) are zero.
    """
    coeffs = np.zeros(upto + 1, dtype=complex)
    m = min(upto, a.size - 1)
    coeffs[: m + 1] = a[: m + 1]
    j = np.arange(upto + 1)
    signs = np.where(j % 2 == 0, 1.0, -1.0)
    inner = signs * _binomials(alpha, upto + 1)
    outer = _binomials(beta, upto + 1)
    result = []
    for weight in (j * (j + 1), j * (j - 1)):
        s = np.convolve(weight * coeffs, inner)[: upto + 1]
        result.append(np.convolve(s, outer)[: upto + 1])
    return result[0], result[1]


def check_binomial_convexity(h: CoeffSeq, alpha: float, beta: float) -> ConditionReport:
    """Double binomial sum over the analytic coefficients, threshold 2.

    For natural alpha and beta a polynomial has only alpha + beta nonzero
    terms past N, so the remainder is exact.  Otherwise the report is limited
    to the horizon N.
    """
    _require_normalized(h)
    alpha, beta = float(alpha), float(beta)
    N = h.order
    natural = _is_natural(alpha) and _is_natural(beta)
    upto = N + int(alpha) + int(beta) if natural and h.tail is None else N
    plus, minus = binomial_convexity_terms(h.coeffs, alpha, beta, upto)
    terms = np.abs(plus) + np.abs(minus)
    partial = float(np.sum(terms[2 : N + 1]))
    if h.tail is None:
        tail = float(np.sum(terms[N + 1 :])) if natural else None
    elif (alpha, beta) == (0.0, 0.0):
        sq = h.tail.tail("square", N)
        tail = None if sq is None else 2 * sq
    elif (alpha, beta) == (1.0, 0.0):
        tail = h.tail.tail("weighted", N)
    else:
        tail = None
    return make_report("binomial_convexity", partial, tail, 2.0, {"alpha": alpha, "beta": beta}, N)


def check_weighted_difference(h: CoeffSeq) -> ConditionReport:
    """sum_{n>=2} n|(n+1)a_n - (n-1)a_{n-1}| + (n-1)|n a_n - (n-2)a_{n-1}| <= 2."""
    _require_normalized(h)
    a = h.coeffs
    N = h.order
    n = np.arange(2, N + 1)
    cur, prev = a[2:], a[1:-1]
    terms = n * np.abs((n + 1) * cur - (n - 1) * prev) + (n - 1) * np.abs(n * cur - (n - 2) * prev)
    # a polynomial contributes one more term, at n = N + 1
    tail = _remainder(h, "weighted", 2.0 * N * N * abs(a[N]))
    return make_report("weighted_difference", float(np.sum(terms)), tail, 2.0, horizon=N)


def check_square_sum(h: CoeffSeq) -> ConditionReport:
    """sum_{n>=2} n^2 |a_n| <= 1."""
    _require_normalized(h)
    a = h.coeffs
    n = np.arange(a.size)
    partial = float(np.sum(n[2:] ** 2 * np.abs(a[2:])))
    return make_report("square_sum", partial, _remainder(h, "square", 0.0), 1.0, horizon=h.order)


@dataclass(frozen=True)
class SampledPositivityReport:
    """Minimum of a real quantity over a grid against a claimed lower bound.

    Sampling is evidence for the open-disk claim, not a proof of it.
    """

    condition_id: str
    min_value: float
    argmin: tuple[float, float]
    grid: GridSpec
    claim_threshold: float
    holds_on_grid: bool
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def verdict(self) -> SampledVerdict:
        return SampledVerdict.PASS if self.holds_on_grid else SampledVerdict.FAIL

    @property
    def passed(self) -> bool:
        return self.holds_on_grid

    def to_dict(self) -> dict:
        return {
            "kind": "sampled",
            "condition_id": self.condition_id,
            "min_value": self.min_value,
            "argmin": {"r": self.argmin[0], "theta": self.argmin[1]},
            "claim_threshold": self.claim_threshold,
            "holds_on_grid": self.holds_on_grid,
            "verdict": self.verdict.value,
            "grid": self.grid.to_dict(),
            "params": dict(self.params),
        }


def _sampled(condition_id, values, grid, threshold, params=None):
    k = int(np.argmin(values))
    m = float(values.flat[k])
    return SampledPositivityReport(condition_id, m, grid.location(k), grid, threshold,
                                   m > threshold, dict(params or {}))


def check_curvature_bound(h: CoeffSeq, grid: GridSpec = GridSpec(), extend: bool = True,
                          min_derivative: float = 1e-9) -> SampledPositivityReport:
    """Sample Re(1 + z h''(z)/h'(z)) against the lower bound -1/2.

    With ``extend`` a family part is first lengthened until its truncation
    error on the grid is below 1e-12.
    """
    if extend:
        h = seq_for_sampling(h, grid.r_max)
    z = grid.points()
    try:
        values = curvature_quantity(h, z, min_derivative)
    except SingularDerivativeError as exc:
        where = [grid.location(k) for k in exc.points]
        raise SingularDerivativeError(f"|h'(z)| < {min_derivative} at {len(where)} grid points", where) from None
    return _sampled("curvature_bound", values, grid, -0.5, {"order": h.order})


def curvature_quantity(h: CoeffSeq, z, min_derivative: float = 1e-9):
    """Re(1 + z h''(z)/h'(z)) from the stored coefficients.

    Raises SingularDerivativeError carrying flat indices where |h'| is tiny.
    """
    z = np.asarray(z, dtype=complex)
    d1 = derivative(h)
    d1z, d2z = d1(z), derivative(d1)(z)
    small = np.abs(d1z) < min_derivative
    if np.any(small):
        raise SingularDerivativeError(f"|h'(z)| < {min_derivative}", np.flatnonzero(small).tolist())
    return (1 + z * d2z / d1z).real


def check_local_univalence(fmap: HarmonicMap, grid: GridSpec = GridSpec(),
                           extend: bool = True) -> SampledPositivityReport:
    """Sample |h'(z)| - |g'(z)| against 0 (sense-preserving on the grid)."""
    margin, where = local_univalence_margin(fmap, grid, extend)
    return SampledPositivityReport("local_univalence", margin, where, grid, 0.0, margin > 0)


def fejer_function(seq, N: int) -> np.ndarray:
    """Coefficients of c_0/2 + sum_{n=1}^N c_n z^n (index = power)."""
    c = np.array([seq[n] for n in range(N + 1)], dtype=complex)
    c[0] = c[0] / 2
    return c


def check_fejer_positivity(seq, grid: GridSpec = GridSpec(), N: int = 64) -> SampledPositivityReport:
    """Sample Re(c_0/2 + sum_{n<=N} c_n z^n) against 0."""
    values = horner(fejer_function(seq, N), grid.points()).real
    return _sampled("fejer_positivity", values, grid, 0.0, {"N": N})


def check_rotated_halfplane(F: CoeffSeq, phi: float, grid: GridSpec = GridSpec(),
                            extend: bool = True) -> SampledPositivityReport:
    """Sample Re((1 - e^{i phi} z) F'(z)) against 0."""
    if extend:
        F = seq_for_sampling(F, grid.r_max)
    z = grid.points()
    values = ((1 - cmath.exp(1j * phi) * z) * derivative(F)(z)).real
    return _sampled("rotated_halfplane", values, grid, 0.0, {"phi": float(phi), "order": F.order})


def normalized_combination(fmap: HarmonicMap, eps: complex) -> CoeffSeq:
    """(h + eps g) / (1 + eps b_1) for |eps| = 1, an analytic function with A_1 = 1."""
    denom = 1 + eps * fmap.b1
    coeffs = (fmap.h.coeffs + eps * fmap.g.coeffs) / denom
    coeffs[1] = 1.0
    return CoeffSeq(coeffs)
