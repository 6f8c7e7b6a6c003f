"""Truncated analytic parts and harmonic maps f = h + conj(g) on the unit disk.

Coefficient arrays use semantic indexing: ``coeffs[n]`` is the coefficient of
z**n and ``coeffs[0]`` is always zero.  A part without a tail descriptor is an
exact polynomial; a part with one is the truncation of a known infinite series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .errors import DomainError, ParameterError
from .tails import TailDescriptor

DEFAULT_ORDER = 64


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CoeffSeq:
    """Coefficients c_0..c_N of a truncated power series (c_0 = 0)."""

    coeffs: np.ndarray
    tail: Optional[TailDescriptor] = None

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=complex)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("coefficient array must hold c_0..c_N with N >= 1")
        if arr[0] != 0:
            raise ValueError("c_0 must be zero")
        object.__setattr__(self, "coeffs", _frozen(arr))

    @classmethod
    def from_powers(cls, values, tail: Optional[TailDescriptor] = None) -> "CoeffSeq":
        """Build from c_1..c_N (the constant term is prepended)."""
        return cls(np.concatenate(([0j], np.asarray(values, dtype=complex))), tail)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_polynomial(self) -> bool:
        return self.tail is None

    def __getitem__(self, n: int) -> complex:
        if 0 <= n <= self.order:
            return complex(self.coeffs[n])
        if n > self.order and self.tail is not None:
            return self.tail.coefficient(n)
        return 0j

    def __eq__(self, other):
        if not isinstance(other, CoeffSeq):
            return NotImplemented
        return self.tail == other.tail and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        return f"CoeffSeq(order={self.order}, tail={self.tail!r})"

    def padded(self, order: int) -> "CoeffSeq":
        """Same series at a higher truncation order.

        Family parts are extended with their exact formula; polynomials with
        zeros.
        """
        if order < self.order:
            raise ValueError("cannot pad to a lower order")
        if order == self.order:
            return self
        if self.tail is None:
            extra = np.zeros(order - self.order, dtype=complex)
        else:
            extra = self.tail.coefficients(self.order + 1, order)
        return CoeffSeq(np.concatenate((self.coeffs, extra)), self.tail)

    def truncated(self, order: int) -> "CoeffSeq":
        if order < 1 or order > self.order:
            raise ValueError("truncation order out of range")
        return CoeffSeq(self.coeffs[: order + 1], self.tail)

    def as_polynomial(self) -> "CoeffSeq":
        return CoeffSeq(self.coeffs, None)


@dataclass(frozen=True, eq=False)
class HarmonicMap:
    """f = h + conj(g) with h(0) = g(0) = 0 and h'(0) = 1."""

    h: CoeffSeq
    g: CoeffSeq
    family_tag: Optional[str] = None
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.h[1] != 1:
            raise ParameterError(f"analytic part must have a_1 = 1, got {self.h[1]}")
        if self.h.order != self.g.order:
            raise ValueError("h and g must share the truncation order")

    @classmethod
    def from_parts(cls, h: CoeffSeq, g: CoeffSeq, family_tag=None, params=None) -> "HarmonicMap":
        """Pad the shorter part so both share one order."""
        order = max(h.order, g.order)
        return cls(h.padded(order), g.padded(order), family_tag, dict(params or {}))

    @property
    def order(self) -> int:
        return self.h.order

    @property
    def b1(self) -> complex:
        return self.g[1]

    def padded(self, order: int) -> "HarmonicMap":
        return HarmonicMap(self.h.padded(order), self.g.padded(order), self.family_tag, dict(self.params))

    def __eq__(self, other):
        if not isinstance(other, HarmonicMap):
            return NotImplemented
        return (self.h == other.h and self.g == other.g
                and self.family_tag == other.family_tag and self.params == other.params)

    def __repr__(self):
        return f"HarmonicMap(family={self.family_tag!r}, order={self.order}, params={self.params})"


def horner(coeffs: np.ndarray, z):
    """Evaluate sum_n coeffs[n] z**n by nested multiplication.

    No domain check; callers decide whether |z| = 1 is admissible.
    """
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def _check_disk(z):
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("evaluation point must satisfy |z| < 1")


def eval_analytic(seq: CoeffSeq, z):
    """sum_{n=1}^N c_n z^n for |z| < 1 (scalar or array input)."""
    _check_disk(z)
    out = horner(seq.coeffs, z)
    return complex(out) if np.ndim(out) == 0 else out


def eval_harmonic(fmap: HarmonicMap, z):
    _check_disk(z)
    out = horner(fmap.h.coeffs, z) + np.conj(horner(fmap.g.coeffs, z))
    return complex(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True, eq=False)
class DerivativeSeq:
    """Power series with a possibly nonzero constant term (a derivative)."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen(self.coeffs))

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __getitem__(self, n):
        return complex(self.coeffs[n]) if 0 <= n <= self.order else 0j

    def __call__(self, z):
        out = horner(self.coeffs, z)
        return complex(out) if np.ndim(out) == 0 else out


def derivative(seq) -> "DerivativeSeq":
    """Term-wise derivative: ``coeffs[k]`` of the result is (k+1) c_{k+1}.

    The tail descriptor is dropped; the result is an exact polynomial.
    """
    n = np.arange(seq.coeffs.size)
    return DerivativeSeq((n * seq.coeffs)[1:])


def couple_g_from_h(h: CoeffSeq, p: int) -> CoeffSeq:
    """g with g'(z) = z**(p-1) h'(z), as an exact polynomial of order N + p - 1."""
    if p < 2:
        raise ParameterError("coupling exponent p must be >= 2")
    order = h.order + p - 1
    b = np.zeros(order + 1, dtype=complex)
    m = np.arange(1, h.order + 1)
    num, den = m * h.coeffs[1:], (m + p - 1).astype(float)
    # split division: numpy's complex/complex division is not correctly rounded
    b[m + p - 1] = num.real / den + 1j * (num.imag / den)
    return CoeffSeq(b)


def coupled_map(h: CoeffSeq, p: int = 2) -> HarmonicMap:
    """Harmonic map h + conj(g) with g' = z^(p-1) h', both parts exact polynomials."""
    hp = h.as_polynomial()
    return HarmonicMap.from_parts(hp, couple_g_from_h(hp, p), "coupled", {"p": p})


def _remainder(tail: TailDescriptor, order: int, r: float, weight: int) -> float:
    total = 0.0
    n = order + 1
    chunk = 256
    while n <= 50_000_000:
        cs = np.abs(tail.coefficients(n, n + chunk - 1))
        ns = np.arange(n, n + chunk, dtype=float)
        terms = cs * ns**weight * np.exp(ns * math.log(r))
        total += float(terms.sum())
        last, before = float(terms[-1]), float(terms[-2])
        if last == 0.0 and before == 0.0:
            return total
        if before > 0.0:
            # later ratios never exceed the observed one (growing coefficients)
            # nor r (1 + 1/n)^weight (nonincreasing coefficients)
            q = max(last / before, r * (1 + 1 / ns[-1]) ** weight)
            if q < 1:
                rest = last * q / (1 - q)
                if rest <= 1e-17 * total or rest < 1e-300:
                    return total + rest
        n += chunk
    return math.inf


def eval_tail_bound(seq: CoeffSeq, r: float, weight: int = 0) -> float:
    """Bound on sum_{n>N} n**weight |c_n| r**n, the truncation error of a family part.

    Polynomials have a zero remainder.  Terms are summed directly until they
    decay geometrically; the rest is bounded by a geometric series.
    """
    if seq.tail is None:
        return 0.0
    if not 0 <= r < 1:
        raise DomainError("tail bound needs 0 <= r < 1")
    if r == 0:
        return 0.0
    return _remainder(seq.tail, seq.order, r, weight)


def order_for_radius(seq: CoeffSeq, r: float, tol: float = 1e-12, weight: int = 2,
                     max_order: int = 200_000) -> int:
    """Smallest order (>= current) whose remainder bound at radius r is below tol.

    ``weight`` = 2 controls the second derivative as well as the values.
    """
    if seq.tail is None or r <= 0:
        return seq.order
    if not r < 1:
        raise DomainError("a family series cannot be made accurate on |z| = 1")
    ok = lambda order: _remainder(seq.tail, order, r, weight) <= tol
    lo = seq.order
    if ok(lo):
        return lo
    hi = lo
    while not ok(hi):
        lo = hi
        hi = hi * 2
        if hi > max_order:
            raise DomainError(f"no truncation order up to {max_order} reaches tol {tol} at r={r}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def for_sampling(fmap: HarmonicMap, r_max: float, tol: float = 1e-12) -> HarmonicMap:
    """Extend a family map so that sampling on |z| <= r_max is accurate to tol."""
    if r_max >= 1:
        return fmap
    order = max(order_for_radius(fmap.h, r_max, tol), order_for_radius(fmap.g, r_max, tol))
    return fmap.padded(order) if order > fmap.order else fmap


def seq_for_sampling(seq: CoeffSeq, r_max: float, tol: float = 1e-12) -> CoeffSeq:
    if r_max >= 1:
        return seq
    return seq.padded(order_for_radius(seq, r_max, tol))
