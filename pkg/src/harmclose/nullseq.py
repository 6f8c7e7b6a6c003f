"""Convex null sequences and the two harmonic maps built from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConstraintError
from .families import scaled_copy
from .series import CoeffSeq, HarmonicMap
from .tails import SEQUENCES, TailDescriptor, null_term

#: certificates that settle c_n -> 0 and convexity for every n, not just up to the horizon
CERTIFICATES = SEQUENCES + ("finite_support",)


@dataclass(frozen=True)
class ConvexNullSeq:
    """Nonnegative sequence c_0, c_1, ... given by a term function."""

    values: Callable[[int], float]
    check_horizon: int = 200
    monotone_certificate: Optional[str] = None
    label: str = "custom"

    def __post_init__(self):
        if self.monotone_certificate not in (None,) + CERTIFICATES:
            raise ValueError(f"unknown certificate {self.monotone_certificate!r}")

    def __getitem__(self, n: int) -> float:
        return float(self.values(n))

    @property
    def c0(self) -> float:
        return self[0]

    def terms(self, upto: int) -> np.ndarray:
        return np.array([self[n] for n in range(upto + 1)])

    @classmethod
    def harmonic(cls, check_horizon: int = 200) -> "ConvexNullSeq":
        """c_n = 2/(n+1)."""
        return cls(lambda n: null_term("harmonic", n), check_horizon, "harmonic", "harmonic")

    @classmethod
    def geometric(cls, check_horizon: int = 200) -> "ConvexNullSeq":
        """c_n = 2^(1-n)."""
        return cls(lambda n: null_term("geometric", n), check_horizon, "geometric", "geometric")

    @classmethod
    def named(cls, name: str, check_horizon: int = 200) -> "ConvexNullSeq":
        if name == "harmonic":
            return cls.harmonic(check_horizon)
        if name == "geometric":
            return cls.geometric(check_horizon)
        raise ValueError(f"unknown sequence {name!r}; known: {', '.join(SEQUENCES)}")

    @classmethod
    def from_list(cls, values, check_horizon: Optional[int] = None) -> "ConvexNullSeq":
        """Finitely supported sequence c_0..c_K, zero afterwards.

        Checking up to K + 2 covers every difference, so the null limit and
        convexity are certified by finite support.
        """
        vals = tuple(float(v) for v in values)
        horizon = max(check_horizon or 0, len(vals) + 2, 3)
        return cls(lambda n: vals[n] if n < len(vals) else 0.0, horizon, "finite_support", "list")


@dataclass(frozen=True)
class ConvexNullReport:
    valid: bool
    horizon: int
    first_violation: Optional[tuple[int, str]]
    differences: np.ndarray = field(repr=False)
    second_differences: np.ndarray = field(repr=False)
    limit_certified: bool
    limit_status: str
    tail_value: float

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "horizon": self.horizon,
            "first_violation": None if self.first_violation is None else list(self.first_violation),
            "limit_certified": self.limit_certified,
            "limit_status": self.limit_status,
            "tail_value": self.tail_value,
        }


def validate_convex_null(seq: ConvexNullSeq, tol: float = 1e-14) -> ConvexNullReport:
    """Check c_n >= 0 and c_n - c_{n+1} >= c_{n+1} - c_{n+2} >= 0 up to the horizon.

    The limit c_n -> 0 cannot be decided from finitely many terms; it is
    certified only by the sequence's certificate, otherwise the last sampled
    value is reported as a heuristic.
    """
    M = seq.check_horizon
    if M < 3:
        raise ValueError("check_horizon must be >= 3")
    c = seq.terms(M)
    d = c[:-1] - c[1:]
    dd = d[:-1] - d[1:]
    violation = None
    for n in range(M + 1):
        if c[n] < -tol:
            violation = (n, "negative")
        elif n < M and d[n] < -tol:
            violation = (n, "increasing")
        elif n < M - 1 and dd[n] < -tol:
            violation = (n, "nonconvex")
        if violation:
            break
    certified = seq.monotone_certificate is not None
    if certified:
        status = f"certified ({seq.monotone_certificate})"
    else:
        status = "unverified limit (heuristic: last sampled term reported)"
    return ConvexNullReport(violation is None, M, violation, d, dd, certified, status, float(c[-1]))


def _require_constructible(seq: ConvexNullSeq, b) -> complex:
    b = complex(b)
    if not abs(b) < 1:
        raise ConstraintError(f"|b| must be < 1, got {abs(b)}")
    if seq.c0 != 2:
        raise ConstraintError(f"the sequence must start with c_0 = 2, got {seq.c0}")
    report = validate_convex_null(seq)
    if not report.valid:
        n, kind = report.first_violation
        raise ConstraintError(f"not a convex null sequence: {kind} at n = {n}")
    return b


def _descriptor(kind, seq, mult):
    if seq.monotone_certificate in SEQUENCES:
        return TailDescriptor(kind, {"seq": seq.monotone_certificate, "mult": mult})
    return TailDescriptor(kind, {"seq": "custom", "values": seq.values, "mult": mult})


def _assemble(kind, seq, b, h_coeffs):
    h = CoeffSeq(h_coeffs, _descriptor(kind, seq, 1.0))
    params = {"seq": seq.monotone_certificate if seq.monotone_certificate in SEQUENCES else "custom", "b": b}
    return HarmonicMap(h, scaled_copy(h, b), kind, params)


def construct_primitive(seq: ConvexNullSeq, b: complex, N: int = 64) -> HarmonicMap:
    """h = z + sum_{n>=2} c_{n-1}/n z^n (so h' = c_0/2 + sum c_n z^n), g = b h."""
    b = _require_constructible(seq, b)
    if N < 2:
        raise ConstraintError("N must be >= 2")
    a = np.zeros(N + 1, dtype=complex)
    a[1] = 1.0
    for n in range(2, N + 1):
        a[n] = seq[n - 1] / n
    return _assemble("primitive", seq, b, a)


def construct_cumulative(seq: ConvexNullSeq, b: complex, N: int = 64) -> HarmonicMap:
    """h = z + sum_{n>=2} (1 + c_1 + ... + c_{n-1})/n z^n, g = b h."""
    b = _require_constructible(seq, b)
    if N < 2:
        raise ConstraintError("N must be >= 2")
    a = np.zeros(N + 1, dtype=complex)
    a[1] = 1.0
    partial = 0.0
    for n in range(2, N + 1):
        partial += seq[n - 1]
        a[n] = (1.0 + partial) / n
    return _assemble("cumulative", seq, b, a)
