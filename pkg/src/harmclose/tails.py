"""Exact coefficient formulas and checker remainders for the built-in families.

A :class:`TailDescriptor` is attached to one analytic part (h or g) of a
family map.  It knows the coefficient of every power, so a truncated part can
be extended, and it knows the closed form of each infinite remainder that the
coefficient checkers need::

    linear    sum_{n>N} n |c_n|
    square    sum_{n>N} n^2 |c_n|
    rotated   sum_{n>N} |n c_n - e^{i phi} (n-1) c_{n-1}|
    weighted  sum_{n>N} n|(n+1)c_n - (n-1)c_{n-1}| + (n-1)|n c_n - (n-2)c_{n-1}|

``tail`` returns ``math.inf`` when the remainder diverges and ``None`` when no
closed form is implemented.  All remainders assume N >= 2, so every term
involves only coefficients with index >= 2 (where the family formula holds)
except for ``c_{n-1}`` at n = 3, which is still given by the formula.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

KINDS = ("log", "dilog", "dilog_conj", "parabolic", "primitive", "cumulative")
SEQUENCES = ("harmonic", "geometric")
CUSTOM = "custom"
QUANTITIES = ("linear", "square", "rotated", "weighted")


def null_term(seq: str, k: int) -> float:
    """k-th term of one of the two certified convex null sequences."""
    if seq == "harmonic":
        return 2.0 / (k + 1)
    if seq == "geometric":
        return 2.0 ** (1 - k)
    raise ValueError(f"unknown sequence {seq!r}")


def null_partial(seq: str, n: int) -> float:
    """sum_{j=1}^{n-1} c_j for the certified sequences."""
    if seq == "harmonic":
        return 2.0 * sum(1.0 / (j + 1) for j in range(1, n))
    if seq == "geometric":
        return 2.0 - 2.0 ** (2 - n)
    raise ValueError(f"unknown sequence {seq!r}")


@dataclass(frozen=True)
class TailDescriptor:
    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown tail kind {self.kind!r}; known: {', '.join(KINDS)}")
        if self.kind in ("primitive", "cumulative"):
            seq = self.params.get("seq")
            if seq == CUSTOM:
                if not callable(self.params.get("values")):
                    raise ValueError("custom sequence descriptor needs a 'values' callable")
            elif seq not in SEQUENCES:
                raise ValueError(f"{self.kind} descriptor needs seq in {SEQUENCES + (CUSTOM,)}")

    def _p(self, name, default=None):
        return self.params.get(name, default)

    def _c(self, k):
        if self._p("seq") == CUSTOM:
            return float(self._p("values")(k))
        return null_term(self._p("seq"), k)

    def _partial(self, n):
        if self._p("seq") == CUSTOM:
            return float(sum(self._c(j) for j in range(1, n)))
        return null_partial(self._p("seq"), n)

    def coefficient(self, n: int) -> complex:
        if n < 1:
            return 0j
        kind = self.kind
        if kind == "log":
            return complex(self._p("first", 1.0)) if n == 1 else complex(self._p("scale", 1.0)) / n
        if kind == "dilog":
            return complex(1.0 / (n * n))
        if kind == "dilog_conj":
            return 0j if n == 1 else complex(1.0 / (n * (n - 1)))
        if kind == "parabolic":
            return complex((n + self._p("offset", 1)) / 2.0)
        mult = complex(self._p("mult", 1.0))
        if kind == "primitive":
            return mult if n == 1 else mult * self._c(n - 1) / n
        return mult * (1.0 + self._partial(n)) / n

    def coefficients(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients for powers lo..hi inclusive."""
        if self.kind == "cumulative" and self._p("seq") != "geometric":
            # running partial sums keep this linear in hi
            mult = complex(self._p("mult", 1.0))
            out = np.empty(hi - lo + 1, dtype=complex)
            partial = self._partial(lo)
            for i, n in enumerate(range(lo, hi + 1)):
                out[i] = mult * (1.0 + partial) / n
                partial += self._c(n)
            return out
        return np.array([self.coefficient(n) for n in range(lo, hi + 1)], dtype=complex)

    def tail(self, quantity: str, N: int, phi: float = 0.0) -> float | None:
        if quantity not in QUANTITIES:
            raise ValueError(f"unknown tail quantity {quantity!r}")
        if N < 2:
            raise ValueError("family remainders need truncation order N >= 2")
        return getattr(self, "_tail_" + self.kind)(quantity, N, phi)

    def _tail_log(self, quantity, N, phi):
        scale = abs(complex(self._p("scale", 1.0)))
        if scale == 0.0:
            return 0.0
        if quantity == "rotated":
            # every term with n >= 3 equals |scale| |1 - e^{i phi}|
            return 0.0 if phi == 0.0 else math.inf
        return math.inf

    def _tail_dilog(self, quantity, N, phi):
        if quantity == "rotated":
            return 1.0 / N if phi == 0.0 else math.inf
        if quantity == "weighted":
            return 2.0 / N
        return math.inf

    def _tail_dilog_conj(self, quantity, N, phi):
        if quantity == "rotated":
            return 1.0 / (N - 1) if phi == 0.0 else math.inf
        if quantity == "weighted":
            return None
        return math.inf

    def _tail_parabolic(self, quantity, N, phi):
        return math.inf

    def _tail_primitive(self, quantity, N, phi):
        mult = abs(complex(self._p("mult", 1.0)))
        if mult == 0.0:
            return 0.0
        if self._p("seq") == CUSTOM:
            return None
        geometric = self._p("seq") == "geometric"
        if quantity == "linear":
            return mult * 2.0 ** (2 - N) if geometric else math.inf
        if quantity == "square":
            return mult * 2.0 ** (2 - N) * (N + 2) if geometric else math.inf
        if quantity == "rotated":
            if geometric:
                return mult * 2.0 ** (2 - N) * abs(1 - 2 * cmath.exp(1j * phi))
            # telescopes to c_{N-1} at phi = 0
            return mult * null_term("harmonic", N - 1) if phi == 0.0 else math.inf
        # weighted
        return mult * N * 2.0 ** (3 - N) if geometric else mult * 4.0 / N

    def _tail_cumulative(self, quantity, N, phi):
        mult = abs(complex(self._p("mult", 1.0)))
        if mult == 0.0:
            return 0.0
        if self._p("seq") == CUSTOM:
            return None
        if quantity == "rotated" and phi == 0.0 and self._p("seq") == "geometric":
            return mult * 2.0 ** (2 - N)
        return math.inf
