"""The closed-form example maps and their exact coefficient formulas."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import spence

from .errors import ParameterError
from .series import CoeffSeq, HarmonicMap
from .tails import SEQUENCES, TailDescriptor


def _part(tail: TailDescriptor, N: int) -> CoeffSeq:
    return CoeffSeq.from_powers(tail.coefficients(1, N), tail)


def _check_order(N, minimum=2):
    if not isinstance(N, (int, np.integer)) or isinstance(N, bool):
        raise ParameterError(f"N must be an integer, got {N!r}")
    if N < minimum:
        raise ParameterError(f"N must be >= {minimum}, got {N}")
    return int(N)


def _check_b(b) -> complex:
    b = complex(b)
    if not abs(b) < 1:
        raise ParameterError(f"|b| must be < 1, got |b| = {abs(b)}")
    return b


def _check_seq(seq):
    if seq not in SEQUENCES:
        raise ParameterError(f"seq must be one of {', '.join(SEQUENCES)}, got {seq!r}")
    return seq


def _identity(N):
    h = CoeffSeq.from_powers([1.0] + [0.0] * (N - 1))
    return h, CoeffSeq.from_powers([0.0] * N), {}


def _hypocycloid(N):
    if N < 5:
        raise ParameterError("the hypocycloid map has degree 5; N must be >= 5")
    g = np.zeros(N, dtype=complex)
    g[4] = 0.2
    h, _, _ = _identity(N)
    return h, CoeffSeq.from_powers(g), {}


def _parabolic(N):
    return (_part(TailDescriptor("parabolic", {"offset": 1}), N),
            _part(TailDescriptor("parabolic", {"offset": -1}), N), {})


def _log(N, m=1.0):
    m = float(m)
    if not 0 < m <= 1:
        raise ParameterError(f"log family needs 0 < m <= 1, got m = {m}")
    h = _part(TailDescriptor("log", {"scale": 1.0, "first": 1.0}), N)
    g = _part(TailDescriptor("log", {"scale": 1.0, "first": 1.0 - m}), N)
    return h, g, {"m": m}


def _dilog(N):
    return (_part(TailDescriptor("dilog"), N), _part(TailDescriptor("dilog_conj"), N), {})


def scaled_copy(h: CoeffSeq, b: complex) -> CoeffSeq:
    """g = b h, coefficient by coefficient, keeping the family formula."""
    tail = None
    if h.tail is not None:
        tail = TailDescriptor(h.tail.kind, {**h.tail.params, "mult": b})
    return CoeffSeq(b * h.coeffs, tail)


def _constructed(kind):
    def build(N, seq="harmonic", b=0.25):
        seq = _check_seq(seq)
        b = _check_b(b)
        h = _part(TailDescriptor(kind, {"seq": seq, "mult": 1.0}), N)
        return h, scaled_copy(h, b), {"seq": seq, "b": b}
    return build


@dataclass(frozen=True)
class FamilyInfo:
    builder: Callable
    params: tuple[str, ...]
    min_order: int = 2


FAMILIES: dict[str, FamilyInfo] = {
    "identity": FamilyInfo(_identity, ()),
    "hypocycloid": FamilyInfo(_hypocycloid, (), 5),
    "parabolic": FamilyInfo(_parabolic, ()),
    "log": FamilyInfo(_log, ("m",)),
    "dilog": FamilyInfo(_dilog, ()),
    "primitive": FamilyInfo(_constructed("primitive"), ("seq", "b")),
    "cumulative": FamilyInfo(_constructed("cumulative"), ("seq", "b")),
}


def from_family(family: str, N: int = 64, **params) -> HarmonicMap:
    """Build a named example map truncated at order N.

    Family ids and parameters:

    identity, hypocycloid      z and z + conj(z)^5 / 5
    parabolic                  a_n = (n+1)/2, b_n = (n-1)/2 (g' = z h')
    log (m)                    a_n = 1/n, b_1 = 1 - m, b_n = 1/n
    dilog                      a_n = 1/n^2, b_n = 1/(n(n-1))
    primitive (seq, b)         h' = c_0/2 + sum c_n z^n, g = b h
    cumulative (seq, b)        (1-z) h' = c_0/2 + sum c_n z^n, g = b h

    ``seq`` is "harmonic" (c_n = 2/(n+1)) or "geometric" (c_n = 2^(1-n)).
    """
    info = FAMILIES.get(family)
    if info is None:
        raise ParameterError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
    unknown = set(params) - set(info.params)
    if unknown:
        raise ParameterError(f"family {family!r} takes no parameter(s) {sorted(unknown)}")
    N = _check_order(N, 2)
    h, g, used = info.builder(N, **params)
    return HarmonicMap(h, g, family, used)


@dataclass(frozen=True)
class ClosedForm:
    """Exact h, g and their first two derivatives, vectorized over z."""

    h: Callable
    dh: Callable
    d2h: Callable
    g: Callable
    dg: Callable
    d2g: Callable
    singularities: tuple[float, ...] = ()

    def __call__(self, z):
        return self.h(z) + np.conj(self.g(z))


def _zero(z):
    return np.zeros_like(np.asarray(z, dtype=complex))


def _li2(z):
    return spence(1 - np.asarray(z, dtype=complex))


def _small(z):
    return np.abs(z) < 1e-3


def _dli2(z):
    # -log(1-z)/z, series near 0
    z = np.asarray(z, dtype=complex)
    safe = np.where(_small(z), 0.5, z)
    return np.where(_small(z), 1 + z / 2 + z**2 / 3 + z**3 / 4, -np.log(1 - safe) / safe)


def _d2li2(z):
    z = np.asarray(z, dtype=complex)
    safe = np.where(_small(z), 0.5, z)
    exact = 1 / (safe * (1 - safe)) + np.log(1 - safe) / safe**2
    return np.where(_small(z), 0.5 + 2 * z / 3 + 3 * z**2 / 4 + 4 * z**3 / 5, exact)


def closed_form(fmap: HarmonicMap) -> Optional[ClosedForm]:
    """Closed-form evaluator for a family map, or None if not implemented.

    The cumulative family has one only for the geometric sequence.
    """
    tag, p = fmap.family_tag, fmap.params
    one = lambda z: np.ones_like(np.asarray(z, dtype=complex))
    if tag == "identity":
        return ClosedForm(lambda z: np.asarray(z, dtype=complex), one, _zero, _zero, _zero, _zero)
    if tag == "hypocycloid":
        return ClosedForm(lambda z: np.asarray(z, dtype=complex), one, _zero,
                          lambda z: np.asarray(z, dtype=complex) ** 5 / 5,
                          lambda z: np.asarray(z, dtype=complex) ** 4,
                          lambda z: 4 * np.asarray(z, dtype=complex) ** 3)
    if tag == "parabolic":
        return ClosedForm(
            lambda z: z / (2 * (1 - z) ** 2) + z / (2 * (1 - z)),
            lambda z: (1 - z) ** -3,
            lambda z: 3 * (1 - z) ** -4,
            lambda z: z / (2 * (1 - z) ** 2) - z / (2 * (1 - z)),
            lambda z: z * (1 - z) ** -3,
            lambda z: (1 - z) ** -3 + 3 * z * (1 - z) ** -4,
            singularities=(0.0,),
        )
    if tag == "log":
        m = p["m"]
        return ClosedForm(
            lambda z: -np.log(1 - z),
            lambda z: 1 / (1 - z),
            lambda z: (1 - z) ** -2,
            lambda z: -m * z - np.log(1 - z),
            lambda z: 1 / (1 - z) - m,
            lambda z: (1 - z) ** -2,
            singularities=(0.0,),
        )
    if tag == "dilog":
        return ClosedForm(
            _li2, _dli2, _d2li2,
            lambda z: z + (1 - z) * np.log(1 - z),
            lambda z: -np.log(1 - z),
            lambda z: 1 / (1 - z),
            singularities=(0.0,),
        )
    if tag == "primitive" and p.get("seq") in SEQUENCES:
        b = p["b"]
        if p["seq"] == "harmonic":
            # h = 2 Li2(z) - z
            h = lambda z: 2 * _li2(z) - z
            dh = lambda z: 2 * _dli2(z) - 1
            d2h = lambda z: 2 * _d2li2(z)
            sing = (0.0,)
        else:
            # h = -z - 4 log(1 - z/2)
            h = lambda z: -z - 4 * np.log(1 - z / 2)
            dh = lambda z: -1 + 2 / (1 - z / 2)
            d2h = lambda z: (1 - z / 2) ** -2
            sing = ()
        return ClosedForm(h, dh, d2h,
                          lambda z: b * h(z), lambda z: b * dh(z), lambda z: b * d2h(z),
                          singularities=sing)
    if tag == "cumulative" and p.get("seq") == "geometric":
        b = p["b"]
        # (1 - z) h' = (2 + z)/(2 - z), so h' = 3/(1 - z) - 4/(2 - z)
        h = lambda z: -3 * np.log(1 - z) + 4 * np.log(1 - z / 2)
        dh = lambda z: 3 / (1 - z) - 4 / (2 - z)
        d2h = lambda z: 3 * (1 - z) ** -2 - 4 * (2 - z) ** -2
        return ClosedForm(h, dh, d2h,
                          lambda z: b * h(z), lambda z: b * dh(z), lambda z: b * d2h(z),
                          singularities=(0.0,))
    return None


def boundary_radius(fmap: HarmonicMap) -> float:
    """Radius used for the boundary circle: 1 for polynomials, 1 - 1e-6 otherwise."""
    if fmap.h.is_polynomial and fmap.g.is_polynomial:
        return 1.0
    return 1.0 - 1e-6


def param_value(value):
    """JSON-friendly copy of a family parameter (complex -> [re, im])."""
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def parse_complex(value, name="b") -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ParameterError(f"{name} must be a number or a [re, im] pair")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, bool):
        raise ParameterError(f"{name} must be numeric")
    try:
        return complex(value)
    except (TypeError, ValueError):
        raise ParameterError(f"{name} must be a number or a [re, im] pair") from None

