"""Sampled geometry of f(U): circle images, tangent turning, cusps, regions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CuspProximityError, DomainError
from .families import closed_form
from .series import HarmonicMap, derivative, for_sampling, horner

CUSP_EXCLUSION_WIDTH = 0.05
DEFAULT_RADII = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99)
DEFAULT_STEPS = 720


def angles(steps: int) -> np.ndarray:
    """Uniform parameters t_k = -pi + k (2 pi / steps), k = 0..steps-1.

    Written so that the grid for 2*steps contains this one bit for bit.
    """
    return -math.pi + np.arange(steps) * (2 * math.pi / steps)


@dataclass(frozen=True)
class GridSpec:
    radii: tuple[float, ...] = DEFAULT_RADII
    angular_steps: int = DEFAULT_STEPS

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        if not radii:
            raise ValueError("grid needs at least one radius")
        if any(not 0 < r < 1 for r in radii):
            raise ValueError("grid radii must lie in (0, 1)")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("grid radii must be strictly increasing")
        if self.angular_steps < 8:
            raise ValueError("angular_steps must be >= 8")
        object.__setattr__(self, "radii", radii)

    @property
    def r_max(self) -> float:
        return self.radii[-1]

    def thetas(self) -> np.ndarray:
        return angles(self.angular_steps)

    def points(self) -> np.ndarray:
        """Complex sample points, shape (len(radii), angular_steps), radius-major."""
        return np.asarray(self.radii)[:, None] * np.exp(1j * self.thetas())[None, :]

    def location(self, flat_index: int) -> tuple[float, float]:
        i, j = divmod(int(flat_index), self.angular_steps)
        return self.radii[i], float(self.thetas()[j])

    def to_dict(self) -> dict:
        return {"radii": list(self.radii), "angular_steps": self.angular_steps}


@dataclass(frozen=True)
class CurveSample:
    t: float
    w: complex
    w1: complex
    w2: complex


def _series_trace(fmap: HarmonicMap, z: np.ndarray):
    h, g = fmap.h.coeffs, fmap.g.coeffs
    n = np.arange(h.size)
    # w = sum a_n z^n + conj(sum b_n z^n); each t-derivative multiplies the
    # z^n term by i n and the conj(z)^n term by -i n
    w = horner(h, z) + np.conj(horner(g, z))
    w1 = 1j * horner(n * h, z) - 1j * np.conj(horner(n * g, z))
    w2 = -horner(n * n * h, z) - np.conj(horner(n * n * g, z))
    return w, w1, w2


def _closed_trace(fmap: HarmonicMap, z: np.ndarray):
    cf = closed_form(fmap)
    if cf is None:
        raise ValueError(f"no closed form for family {fmap.family_tag!r}")
    dh, d2h, dg, d2g = cf.dh(z), cf.d2h(z), cf.dg(z), cf.d2g(z)
    w = cf.h(z) + np.conj(cf.g(z))
    w1 = 1j * z * dh - 1j * np.conj(z * dg)
    w2 = -(z * dh + z * z * d2h) - np.conj(z * dg + z * z * d2g)
    return w, w1, w2


def trace_arrays(fmap: HarmonicMap, r: float, steps: int, exact: bool = False):
    """(t, w, w', w'') arrays for the image of |z| = r.

    ``exact`` uses the family's closed form instead of the truncated series.
    """
    if r > 1:
        raise DomainError(f"radius must be <= 1, got {r}")
    if r <= 0:
        raise DomainError(f"radius must be positive, got {r}")
    if exact and r >= 1:
        raise DomainError("closed forms are only evaluated inside the disk")
    t = angles(steps)
    z = r * np.exp(1j * t)
    w, w1, w2 = (_closed_trace if exact else _series_trace)(fmap, z)
    return t, w, w1, w2


def trace_circle_image(fmap: HarmonicMap, r: float, steps: int = DEFAULT_STEPS,
                       exact: bool = False) -> list[CurveSample]:
    t, w, w1, w2 = trace_arrays(fmap, r, steps, exact)
    return [CurveSample(float(a), complex(b), complex(c), complex(d))
            for a, b, c, d in zip(t, w, w1, w2)]


def trace_accurate(fmap: HarmonicMap, r: float, steps: int = DEFAULT_STEPS) -> list[CurveSample]:
    """Circle image using the most accurate evaluator available.

    Polynomials are exact as stored; family maps use their closed form inside
    the disk when there is one, and otherwise a series lengthened for radius r.
    """
    if fmap.h.is_polynomial and fmap.g.is_polynomial:
        return trace_circle_image(fmap, r, steps)
    if r >= 1:
        raise DomainError("family maps are traced only inside the disk (r < 1)")
    if closed_form(fmap) is not None:
        return trace_circle_image(fmap, r, steps, exact=True)
    return trace_circle_image(for_sampling(fmap, r), r, steps)


def local_univalence_margin(fmap: HarmonicMap, grid: GridSpec = GridSpec(), extend: bool = True):
    """min over the grid of |h'(z)| - |g'(z)| and its (r, theta) location."""
    if extend:
        fmap = for_sampling(fmap, grid.r_max)
    z = grid.points()
    margin = np.abs(derivative(fmap.h)(z)) - np.abs(derivative(fmap.g)(z))
    k = int(np.argmin(margin))
    return float(margin.flat[k]), grid.location(k)


def _arc_mask(t: np.ndarray, centers: Iterable[float], width: float) -> np.ndarray:
    keep = np.ones(t.shape, dtype=bool)
    for c in centers:
        gap = np.abs(np.angle(np.exp(1j * (t - c))))
        keep &= gap > width / 2
    return keep


def concavity_indicator(fmap: HarmonicMap, r: float, steps: int = DEFAULT_STEPS, *,
                        exclude: Sequence[float] = (), exclusion_width: float = CUSP_EXCLUSION_WIDTH,
                        exact: bool = False, min_speed: float = 1e-9):
    """max over t of Im(w''(t)/w'(t)) on the image of |z| = r, with its argmax.

    Nonpositive values mean the tangent turns clockwise, i.e. the arcs are
    concave.  Parameters within ``exclusion_width/2`` of a point in
    ``exclude`` (cusps, boundary singularities) are skipped.
    """
    t, _, w1, w2 = trace_arrays(fmap, r, steps, exact)
    keep = _arc_mask(t, exclude, exclusion_width)
    slow = keep & (np.abs(w1) < min_speed)
    if slow.any():
        raise CuspProximityError(
            f"|w'(t)| < {min_speed} at {int(slow.sum())} sampled t", t[slow].tolist())
    if not keep.any():
        raise ValueError("every sample was excluded")
    values = np.full(t.shape, -np.inf)
    values[keep] = (w2[keep] / w1[keep]).imag
    k = int(np.argmax(values))
    return float(values[k]), float(t[k])


def parabola_region_check(samples: Sequence[CurveSample]):
    """Smallest slack u + v^2 + 1/4 over the samples, and whether all are positive.

    The parabolic family maps the disk into {u > -v^2 - 1/4}.
    """
    w = np.array([s.w for s in samples], dtype=complex)
    slack = w.real + w.imag**2 + 0.25
    m = float(slack.min())
    return m, m > 0


def parabola_profile(r: float, t: float):
    """Profile of -4(u + v^2) on |z| = r as a function of t = cos(theta).

    Returns (4r(r-t)(1-rt)/(1+r^2-2rt)^2, 4r/(1+r)^2); the first never exceeds
    the second, which is < 1.
    """
    if not 0 <= r < 1:
        raise DomainError("profile needs 0 <= r < 1")
    if not -1 <= t <= 1:
        raise DomainError("profile needs -1 <= t <= 1")
    d = 1 + r * r - 2 * r * t
    return 4 * r * (r - t) * (1 - r * t) / (d * d), 4 * r / (1 + r) ** 2


def cusp_detect(samples: Sequence[CurveSample], threshold: float = 0.05) -> list[float]:
    """Parameters t where |w'(t)| has a local minimum below ``threshold``.

    Samples are treated as one closed loop; minima within two grid steps of
    each other are merged into the deepest one.
    """
    speed = np.abs(np.array([s.w1 for s in samples], dtype=complex))
    t = np.array([s.t for s in samples])
    n = speed.size
    if n < 3:
        return []
    prev, nxt = np.roll(speed, 1), np.roll(speed, -1)
    cand = np.flatnonzero((speed < threshold) & (speed <= prev) & (speed <= nxt))
    clusters: list[list[int]] = []
    for i in cand:
        if clusters and i - clusters[-1][-1] <= 2:
            clusters[-1].append(int(i))
        else:
            clusters.append([int(i)])
    if len(clusters) > 1 and clusters[0][0] + n - clusters[-1][-1] <= 2:
        clusters[0] = clusters.pop() + clusters[0]
    return sorted(float(t[min(c, key=lambda i: speed[i])]) for c in clusters)
