"""BMO, Orlicz and rearrangement quantities of sampled functions."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import lambertw

from . import _kernels as K
from .grid import SampledFn, Window

MAX_FLOAT = float(np.finfo(np.float64).max)


class BisectionCapWarning(RuntimeWarning):
    """A Luxemburg bisection stopped at its iteration cap."""


@dataclass(frozen=True)
class OrliczFunction:
    """One of the Young pair ``LlogL`` (t (1 + log+ t)) and ``ExpL`` (e^t - 1)."""

    kind: str

    def __post_init__(self):
        if self.kind not in ("LlogL", "ExpL"):
            raise ValueError(f"unknown Orlicz kind {self.kind!r}; expected 'LlogL' or 'ExpL'")

    @property
    def code(self) -> int:
        return K.LLOGL if self.kind == "LlogL" else K.EXPL

    @property
    def complement(self) -> "OrliczFunction":
        return EXPL if self.kind == "LlogL" else LLOGL

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "LlogL":
            with np.errstate(divide="ignore"):
                return t * (1.0 + np.log(np.maximum(t, 1.0)))
        with np.errstate(over="ignore"):
            return np.expm1(t)

    def inverse(self, y):
        y = np.asarray(y, dtype=np.float64)
        if self.kind == "ExpL":
            return np.log1p(y)
        # t (1 + log t) = y for y > 1  <=>  t = exp(W(e y) - 1)
        big = np.exp(np.real(lambertw(np.e * np.maximum(y, 1.0))) - 1.0)
        return np.where(y <= 1.0, y, big)


LLOGL = OrliczFunction("LlogL")
EXPL = OrliczFunction("ExpL")


def as_orlicz(phi) -> OrliczFunction:
    if isinstance(phi, OrliczFunction):
        return phi
    return OrliczFunction(str(phi))


# -- BMO ----------------------------------------------------------------------

FENWICK_MIN_N = 512


def bmo_seminorm(b: SampledFn, method: str = "exact_L1") -> float:
    """Largest mean oscillation over all windows.

    ``exact_L1`` averages |b - b_w|; ``proxy_L2`` uses the windowed standard
    deviation from prefix sums of b and b^2 (cheaper, bounds exact_L1 above).
    """
    v = np.ascontiguousarray(b.values)
    if method not in ("exact_L1", "proxy_L2"):
        raise ValueError(f"unknown method {method!r}; expected 'exact_L1' or 'proxy_L2'")
    if np.ptp(v) == 0:
        return 0.0
    if method == "exact_L1":
        if b.n < FENWICK_MIN_N:
            return float(K.moment_osc_fold(v, 1.0)[1])
        return float(K.osc_fenwick(v, 0.0)[1])
    return float(K.l2_osc_max(v))


def bmo_p_seminorm(b: SampledFn, p: float) -> float:
    """sup_w (avg_w |b - b_w|^p)^(1/p), by direct per-window sums."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return float(K.moment_osc_fold(np.ascontiguousarray(b.values), float(p))[1])


def _window_dev(b: SampledFn, w: Window) -> np.ndarray:
    w.check(b.n)
    seg = b.values[w.i : w.j + 1]
    return seg - seg.mean()


def level_set_oscillation_measure(b: SampledFn, w: Window, lam: float) -> float:
    """|{x in w : |b(x) - b_w| > lam}|."""
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    return b.h * int(np.count_nonzero(np.abs(_window_dev(b, w)) > lam))


class ExpAverage(NamedTuple):
    value: float
    saturated: bool


def exp_average(b: SampledFn, w: Window, lam: float) -> ExpAverage:
    """avg_w exp(lam |b - b_w|); saturates to the largest float on overflow."""
    if not lam > 0:
        raise ValueError(f"lambda must be > 0, got {lam}")
    d = np.abs(_window_dev(b, w))
    with np.errstate(over="ignore"):
        val = float(np.exp(lam * d).mean())
    if not math.isfinite(val):
        return ExpAverage(MAX_FLOAT, True)
    return ExpAverage(val, False)


def exp_average_sup(b: SampledFn, lam: float) -> ExpAverage:
    """Largest exp_average over every window of the grid."""
    if not lam > 0:
        raise ValueError(f"lambda must be > 0, got {lam}")
    _, _, emax, sat = K.osc_fenwick(np.ascontiguousarray(b.values), float(lam))
    return ExpAverage(float(emax), bool(sat))


def delta_moment(b: SampledFn, w: Window, delta: float) -> float:
    """(1/|w|) int_w |b - b_w|^delta."""
    d = np.abs(_window_dev(b, w))
    return float(np.mean(d**delta))


def layer_cake_moment(b: SampledFn, w: Window, delta: float) -> float:
    """delta int_0^inf lam^(delta-1) m(lam) dlam with m the normalised level-set
    measure, summed exactly over the jumps of the step function m."""
    d = np.sort(np.abs(_window_dev(b, w)))
    cnt = d.shape[0]
    jumps = np.unique(d)
    # on [jumps[q-1], jumps[q]) the level set holds every |dev| >= jumps[q]
    above = cnt - np.searchsorted(d, jumps, side="left")
    left = np.concatenate(([0.0], jumps[:-1]))
    return float(np.sum(above / cnt * (jumps**delta - left**delta)))


# -- Orlicz -------------------------------------------------------------------

def luxemburg_average(g: SampledFn, w: Window, phi, rtol: float = 1e-10, maxiter: int = 200) -> float:
    """inf{lam > 0 : avg_w phi(|g|/lam) <= 1}, by doubling then bisection."""
    phi = as_orlicz(phi)
    w.check(g.n)
    x = np.ascontiguousarray(np.abs(g.values))
    val, _, ok = K.luxemburg(x, w.i, w.j, phi.code, rtol, maxiter)
    if not ok:
        warnings.warn(f"Luxemburg bisection hit {maxiter} iterations on {w}", BisectionCapWarning, stacklevel=2)
    return float(val)


def zygmund_quasinorm(f: SampledFn) -> float:
    """int |f| (1 + log+ |f|)."""
    a = np.abs(f.values)
    return float(f.h * np.sum(a * (1.0 + np.log(np.maximum(a, 1.0)))))


# -- rearrangement --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RearrangementProfile:
    """Nonincreasing rearrangement as a right-continuous step function; the
    k-th largest |value| occupies ``[k h, (k+1) h)``."""

    values: np.ndarray = field(repr=False)
    h: float

    @property
    def total_mass(self) -> float:
        return self.values.shape[0] * self.h

    @property
    def breakpoints(self) -> np.ndarray:
        return np.arange(1, self.values.shape[0] + 1) * self.h

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        idx = np.floor(t / self.h).astype(np.int64)
        inside = (idx >= 0) & (idx < self.values.shape[0])
        out = np.where(inside, self.values[np.clip(idx, 0, self.values.shape[0] - 1)], 0.0)
        return out if out.ndim else float(out)

    def measure_above(self, lam: float) -> float:
        return self.h * int(np.count_nonzero(self.values > lam))


def rearrangement(f: SampledFn) -> RearrangementProfile:
    v = np.sort(np.abs(f.values))[::-1].copy()
    v.setflags(write=False)
    return RearrangementProfile(v, f.h)


def distribution_measure(f: SampledFn, lam: float) -> float:
    """|{x : |f(x)| > lam}|."""
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    return f.h * int(np.count_nonzero(np.abs(f.values) > lam))


def weak_lorentz_quasinorm(f: SampledFn, p: float) -> float:
    """sup_t t^(1/p) f*(t), attained at the right edge of a step."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    prof = rearrangement(f)
    return float(np.max(prof.breakpoints ** (1.0 / p) * prof.values))
