"""Maximal-type operators on sampled functions.

Every supremum runs over all windows of the grid that contain the point
(uncentered, restricted to ``[a, b]``).  The fast paths are exact: they return
the largest window average itself, not an approximation of it, and the test
suite holds them to equality with exhaustive enumeration.
"""

from __future__ import annotations

import warnings

import numpy as np

from . import _kernels as K
from .grid import SampledFn, check_same_grid
from .norms import BisectionCapWarning, as_orlicz

SWEEP_MAX_N = 4096
SCAN_MAX_N = 256
ORLICZ_WINDOWS_MAX_N = 64


def _max_window_average(v: np.ndarray, method: str) -> np.ndarray:
    v = np.ascontiguousarray(v, dtype=np.float64)
    if method == "auto":
        method = "sweep" if v.shape[0] <= SWEEP_MAX_N else "hull"
    if method == "sweep":
        return K.max_avg_sweep(v)
    if method == "hull":
        return K.max_avg_hull(v)
    raise ValueError(f"unknown method {method!r}; expected 'auto', 'sweep' or 'hull'")


def hl_maximal(f: SampledFn, method: str = "auto") -> SampledFn:
    """Uncentered Hardy-Littlewood maximal function.

    ``method="sweep"`` is the O(n^2) left-endpoint sweep; ``"hull"`` is the
    O(n log^2 n) divide-and-conquer over prefix-sum convex hulls, used by
    ``"auto"`` above ``SWEEP_MAX_N`` points.
    """
    return f.with_values(_max_window_average(np.abs(f.values), method))


def hl_maximal_bruteforce(f: SampledFn) -> SampledFn:
    """Reference M f by enumerating every window with a direct sum."""
    v = np.abs(f.values)
    n = f.n
    out = np.zeros(n)
    for i in range(n):
        for j in range(i, n):
            avg = v[i : j + 1].sum() / (j - i + 1)
            seg = out[i : j + 1]
            np.maximum(seg, avg, out=seg)
    return f.with_values(out)


def iterated_maximal(f: SampledFn, method: str = "auto") -> SampledFn:
    """M^2 f = M(M f)."""
    return hl_maximal(hl_maximal(f, method), method)


def _check_delta(delta: float, closed: bool) -> float:
    delta = float(delta)
    ok = 0.0 < delta <= 1.0 if closed else 0.0 < delta < 1.0
    if not ok:
        bound = "(0, 1]" if closed else "(0, 1)"
        raise ValueError(f"delta must lie in {bound}, got {delta}")
    return delta


def power_maximal(f: SampledFn, delta: float, method: str = "auto") -> SampledFn:
    """M_delta f = (M |f|^delta)^(1/delta)."""
    delta = _check_delta(delta, closed=True)
    if delta == 1.0:
        return hl_maximal(f, method)
    m = _max_window_average(np.abs(f.values) ** delta, method)
    return f.with_values(m ** (1.0 / delta))


def _osc_fold(v: np.ndarray) -> np.ndarray:
    v = np.ascontiguousarray(v, dtype=np.float64)
    if np.ptp(v) == 0:
        # window means of a constant are not exact in floating point
        return np.zeros_like(v)
    if v.shape[0] <= 512:
        out, _ = K.moment_osc_fold(v, 1.0)
    else:
        out, _, _, _ = K.osc_fenwick(v, 0.0)
    return out


def sharp_maximal(f: SampledFn) -> SampledFn:
    """Fefferman-Stein sharp maximal function M# f."""
    return f.with_values(_osc_fold(f.values))


def power_sharp_maximal(f: SampledFn, delta: float) -> SampledFn:
    """M#_delta f = (M# |f|^delta)^(1/delta), 0 < delta < 1."""
    delta = _check_delta(delta, closed=False)
    return f.with_values(_osc_fold(np.abs(f.values) ** delta) ** (1.0 / delta))


def maximal_commutator(b: SampledFn, f: SampledFn, method: str = "auto") -> SampledFn:
    """C_b f(x_k) = max over windows w containing k of avg_w |b_k - b| |f|.

    ``"scan"`` enumerates every (i, j) pair per point, O(n^3) in total;
    ``"fast"`` runs a Dinkelbach iteration per point (a few O(n) passes).
    """
    check_same_grid(b, f)
    bv = np.ascontiguousarray(b.values)
    af = np.ascontiguousarray(np.abs(f.values))
    if method == "auto":
        method = "scan" if b.n <= SCAN_MAX_N else "fast"
    if method == "scan":
        out = K.maxcomm_scan(bv, af)
    elif method == "fast":
        out = K.maxcomm_fast(bv, af)
    else:
        raise ValueError(f"unknown method {method!r}; expected 'auto', 'scan' or 'fast'")
    return f.with_values(out)


def commutator_maximal(b: SampledFn, f: SampledFn, method: str = "auto") -> SampledFn:
    """[M, b] f = M(b f) - b M f, sign kept."""
    check_same_grid(b, f)
    return hl_maximal(b * f, method) - b * hl_maximal(f, method)


def orlicz_maximal(f: SampledFn, phi, rtol: float = 1e-10, maxiter: int = 200,
                   method: str = "auto") -> SampledFn:
    """M_phi f: largest Luxemburg phi-average over windows containing each point.

    ``"windows"`` bisects every window separately (O(n^3) per bisection step);
    ``"levelset"`` bisects once per point, testing all windows through it with
    a max-subarray pass.  ``"auto"`` picks windows up to ``ORLICZ_WINDOWS_MAX_N``.
    """
    phi = as_orlicz(phi)
    x = np.ascontiguousarray(np.abs(f.values))
    if method == "auto":
        method = "windows" if f.n <= ORLICZ_WINDOWS_MAX_N else "levelset"
    if method == "windows":
        out, capped = K.orlicz_fold(x, phi.code, rtol, maxiter)
    elif method == "levelset":
        mf = _max_window_average(x, "auto")
        out, capped = K.orlicz_fold_levelset(x, mf, phi.code, rtol, maxiter)
    else:
        raise ValueError(f"unknown method {method!r}; expected 'auto', 'windows' or 'levelset'")
    if capped:
        warnings.warn(f"{capped} bisections hit the iteration cap", BisectionCapWarning, stacklevel=2)
    return f.with_values(out)


def positive_part(b: SampledFn) -> SampledFn:
    return b.with_values(np.maximum(b.values, 0.0))


def negative_part(b: SampledFn) -> SampledFn:
    return b.with_values(np.maximum(-b.values, 0.0))
