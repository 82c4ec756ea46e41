"""Compiled loops behind the window-supremum operators.

Conventions shared by every kernel: ``S`` is the unit-weight prefix sum
(``S[0] = 0``, ``S[k+1] = S[k] + v[k]``, ascending order), a window ``(i, j)``
has average ``(S[j+1] - S[i]) / (j - i + 1)``, and "fold" means
``out[k] = max over windows containing k``.  The grid step never enters here.
"""

import math

import numpy as np
from numba import njit

LEAF = 16
LLOGL = 0
EXPL = 1
EXP_ARG_MAX = 709.0


@njit(cache=True)
def prefix(v):
    n = v.shape[0]
    S = np.zeros(n + 1)
    acc = 0.0
    for k in range(n):
        acc += v[k]
        S[k + 1] = acc
    return S


@njit(cache=True)
def max_avg_sweep(v):
    """O(n^2): per left endpoint, suffix maxima over right endpoints."""
    n = v.shape[0]
    S = prefix(v)
    out = np.full(n, -np.inf)
    for i in range(n):
        suf = -np.inf
        for j in range(n - 1, i - 1, -1):
            avg = (S[j + 1] - S[i]) / (j - i + 1)
            if avg > suf:
                suf = avg
            if suf > out[j]:
                out[j] = suf
    return out


@njit(cache=True)
def _slope(S, a, b):
    return (S[b] - S[a]) / (b - a)


@njit(cache=True)
def _cross(S, o, a, b):
    return (a - o) * (S[b] - S[o]) - (S[a] - S[o]) * (b - o)


@njit(cache=True)
def _leaf(S, lo, hi, out):
    for i in range(lo, hi + 1):
        suf = -np.inf
        for j in range(hi, i - 1, -1):
            avg = (S[j + 1] - S[i]) / (j - i + 1)
            if avg > suf:
                suf = avg
            if suf > out[j]:
                out[j] = suf


@njit(cache=True)
def _crossing(S, lo, mid, hi, out, hull, best):
    # right endpoints r = j + 1 for j in (mid, hi]; left endpoints i in [lo, mid]
    r0 = mid + 2
    r1 = hi + 1
    # upper hull of right points
    m = 0
    for r in range(r0, r1 + 1):
        while m >= 2 and _cross(S, hull[m - 2], hull[m - 1], r) >= 0.0:
            m -= 1
        hull[m] = r
        m += 1
    run = -np.inf
    for i in range(lo, mid + 1):
        a, b = 0, m - 1
        while a < b:
            t = (a + b) // 2
            if _slope(S, hull[t], hull[t + 1]) > _slope(S, i, hull[t]):
                a = t + 1
            else:
                b = t
        g = _slope(S, i, hull[a])
        if a > 0:
            g = max(g, _slope(S, i, hull[a - 1]))
        if a < m - 1:
            g = max(g, _slope(S, i, hull[a + 1]))
        if g > run:
            run = g
        if run > out[i]:
            out[i] = run
    # lower hull of left points
    m = 0
    for i in range(lo, mid + 1):
        while m >= 2 and _cross(S, hull[m - 2], hull[m - 1], i) <= 0.0:
            m -= 1
        hull[m] = i
        m += 1
    for r in range(r0, r1 + 1):
        a, b = 0, m - 1
        while a < b:
            t = (a + b) // 2
            if _slope(S, hull[t], hull[t + 1]) < _slope(S, hull[t], r):
                a = t + 1
            else:
                b = t
        g = _slope(S, hull[a], r)
        if a > 0:
            g = max(g, _slope(S, hull[a - 1], r))
        if a < m - 1:
            g = max(g, _slope(S, hull[a + 1], r))
        best[r] = g
    run = -np.inf
    for r in range(r1, r0 - 1, -1):
        if best[r] > run:
            run = best[r]
        k = r - 1
        if run > out[k]:
            out[k] = run


@njit(cache=True)
def max_avg_hull(v):
    """Divide and conquer: windows crossing a midpoint are scored by tangent
    queries against the convex hull of prefix-sum points; O(n log^2 n)."""
    n = v.shape[0]
    S = prefix(v)
    out = np.full(n, -np.inf)
    hull = np.empty(n + 2, dtype=np.int64)
    best = np.empty(n + 2)
    stack = np.empty((2 * n + 64, 2), dtype=np.int64)
    top = 0
    stack[0, 0] = 0
    stack[0, 1] = n - 1
    top = 1
    while top > 0:
        top -= 1
        lo = stack[top, 0]
        hi = stack[top, 1]
        if hi - lo + 1 <= LEAF:
            _leaf(S, lo, hi, out)
            continue
        mid = (lo + hi) // 2
        _crossing(S, lo, mid, hi, out, hull, best)
        stack[top, 0] = lo
        stack[top, 1] = mid
        top += 1
        stack[top, 0] = mid + 1
        stack[top, 1] = hi
        top += 1
    return out


@njit(cache=True)
def maxcomm_scan(b, af):
    """Per point k: exhaustive (i, j) scan of averages of |b_k - b_m| |f_m|."""
    n = b.shape[0]
    out = np.zeros(n)
    g = np.empty(n)
    for k in range(n):
        for m in range(n):
            g[m] = abs(b[k] - b[m]) * af[m]
        S = prefix(g)
        best = -np.inf
        for i in range(k + 1):
            for j in range(k, n):
                avg = (S[j + 1] - S[i]) / (j - i + 1)
                if avg > best:
                    best = avg
        out[k] = best
    return out


@njit(cache=True)
def _dinkelbach(S, k, n):
    # maximise (S[r] - S[l]) / (r - l) over l <= k < r
    lam = (S[n] - S[0]) / n
    for _ in range(200):
        rb = k + 1
        vb = S[rb] - lam * rb
        for r in range(k + 2, n + 1):
            t = S[r] - lam * r
            if t > vb:
                vb = t
                rb = r
        lb = 0
        va = S[0]
        for l in range(1, k + 1):
            t = S[l] - lam * l
            if t < va:
                va = t
                lb = l
        if vb - va <= 0.0:
            break
        new = (S[rb] - S[lb]) / (rb - lb)
        if new <= lam:
            break
        lam = new
    return lam


@njit(cache=True)
def maxcomm_fast(b, af):
    """Per point k: Dinkelbach iteration on the maximum-density window
    containing k; each step is one O(n) pass."""
    n = b.shape[0]
    out = np.zeros(n)
    g = np.empty(n)
    for k in range(n):
        for m in range(n):
            g[m] = abs(b[k] - b[m]) * af[m]
        S = prefix(g)
        out[k] = _dinkelbach(S, k, n)
    return out


@njit(cache=True)
def moment_osc_fold(v, p):
    """Direct per-window (avg |v - v_w|^p)^(1/p), folded to points; also the
    global maximum.  O(n^3)."""
    n = v.shape[0]
    S = prefix(v)
    out = np.zeros(n)
    gmax = 0.0
    for i in range(n):
        suf = 0.0
        for j in range(n - 1, i - 1, -1):
            cnt = j - i + 1
            mean = (S[j + 1] - S[i]) / cnt
            acc = 0.0
            for m in range(i, j + 1):
                acc += abs(v[m] - mean) ** p
            osc = (acc / cnt) ** (1.0 / p)
            if osc > suf:
                suf = osc
            if suf > out[j]:
                out[j] = suf
        if suf > gmax:
            gmax = suf
    return out, gmax


@njit(cache=True)
def _bit_add(tree, pos, val):
    pos += 1
    n = tree.shape[0]
    while pos < n:
        tree[pos] += val
        pos += pos & (-pos)


@njit(cache=True)
def _bit_sum(tree, pos):
    # sum of entries [0, pos)
    acc = 0.0
    while pos > 0:
        acc += tree[pos]
        pos -= pos & (-pos)
    return acc


@njit(cache=True)
def osc_fenwick(v, lam):
    """Per-window mean oscillation in O(n^2 log n) via Fenwick trees over
    value ranks, using sum |v - c| = 2 sum_{v > c} (v - c) at c = mean.

    With ``lam > 0`` it also returns the largest window average of
    exp(lam |v - v_w|) and whether that overflowed.
    Returns (fold, max_osc, max_exp, saturated).
    """
    n = v.shape[0]
    order = np.argsort(v, kind="mergesort")
    sv = v[order]
    rank = np.empty(n, dtype=np.int64)
    for r in range(n):
        rank[order[r]] = r
    center = 0.5 * (sv[0] + sv[n - 1])
    use_exp = lam > 0.0
    ep = np.zeros(n)
    em = np.zeros(n)
    saturated = False
    if use_exp:
        span = lam * (sv[n - 1] - sv[0])
        if span > EXP_ARG_MAX:
            saturated = True
            use_exp = False
        else:
            for m in range(n):
                ep[m] = math.exp(lam * (v[m] - center))
                em[m] = math.exp(-lam * (v[m] - center))
    cnt_t = np.zeros(n + 1)
    sum_t = np.zeros(n + 1)
    ep_t = np.zeros(n + 1)
    em_t = np.zeros(n + 1)
    out = np.zeros(n)
    gmax = 0.0
    emax = 1.0
    osc = np.empty(n)
    for i in range(n):
        cnt_t[:] = 0.0
        sum_t[:] = 0.0
        if use_exp:
            ep_t[:] = 0.0
            em_t[:] = 0.0
        total = 0.0
        ep_tot = 0.0
        for j in range(i, n):
            r = rank[j]
            _bit_add(cnt_t, r, 1.0)
            _bit_add(sum_t, r, v[j])
            total += v[j]
            cnt = j - i + 1
            c = total / cnt
            pos = np.searchsorted(sv, c, side="right")
            below_cnt = _bit_sum(cnt_t, pos)
            below_sum = _bit_sum(sum_t, pos)
            above = (total - below_sum) - c * (cnt - below_cnt)
            o = 2.0 * above / cnt
            if o < 0.0:
                o = 0.0
            osc[j] = o
            if o > gmax:
                gmax = o
            if use_exp:
                _bit_add(ep_t, r, ep[j])
                _bit_add(em_t, r, em[j])
                ep_tot += ep[j]
                ep_below = _bit_sum(ep_t, pos)
                em_below = _bit_sum(em_t, pos)
                cc = c - center
                val = (math.exp(-lam * cc) * (ep_tot - ep_below) + math.exp(lam * cc) * em_below) / cnt
                if val > emax:
                    emax = val
        suf = 0.0
        for j in range(n - 1, i - 1, -1):
            if osc[j] > suf:
                suf = osc[j]
            if suf > out[j]:
                out[j] = suf
    if saturated or not math.isfinite(emax):
        saturated = True
        emax = np.finfo(np.float64).max
    return out, gmax, emax, saturated


@njit(cache=True)
def l2_osc_max(v):
    """Largest windowed standard deviation, from prefix sums of v and v^2."""
    n = v.shape[0]
    c = 0.0
    for m in range(n):
        c += v[m]
    c /= n
    u = v - c
    S = prefix(u)
    S2 = prefix(u * u)
    best = 0.0
    for i in range(n):
        for j in range(i, n):
            cnt = j - i + 1
            mu = (S[j + 1] - S[i]) / cnt
            var = (S2[j + 1] - S2[i]) / cnt - mu * mu
            if var > best:
                best = var
    return math.sqrt(best)


@njit(cache=True)
def phi_eval(t, kind):
    if kind == LLOGL:
        if t <= 1.0:
            return t
        return t * (1.0 + math.log(t))
    if t > EXP_ARG_MAX:
        return np.inf
    return math.expm1(t)


@njit(cache=True)
def _orlicz_mean(x, lo, hi, lam, kind):
    acc = 0.0
    for m in range(lo, hi + 1):
        acc += phi_eval(x[m] / lam, kind)
    return acc / (hi - lo + 1)


@njit(cache=True)
def luxemburg(x, lo, hi, kind, rtol, maxiter):
    """inf{lam > 0 : mean phi(x/lam) <= 1} over x[lo..hi] (x = |g| >= 0).

    Bracket: phi(t) >= t makes lam = mean(x) infeasible-or-exact; double
    upward until feasible, then bisect to relative width ``rtol``.
    Returns (value, iterations, converged).
    """
    cnt = hi - lo + 1
    mean = 0.0
    for m in range(lo, hi + 1):
        mean += x[m]
    mean /= cnt
    if mean == 0.0:
        return 0.0, 0, True
    lo_l = mean
    if _orlicz_mean(x, lo, hi, lo_l, kind) <= 1.0:
        return lo_l, 0, True
    hi_l = 2.0 * mean
    it = 0
    while _orlicz_mean(x, lo, hi, hi_l, kind) > 1.0:
        lo_l = hi_l
        hi_l *= 2.0
        it += 1
        if it >= maxiter:
            return hi_l, it, False
    while hi_l - lo_l > rtol * hi_l:
        if it >= maxiter:
            return hi_l, it, False
        mid = 0.5 * (lo_l + hi_l)
        if _orlicz_mean(x, lo, hi, mid, kind) <= 1.0:
            hi_l = mid
        else:
            lo_l = mid
        it += 1
    return hi_l, it, True


@njit(cache=True)
def orlicz_fold(x, kind, rtol, maxiter):
    """Largest Luxemburg average over windows containing each point.
    Returns (fold, number of windows whose bisection hit the cap)."""
    n = x.shape[0]
    out = np.zeros(n)
    capped = 0
    vals = np.empty(n)
    for i in range(n):
        for j in range(i, n):
            val, _, ok = luxemburg(x, i, j, kind, rtol, maxiter)
            if not ok:
                capped += 1
            vals[j] = val
        suf = 0.0
        for j in range(n - 1, i - 1, -1):
            if vals[j] > suf:
                suf = vals[j]
            if suf > out[j]:
                out[j] = suf
    return out, capped


@njit(cache=True)
def _excess_through(x, k, lam, kind):
    """True if some window containing k has sum(phi(x/lam) - 1) > 0."""
    n = x.shape[0]
    s = 0.0
    best_l = -np.inf
    for m in range(k, -1, -1):
        s += phi_eval(x[m] / lam, kind) - 1.0
        if s > best_l:
            best_l = s
            if best_l > 0.0:
                return True
    s = 0.0
    best_r = 0.0
    for m in range(k + 1, n):
        s += phi_eval(x[m] / lam, kind) - 1.0
        if s > best_r:
            best_r = s
            if best_l + best_r > 0.0:
                return True
    return False


@njit(cache=True)
def orlicz_fold_levelset(x, mf, kind, rtol, maxiter):
    """Same fold as ``orlicz_fold`` by bisecting lam per point.

    M_phi f(k) <= lam iff every window through k has sum(phi(x/lam) - 1) <= 0,
    a max-subarray test through k costing O(n).  The bracket is
    [M f(k), max x / phi^-1(1)]: the lower end because phi(t) >= t, the upper
    because phi(max x / hi) = 1.  Returns (fold, points that hit the cap).
    """
    n = x.shape[0]
    out = np.zeros(n)
    xmax = 0.0
    for m in range(n):
        if x[m] > xmax:
            xmax = x[m]
    if xmax == 0.0:
        return out, 0
    top = xmax if kind == LLOGL else xmax / math.log(2.0)
    capped = 0
    for k in range(n):
        lo = mf[k]
        if not _excess_through(x, k, lo, kind):
            out[k] = lo
            continue
        hi = top
        it = 0
        while hi - lo > rtol * hi:
            if it >= maxiter:
                capped += 1
                break
            mid = 0.5 * (lo + hi)
            if _excess_through(x, k, mid, kind):
                lo = mid
            else:
                hi = mid
            it += 1
        out[k] = hi
    return out, capped
