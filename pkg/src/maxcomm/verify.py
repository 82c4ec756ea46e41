"""Inequality harness: executable checks, empirical constants and suites.

Two kinds of checks live here.  *Exact* checks are inequalities that hold
verbatim for the discrete window family (sublinearity, the commutator bounds,
Jensen-type sandwiches, the layer-cake identity); any failure is a bug.
*Empirical* checks measure the non-explicit constants and pass on finiteness
plus stability under grid refinement ``h -> h/2``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import maximal as mx
from . import norms
from .corpus import RNG_ALGORITHM, CorpusSpec, gen, random_pairs, rng
from .grid import Grid1D, SampledFn, Window, check_same_grid

PASS, FAIL, DEGENERATE = "pass", "fail", "degenerate"
SUITES = ("exact", "domination", "weaktype", "jn", "orlicz", "lp", "example47")


def geom(lo: float, hi: float, count: int) -> tuple[float, ...]:
    return tuple(float(x) for x in np.geomspace(lo, hi, int(count)))


def parse_lambda_grid(text: str) -> tuple[float, ...]:
    """``geom:lo,hi,count``."""
    kind, _, rest = text.partition(":")
    parts = rest.split(",")
    if kind != "geom" or len(parts) != 3:
        raise ValueError(f"lambda grid must look like 'geom:lo,hi,count', got {text!r}")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if not (0 < lo < hi) or count < 2:
        raise ValueError(f"lambda grid needs 0 < lo < hi and count >= 2, got {text!r}")
    return geom(lo, hi, count)


@dataclass(frozen=True)
class VerifyConfig:
    deltas: tuple = (0.25, 0.5, 0.75)
    eps_list: tuple = (0.3, 0.7)
    lambda_grid: tuple = geom(0.05, 0.8, 16)
    p_list: tuple = (2.0, 4.0)
    bmo_p_list: tuple = (1.0, 2.0, 4.0)
    t_grid: tuple = tuple(float(t) for t in np.linspace(1.0, 6.0, 26))
    exact_tol: float = 1e-12
    layer_cake_tol: float = 1e-8
    refine_tol: float = 0.2
    m2_bracket: tuple = (0.125, 8.0)
    jn_slope_max: float = -0.5
    jn_n: int = 4096
    exp_c: float = 0.1
    weak_bound: float = math.inf
    seed: int = 7
    exact_pairs: int = 100
    exact_n: int = 128
    base_n: int = 1280
    domain: tuple = (-8.0, 2.0)
    bmo_p_n: int = 256
    orlicz_n: int = 128
    orlicz_random_f: int = 20
    orlicz_samples: int = 100
    holder_slack: float = 1e-8
    lux_tol: float = 1e-6
    closed_form_X: float = 8.0
    closed_form_n: int = 5120
    closed_form_tol: float = 0.02
    witness_X: float = 1e4
    witness_h: float = 0.1
    witness_lambdas: tuple = (0.02, 0.2)
    witness_factor: float = 1.5
    witness_closed_form_tol: float = 0.05

    def __post_init__(self):
        for d in self.deltas:
            if not 0 < d < 1:
                raise ValueError(f"deltas: {d} not in (0, 1)")
        for e in self.eps_list:
            if not 0 < e < 1:
                raise ValueError(f"eps_list: {e} not in (0, 1)")
        for name in ("lambda_grid", "t_grid", "witness_lambdas"):
            g = np.asarray(getattr(self, name), dtype=float)
            if g.size < 2 or np.any(g <= 0) or np.any(np.diff(g) <= 0):
                raise ValueError(f"{name}: must be positive and strictly increasing")
        for p in self.p_list:
            if not p > 1:
                raise ValueError(f"p_list: {p} must exceed 1")
        if not self.m2_bracket[0] < self.m2_bracket[1]:
            raise ValueError("m2_bracket: lower edge must be below upper edge")

    def to_dict(self) -> dict:
        out = {}
        for k, v in asdict(self).items():
            if isinstance(v, tuple):
                v = list(v)
            out[k] = _jsonable(v)
        return out

    @classmethod
    def from_dict(cls, rec: dict) -> "VerifyConfig":
        defaults = {f.name: f.default for f in fields(cls)}
        kw = {}
        for k, v in rec.items():
            if k not in defaults:
                raise ValueError(f"unknown config field {k!r}")
            if v is None and defaults[k] == math.inf:
                v = math.inf  # written as null in JSON
            kw[k] = tuple(v) if isinstance(v, list) else v
        return cls(**kw)

    def replace(self, **kw) -> "VerifyConfig":
        d = asdict(self)
        d.update(kw)
        return VerifyConfig(**d)


@dataclass
class InequalityReport:
    name: str
    verdict: str
    constant: float | None = None
    max_ratio: float | None = None
    sweep: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "constant": _jsonable(self.constant),
            "max_ratio": _jsonable(self.max_ratio),
            "sweep": _jsonable(self.sweep),
            "flags": sorted(set(self.flags)),
            "details": _jsonable(self.details),
        }


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in sorted(v.items())}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


def _finite(x) -> bool:
    return x is not None and math.isfinite(x)


def _rel_change(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(b - a) / max(abs(a), abs(b))


# -- single checks ----------------------------------------------------------------

def check_pointwise_domination(lhs: SampledFn, rhs: SampledFn, c: float = 1.0,
                               name: str = "domination", tol: float = 1e-12) -> InequalityReport:
    """lhs <= c rhs pointwise, up to ``tol (1 + |rhs|)``."""
    check_same_grid(lhs, rhs)
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    L, R = lhs.values, rhs.values
    slack = tol * (1.0 + np.abs(R))
    excess = L - c * R - slack
    worst = float(np.max(excess))
    pos = R > 0
    max_ratio = float(np.max(L[pos] / R[pos])) if pos.any() else None
    excluded = int(np.count_nonzero(~pos))
    flags = []
    bad_excluded = (~pos) & (L > slack)
    if bad_excluded.any():
        flags.append("degenerate")
    details = {"c": c, "worst_excess": worst, "excluded_points": excluded,
               "violations": int(np.count_nonzero(excess > 0))}
    if worst > 0:
        verdict = FAIL
    elif not pos.any():
        verdict = DEGENERATE
        flags.append("rhs_zero")
    else:
        verdict = PASS
    return InequalityReport(name, verdict, max_ratio, max_ratio, flags=flags, details=details)


def merge_reports(name: str, reports: list[InequalityReport]) -> InequalityReport:
    """Fold many instances of one check into a single case."""
    verdicts = [r.verdict for r in reports]
    if FAIL in verdicts:
        verdict = FAIL
    elif all(v == DEGENERATE for v in verdicts):
        verdict = DEGENERATE
    else:
        verdict = PASS
    ratios = [r.max_ratio for r in reports if _finite(r.max_ratio)]
    worst = [r.details.get("worst_excess") for r in reports if "worst_excess" in r.details]
    flags = sorted({f for r in reports for f in r.flags})
    details = {
        "instances": len(reports),
        "failures": verdicts.count(FAIL),
        "degenerate": verdicts.count(DEGENERATE),
    }
    if worst:
        details["worst_excess"] = max(worst)
    mr = max(ratios) if ratios else None
    return InequalityReport(name, verdict, mr, mr, flags=flags, details=details)


def estimate_domination_constant(b: SampledFn, f: SampledFn, delta: float,
                                 bmo: float | None = None, cb: SampledFn | None = None,
                                 m2: SampledFn | None = None) -> InequalityReport:
    """R(delta) = max M_delta(C_b f) / (||b||_* M^2 f), and the delta-free
    max C_b f / (||b||_* M^2 f)."""
    check_same_grid(b, f)
    bmo = norms.bmo_seminorm(b) if bmo is None else bmo
    name = f"domination/delta={delta:g}"
    if bmo == 0.0:
        return InequalityReport(name, DEGENERATE, 0.0, 0.0, flags=["bmo_zero"], details={"bmo": 0.0})
    cb = mx.maximal_commutator(b, f) if cb is None else cb
    m2 = mx.iterated_maximal(f) if m2 is None else m2
    md = mx.power_maximal(cb, delta)
    den = bmo * m2.values
    pos = den > 0
    if not pos.any():
        return InequalityReport(name, DEGENERATE, 0.0, 0.0, flags=["f_zero"], details={"bmo": bmo})
    r_delta = float(np.max(md.values[pos] / den[pos]))
    r_free = float(np.max(cb.values[pos] / den[pos]))
    flags = []
    if np.any(md.values[~pos] > 0):
        flags.append("degenerate")
    ok = _finite(r_delta) and _finite(r_free) and not flags
    return InequalityReport(name, PASS if ok else FAIL, r_delta, r_delta, flags=flags,
                            details={"bmo": bmo, "R_delta": r_delta, "R_free": r_free, "delta": delta})


def check_m_eps_sandwich(f: SampledFn, eps: float, tol: float = 1e-12,
                         mf: SampledFn | None = None, m2: SampledFn | None = None) -> InequalityReport:
    """M_eps(M f) <= M^2 f."""
    mf = mx.hl_maximal(f) if mf is None else mf
    m2 = mx.hl_maximal(mf) if m2 is None else m2
    return check_pointwise_domination(mx.power_maximal(mf, eps), m2, 1.0, f"m_eps_sandwich/eps={eps:g}", tol)


def verify_m2_llogl_equivalence(f: SampledFn, bracket=(0.125, 8.0)) -> InequalityReport:
    """Band of M^2 f / M_{L log L} f over points with positive denominator."""
    m2 = mx.iterated_maximal(f)
    ml = mx.orlicz_maximal(f, norms.LLOGL)
    pos = ml.values > 0
    if not pos.any():
        return InequalityReport("m2_llogl", DEGENERATE, None, None, flags=["f_zero"])
    r = m2.values[pos] / ml.values[pos]
    lo, hi = float(np.min(r)), float(np.max(r))
    ok = bracket[0] <= lo and hi <= bracket[1]
    return InequalityReport("m2_llogl", PASS if ok else FAIL, hi, hi,
                            details={"band": [lo, hi], "bracket": list(bracket)})


def weak_type_sweep(Tf: SampledFn, f: SampledFn, lambdas, bound: float = math.inf,
                    name: str = "weak_type") -> InequalityReport:
    """|{|Tf| > lam}| against int (|f|/lam)(1 + log+(|f|/lam)) over a lambda grid."""
    check_same_grid(Tf, f)
    af = np.abs(f.values)
    rows, flags = [], []
    for lam in lambdas:
        if not lam > 0:
            raise ValueError(f"lambda grid must be positive, got {lam}")
        num = norms.distribution_measure(Tf, lam)
        u = af / lam
        den = float(f.h * np.sum(u * (1.0 + np.log(np.maximum(u, 1.0)))))
        if den > 0:
            ratio = num / den
        elif num > 0:
            ratio = math.inf
            flags.append("zero_denominator")
        else:
            ratio = 0.0
        rows.append([float(lam), float(num), den, float(ratio)])
    mr = max(r[3] for r in rows)
    ok = math.isfinite(mr) and mr <= bound
    return InequalityReport(name, PASS if ok else FAIL, mr, mr,
                            sweep=[[r[0], r[3]] for r in rows], flags=flags,
                            details={"table": rows, "bound": bound})


def john_nirenberg_fit(b: SampledFn, w: Window, ts, slope_max: float = -0.5,
                       bmo: float | None = None) -> InequalityReport:
    """Least-squares fit of log m(t) against t, m(t) the normalised level-set
    measure of |b - b_w| on w."""
    w.check(b.n)
    meas = w.measure(b.h)
    m = np.array([norms.level_set_oscillation_measure(b, w, t) / meas for t in ts])
    ts = np.asarray(ts, dtype=float)
    pos = m > 0
    sweep = [[float(t), float(v)] for t, v in zip(ts, m)]
    if np.count_nonzero(pos) < 3:
        return InequalityReport("john_nirenberg", DEGENERATE, None, None, sweep=sweep,
                                flags=["too_few_points"], details={"positive_points": int(pos.sum())})
    slope, intercept = np.polyfit(ts[pos], np.log(m[pos]), 1)
    bmo = norms.bmo_seminorm(b) if bmo is None else bmo
    ok = slope <= slope_max
    return InequalityReport("john_nirenberg", PASS if ok else FAIL, float(-slope), None, sweep=sweep,
                            details={"slope": float(slope), "intercept": float(intercept),
                                     "C1": float(math.exp(intercept)), "C2": float(-slope * bmo),
                                     "bmo": bmo, "slope_max": slope_max, "positive_points": int(pos.sum())})


def verify_exp_integrability(b: SampledFn, lam: float | None = None, c: float = 0.1,
                             bmo: float | None = None) -> InequalityReport:
    """sup over windows of avg exp(lam |b - b_w|), lam defaulting to c / ||b||_*."""
    bmo = norms.bmo_seminorm(b) if bmo is None else bmo
    flags = []
    if lam is None:
        if bmo == 0.0:
            lam = 1.0
            flags.append("bmo_zero")
        else:
            lam = c / bmo
    sup, sat = norms.exp_average_sup(b, lam)
    if sat:
        flags.append("saturated")
    verdict = FAIL if sat else (DEGENERATE if bmo == 0.0 else PASS)
    return InequalityReport("exp_integrability", verdict, sup, None, flags=flags,
                            details={"lambda": lam, "bmo": bmo, "sup": sup})


def verify_necessity_moment(b: SampledFn, w: Window, delta: float, lambdas=None,
                            tol: float = 1e-8) -> InequalityReport:
    """delta-moment of |b - b_w| on w, directly and by the layer-cake sum; also
    the constant C in m(lam) <= C lam^-1 (1 + log+(1/lam)) over ``lambdas``."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    direct = norms.delta_moment(b, w, delta)
    cake = norms.layer_cake_moment(b, w, delta)
    err = abs(direct - cake)
    ok = err <= tol * max(1.0, abs(direct))
    lambdas = geom(0.05, 5.0, 20) if lambdas is None else lambdas
    meas = w.measure(b.h)
    shape = []
    for lam in lambdas:
        m = norms.level_set_oscillation_measure(b, w, lam) / meas
        shape.append([float(lam), m * lam / (1.0 + max(math.log(1.0 / lam), 0.0))])
    C = max(s[1] for s in shape)
    return InequalityReport(f"necessity_moment/delta={delta:g}", PASS if ok else FAIL, C, None, sweep=shape,
                            details={"direct": direct, "layer_cake": cake, "abs_error": err})


def log_plus(x):
    return np.maximum(np.log(x), 0.0)


def verify_log_superadditivity(a: float, c: float) -> bool:
    """1 + log+(a c) <= (1 + log+ a)(1 + log+ c)."""
    if not (a > 0 and c > 0):
        raise ValueError("a and c must be positive")
    return bool(1.0 + log_plus(a * c) <= (1.0 + log_plus(a)) * (1.0 + log_plus(c)) * (1 + 1e-15))


def log_superadditivity_grid(lo: float = 1e-4, hi: float = 1e4, size: int = 100) -> InequalityReport:
    g = np.geomspace(lo, hi, size)
    A, C = np.meshgrid(g, g)
    lhs = 1.0 + log_plus(A * C)
    rhs = (1.0 + log_plus(A)) * (1.0 + log_plus(C))
    ok = bool(np.all(lhs <= rhs * (1 + 1e-15)))
    return InequalityReport("log_superadditivity", PASS if ok else FAIL, float(np.max(lhs / rhs)),
                            float(np.max(lhs / rhs)), details={"grid": [lo, hi, size]})


def lp_symbol_norms(b: SampledFn) -> tuple[float, float]:
    """(||b||_*, ||b+||_* + max b-)."""
    bmo = norms.bmo_seminorm(b)
    return bmo, norms.bmo_seminorm(mx.positive_part(b)) + float(np.max(mx.negative_part(b).values))


def lp_boundedness_ratio(b: SampledFn, f: SampledFn, p: float, symbol_norms=None,
                         cb: SampledFn | None = None, com: SampledFn | None = None) -> InequalityReport:
    """||C_b f||_p / (||b||_* ||f||_p) and ||[M,b] f||_p / ((||b+||_* + max b-) ||f||_p)."""
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    check_same_grid(b, f)
    fp = f.lp_norm(p)
    bmo, c0 = lp_symbol_norms(b) if symbol_norms is None else symbol_norms
    cb_p = (mx.maximal_commutator(b, f) if cb is None else cb).lp_norm(p)
    com_p = (mx.commutator_maximal(b, f) if com is None else com).lp_norm(p)
    flags, ratios = [], {}
    for key, num, den in (("Cb", cb_p, bmo * fp), ("MbCommutator", com_p, c0 * fp)):
        if den > 0:
            ratios[key] = num / den
        elif num == 0:
            ratios[key] = 0.0
            flags.append(f"{key}_zero_denominator")
        else:
            ratios[key] = math.inf
            flags.append(f"{key}_zero_denominator")
    finite = all(math.isfinite(r) for r in ratios.values())
    if not finite:
        verdict = FAIL
    elif flags:
        verdict = DEGENERATE
    else:
        verdict = PASS
    mr = max(ratios.values())
    return InequalityReport(f"lp/p={p:g}", verdict, mr, mr, flags=flags,
                            details={"ratio_Cb": ratios["Cb"], "ratio_MbCommutator": ratios["MbCommutator"],
                                     "bmo": bmo, "C0": c0, "f_norm": fp})


def verify_bmo_p_equivalence(b: SampledFn, ps=(1.0, 2.0, 4.0), tol: float = 1e-12) -> InequalityReport:
    """BMO(p) seminorms relative to BMO(1); the ratio is >= 1 by the power-mean
    inequality, and its upper edge is the empirical equivalence constant."""
    base = norms.bmo_p_seminorm(b, 1.0)
    vals = {float(p): (base if p == 1 else norms.bmo_p_seminorm(b, p)) for p in ps}
    if base == 0.0:
        return InequalityReport("bmo_p", DEGENERATE, 0.0, None, flags=["bmo_zero"],
                                details={"norms": {f"{p:g}": v for p, v in vals.items()}})
    ratios = {p: v / base for p, v in vals.items()}
    lo, hi = min(ratios.values()), max(ratios.values())
    ok = math.isfinite(hi) and lo >= 1.0 - tol
    return InequalityReport("bmo_p", PASS if ok else FAIL, hi, hi,
                            details={"band": [lo, hi], "norms": {f"{p:g}": v for p, v in vals.items()}})


# -- the closed-form example ----------------------------------------------------

MBF_CONST = 2.0 * math.log(2.0) - 1.0


def log_shift_pair(X: float, n: int) -> tuple[SampledFn, SampledFn]:
    """f = indicator of (0, 1) and b = log|1 + x| on the grid [-X, 2]."""
    grid = Grid1D(-X, 2.0, n)
    f = gen(CorpusSpec("indicator", grid, {"u": 0.0, "v": 1.0}))
    b = gen(CorpusSpec("log_shift", grid))
    return b, f


def log_shift_report(X: float = 8.0, n: int | None = None, lambdas=(0.02, 0.2), *, h: float | None = None,
                     closed_form_tol: float = 0.02, factor: float = 1.5) -> InequalityReport:
    """Closed-form errors of M f and M(b f) left of the origin, and the table
    lam * |{|[M,b] f| > lam}| whose growth as lam -> 0 witnesses the failure of
    weak (1,1)."""
    if n is None:
        if h is None:
            raise ValueError("give n or h")
        n = int(round((X + 2.0) / h))
    b, f = log_shift_pair(X, n)
    mf = mx.hl_maximal(f)
    mbf = mx.hl_maximal(b * f)
    com = mbf - b * mf
    x = f.x
    left = (x >= -X) & (x <= -0.5)
    err_m = float(np.max(np.abs(mf.values[left] - 1.0 / (1.0 - x[left]))))
    err_mb = float(np.max(np.abs(mbf.values[left] - MBF_CONST / (1.0 - x[left]))))
    spots = {}
    for x0 in (-1.0, -2.0, -4.0):
        if -X <= x0:
            k = f.grid.nearest_index(x0)
            spots[f"{x0:g}"] = {"x": float(x[k]), "Mf": float(mf.values[k]), "Mbf": float(mbf.values[k]),
                                "commutator": float(com.values[k]),
                                "Mf_closed": 1.0 / (1.0 - x[k]), "Mbf_closed": MBF_CONST / (1.0 - x[k])}
    lambdas = sorted(float(l) for l in lambdas)
    table = [[lam, lam * norms.distribution_measure(com, lam)] for lam in lambdas]
    growth = table[0][1] / table[-1][1] if table[-1][1] > 0 else math.inf
    monotone = all(table[q][1] >= table[q + 1][1] for q in range(len(table) - 1))
    lam_min = lambdas[0]
    x_min = (1.0 / lam_min) * math.log(1.0 / lam_min) if lam_min < 1 else 0.0
    flags = []
    closed_ok = err_m <= closed_form_tol and err_mb <= closed_form_tol
    witness_ok = growth >= factor
    if X < x_min:
        flags.append(f"X_too_small(min_X~{x_min:.4g})")
    if not closed_ok:
        verdict = FAIL
    elif flags:
        verdict = DEGENERATE
    else:
        verdict = PASS if witness_ok else FAIL
    return InequalityReport(
        "log_shift_example", verdict, growth, max(err_m, err_mb), sweep=table, flags=flags,
        details={"X": X, "n": n, "h": f.h, "err_Mf": err_m, "err_Mbf": err_mb,
                 "closed_form_tol": closed_form_tol, "growth": growth, "factor": factor,
                 "monotone": monotone, "spots": spots, "closed_form_pass": closed_ok,
                 "witness_pass": witness_ok, "min_admissible_X": x_min})


# -- oracles used by the Orlicz suite ---------------------------------------------

def luxemburg_grid_scan(x: np.ndarray, phi, points: int = 10_000, stages: int = 2) -> float:
    """Smallest feasible lambda on nested geometric grids (no bisection)."""
    phi = norms.as_orlicz(phi)
    x = np.abs(np.asarray(x, dtype=float))
    if not np.any(x > 0):
        return 0.0
    lo, hi = 0.5 * x.mean(), 2.0 * x.max() / math.log(2.0)
    for _ in range(stages):
        lams = np.geomspace(lo, hi, points)
        with np.errstate(over="ignore"):
            means = phi(x[None, :] / lams[:, None]).mean(axis=1)
        feas = np.flatnonzero(means <= 1.0)
        k = int(feas[0])
        if k == 0:
            return float(lams[0])
        lo, hi = lams[k - 1], lams[k]
    return float(hi)


# -- suites ---------------------------------------------------------------------

def _grid(cfg: VerifyConfig, n: int) -> Grid1D:
    return Grid1D(cfg.domain[0], cfg.domain[1], n)


def default_corpus(grid: Grid1D) -> tuple[list[CorpusSpec], list[CorpusSpec]]:
    """Symbols b and operands f used by the empirical suites."""
    bs = [
        CorpusSpec("log_shift", grid),
        CorpusSpec("indicator", grid, {"u": -2.0, "v": 0.0}),
        CorpusSpec("lacunary_bmo", grid, {"terms": 6}, seed=11),
        CorpusSpec("const", grid, {"c": 1.0}),
    ]
    fs = [
        CorpusSpec("indicator", grid, {"u": 0.0, "v": 1.0}),
        CorpusSpec("gauss", grid, {"center": 0.5, "width": 0.5}),
        CorpusSpec("random_step", grid, {"levels": 4, "depth": 3}, seed=7),
    ]
    return bs, fs


def _corpus(cfg: VerifyConfig, corpus, n: int):
    grid = _grid(cfg, n)
    if corpus is None:
        return default_corpus(grid)
    bs = [s.with_grid(grid) for s, role in corpus if role in ("b", "both")]
    fs = [s.with_grid(grid) for s, role in corpus if role in ("f", "both")]
    return bs, fs


def _case(rep: InequalityReport, name: str) -> InequalityReport:
    rep.name = name
    return rep


def suite_exact(cfg: VerifyConfig, corpus=None) -> list[InequalityReport]:
    grid = Grid1D(0.0, 1.0, cfg.exact_n)
    tol = cfg.exact_tol
    pairs = random_pairs(cfg.exact_pairs, grid, cfg.seed)
    win_rng = rng(cfg.seed + 1)
    buckets: dict[str, list[InequalityReport]] = {}

    def add(name, rep):
        buckets.setdefault(name, []).append(rep)

    for bs, fs in pairs:
        b, f = gen(bs), gen(fs)
        ab = abs(b)
        mf = mx.hl_maximal(f)
        mb = mx.hl_maximal(b)
        m2 = mx.hl_maximal(mf)
        cb = mx.maximal_commutator(b, f)
        cab = mx.maximal_commutator(ab, f)
        com = mx.commutator_maximal(b, f)
        com_abs = mx.commutator_maximal(ab, f)
        bminus = mx.negative_part(b)
        add("exact/commutator_pointwise_bound", check_pointwise_domination(abs(com), cb + 2.0 * bminus * mf, 1.0, "", tol))
        add("exact/sublinear_lipschitz", check_pointwise_domination(abs(mf - mb), mx.hl_maximal(f - b), 1.0, "", tol))
        add("exact/commutator_nonneg_symbol", check_pointwise_domination(abs(com_abs), cab, 1.0, "", tol))
        add("exact/C_abs_b_le_C_b", check_pointwise_domination(cab, cb, 1.0, "", tol))
        add("exact/sharp_le_2M", check_pointwise_domination(mx.sharp_maximal(f), mf, 2.0, "", tol))
        add("exact/f_le_Mf", check_pointwise_domination(abs(f), mf, 1.0, "", tol))
        add("exact/M_sublinear", check_pointwise_domination(mx.hl_maximal(f + b), mf + mb, 1.0, "", tol))
        for d in cfg.deltas:
            add(f"exact/Cb_le_Mdelta_Cb/delta={d:g}",
                check_pointwise_domination(cb, mx.power_maximal(cb, d), 1.0, "", tol))
        for e in cfg.eps_list:
            add(f"exact/m_eps_sandwich/eps={e:g}", check_m_eps_sandwich(f, e, tol, mf=mf, m2=m2))
        i, j = sorted(int(v) for v in win_rng.integers(0, grid.n, size=2))
        for w in (Window(i, j), Window.full(grid.n)):
            for d in cfg.deltas:
                add(f"exact/layer_cake/delta={d:g}", verify_necessity_moment(b, w, d, tol=cfg.layer_cake_tol))
    cases = [merge_reports(name, reps) for name, reps in buckets.items()]
    cases.append(_case(log_superadditivity_grid(), "exact/log_superadditivity"))
    return cases


def _refinement_case(name: str, v1: float, v2: float, tol: float, extra=None) -> InequalityReport:
    change = _rel_change(v1, v2)
    ok = math.isfinite(v1) and math.isfinite(v2) and change <= tol
    details = {"coarse": v1, "fine": v2, "rel_change": change, "tol": tol}
    details.update(extra or {})
    return InequalityReport(name, PASS if ok else FAIL, v2, v2, details=details)


def domination_refinement(bspec: CorpusSpec, fspec: CorpusSpec, deltas, n: int, tol: float = 0.2
                          ) -> list[InequalityReport]:
    """R(delta) and the delta-free R at n and 2n points."""
    runs = []
    for m in (n, 2 * n):
        grid = Grid1D(bspec.grid.a, bspec.grid.b, m)
        b, f = gen(bspec.with_grid(grid)), gen(fspec.with_grid(grid))
        bmo = norms.bmo_seminorm(b)
        cb = mx.maximal_commutator(b, f) if bmo > 0 else None
        m2 = mx.iterated_maximal(f)
        runs.append([estimate_domination_constant(b, f, d, bmo=bmo, cb=cb, m2=m2) for d in deltas])
    tag = f"{bspec.label}|{fspec.label}"
    out = []
    for d, r1, r2 in zip(deltas, runs[0], runs[1]):
        if r1.verdict == DEGENERATE:
            out.append(InequalityReport(f"domination/{tag}/delta={d:g}", DEGENERATE, 0.0, 0.0,
                                        flags=list(r1.flags)))
            continue
        out.append(_refinement_case(f"domination/{tag}/delta={d:g}", r1.constant, r2.constant, tol,
                                    {"bmo_fine": r2.details["bmo"]}))
    r1, r2 = runs[0][0], runs[1][0]
    if r1.verdict != DEGENERATE:
        out.append(_refinement_case(f"domination/{tag}/delta_free", r1.details["R_free"],
                                    r2.details["R_free"], tol))
    return out


def suite_domination(cfg: VerifyConfig, corpus=None) -> list[InequalityReport]:
    bs, fs = _corpus(cfg, corpus, cfg.base_n)
    cases = []
    for bspec in bs:
        for fspec in fs:
            cases.extend(domination_refinement(bspec, fspec, cfg.deltas, cfg.base_n, cfg.refine_tol))
    return cases


def weak_type_operators(b: SampledFn | None, f: SampledFn) -> dict[str, SampledFn]:
    ops = {"M2": mx.iterated_maximal(f)}
    if b is not None:
        ops["Cb"] = mx.maximal_commutator(b, f)
        ops["MbCommutator"] = abs(mx.commutator_maximal(b, f))
    return ops


def weak_type_refinement(bspec: CorpusSpec | None, fspec: CorpusSpec, lambdas, n: int,
                         tol: float = 0.2, bound: float = math.inf) -> list[InequalityReport]:
    runs = []
    for m in (n, 2 * n):
        grid = Grid1D(fspec.grid.a, fspec.grid.b, m)
        f = gen(fspec.with_grid(grid))
        b = gen(bspec.with_grid(grid)) if bspec is not None else None
        runs.append({k: weak_type_sweep(T, f, lambdas, bound) for k, T in weak_type_operators(b, f).items()})
    out = []
    for key in runs[0]:
        tag = fspec.label if key == "M2" else f"{bspec.label}|{fspec.label}"
        r1, r2 = runs[0][key], runs[1][key]
        case = _refinement_case(f"weaktype/{key}/{tag}", r1.constant, r2.constant, tol)
        case.sweep = r2.sweep
        case.details["table"] = r2.details["table"]
        if r1.failed or r2.failed:
            case.verdict = FAIL
        out.append(case)
    return out


def suite_weaktype(cfg: VerifyConfig, corpus=None) -> list[InequalityReport]:
    bs, fs = _corpus(cfg, corpus, cfg.base_n)
    cases = []
    for fspec in fs:
        cases.extend(weak_type_refinement(None, fspec, cfg.lambda_grid, cfg.base_n, cfg.refine_tol, cfg.weak_bound))
    for bspec in bs:
        for fspec in fs:
            reps = weak_type_refinement(bspec, fspec, cfg.lambda_grid, cfg.base_n, cfg.refine_tol, cfg.weak_bound)
            cases.extend(r for r in reps if not r.name.startswith("weaktype/M2/"))
    return cases


def jn_example(n: int = 4096) -> SampledFn:
    """log|x| on [-1, 1]."""
    return gen(CorpusSpec("log_sing", Grid1D(-1.0, 1.0, n), {"c": 0.0}))


def suite_jn(cfg: VerifyConfig, corpus=None) -> list[InequalityReport]:
    b = jn_example(cfg.jn_n)
    bmo = norms.bmo_seminorm(b)
    cases = [
        _case(john_nirenberg_fit(b, Window.full(b.n), cfg.t_grid, cfg.jn_slope_max, bmo), "jn/log_abs/fit"),
        _case(verify_exp_integrability(b, c=cfg.exp_c, bmo=bmo), "jn/log_abs/exp_integrability"),
    ]
    bs, _ = _corpus(cfg, corpus, cfg.bmo_p_n)
    for bspec in bs:
        bb = gen(bspec)
        cases.append(_case(verify_bmo_p_equivalence(bb, cfg.bmo_p_list, cfg.exact_tol), f"jn/bmo_p/{bspec.label}"))
        cases.append(_case(verify_exp_integrability(bb, c=cfg.exp_c), f"jn/exp_integrability/{bspec.label}"))
        for d in cfg.deltas:
            rep = verify_necessity_moment(bb, Window.full(bb.n), d, tol=cfg.layer_cake_tol)
            cases.append(_case(rep, f"jn/necessity_moment/{bspec.label}/delta={d:g}"))
    return cases


def suite_orlicz(cfg: VerifyConfig, corpus=None) -> list[InequalityReport]:
    r = rng(cfg.seed + 2)
    n = 32
    grid = Grid1D(0.0, 1.0, n)
    worst_lux = 0.0
    for q in range(cfg.orlicz_samples):
        g = SampledFn(grid, r.uniform(-3.0, 3.0, size=n) * r.integers(0, 2, size=n))
        i, j = sorted(int(v) for v in r.integers(0, n, size=2))
        phi = norms.LLOGL if q % 2 == 0 else norms.EXPL
        got = norms.luxemburg_average(g, Window(i, j), phi)
        ref = luxemburg_grid_scan(g.values[i : j + 1], phi)
        scale = max(abs(ref), 1e-300)
        worst_lux = max(worst_lux, abs(got - ref) / scale if ref else abs(got))
    cases = [InequalityReport("orlicz/luxemburg_vs_grid", PASS if worst_lux <= cfg.lux_tol else FAIL,
                              worst_lux, None, details={"max_rel_error": worst_lux, "tol": cfg.lux_tol,
                                                        "samples": cfg.orlicz_samples})]
    worst = 0.0
    for _ in range(cfg.orlicz_samples):
        f = SampledFn(grid, r.uniform(-3.0, 3.0, size=n))
        g = SampledFn(grid, r.uniform(-3.0, 3.0, size=n))
        i, j = sorted(int(v) for v in r.integers(0, n, size=2))
        w = Window(i, j)
        lhs = float(np.mean(np.abs(f.values[i : j + 1] * g.values[i : j + 1])))
        rhs = norms.luxemburg_average(f, w, norms.LLOGL) * norms.luxemburg_average(g, w, norms.EXPL)
        worst = max(worst, lhs / rhs if rhs > 0 else (math.inf if lhs > 0 else 0.0))
    ok = worst <= 1.0 + cfg.holder_slack
    cases.append(InequalityReport("orlicz/generalized_holder", PASS if ok else FAIL, worst, worst,
                                  details={"samples": cfg.orlicz_samples, "slack": cfg.holder_slack}))
    one = SampledFn(Grid1D(0.0, 1.0, 8), np.ones(8))
    w = Window.full(8)
    e_exp = abs(norms.luxemburg_average(one, w, norms.EXPL) - 1.0 / math.log(2.0))
    e_llog = abs(norms.luxemburg_average(one, w, norms.LLOGL) - 1.0)
    cases.append(InequalityReport("orlicz/closed_forms", PASS if max(e_exp, e_llog) <= 1e-9 else FAIL,
                                  None, None, details={"ExpL_error": e_exp, "LlogL_error": e_llog}))
    _, fs = _corpus(cfg, corpus, cfg.orlicz_n)
    fgrid = _grid(cfg, cfg.orlicz_n)
    fs = list(fs) + [CorpusSpec("random_uniform", fgrid, {"lo": -2.0, "hi": 2.0}, seed=cfg.seed * 1000 + q)
                     for q in range(cfg.orlicz_random_f)]
    bands = []
    for fspec in fs:
        rep = verify_m2_llogl_equivalence(gen(fspec), cfg.m2_bracket)
        bands.append(_case(rep, f"orlicz/m2_llogl/{fspec.label}"))
    cases.extend(bands)
    lo = min((c.details["band"][0] for c in bands if "band" in c.details), default=None)
    hi = max((c.details["band"][1] for c in bands if "band" in c.details), default=None)
    ok = lo is not None and cfg.m2_bracket[0] <= lo and hi <= cfg.m2_bracket[1]
    cases.append(InequalityReport("orlicz/m2_llogl_band", PASS if ok else FAIL, hi, hi,
                                  details={"band": [lo, hi], "bracket": list(cfg.m2_bracket)}))
    return cases


def suite_lp(cfg: VerifyConfig, corpus=None) -> list[InequalityReport]:
    cases = []
    for m, tag in ((cfg.base_n, "coarse"), (2 * cfg.base_n, "fine")):
        bs, fs = _corpus(cfg, corpus, m)
        for bspec in bs:
            b = gen(bspec)
            sn = lp_symbol_norms(b)
            for fspec in fs:
                f = gen(fspec)
                cb, com = mx.maximal_commutator(b, f), mx.commutator_maximal(b, f)
                for p in cfg.p_list:
                    rep = lp_boundedness_ratio(b, f, p, sn, cb, com)
                    cases.append(_case(rep, f"lp/{tag}/{bspec.label}|{fspec.label}/p={p:g}"))
    # record refinement drift next to the fine-grid cases
    by_name = {c.name: c for c in cases}
    for c in cases:
        if c.name.startswith("lp/fine/"):
            coarse = by_name.get(c.name.replace("lp/fine/", "lp/coarse/", 1))
            if coarse is not None and _finite(coarse.constant) and _finite(c.constant):
                c.details["rel_change_vs_coarse"] = _rel_change(coarse.constant, c.constant)
    return cases


def suite_closed_form(cfg: VerifyConfig, corpus=None) -> list[InequalityReport]:
    a = log_shift_report(cfg.closed_form_X, cfg.closed_form_n, cfg.witness_lambdas,
                         closed_form_tol=cfg.closed_form_tol, factor=cfg.witness_factor)
    b = log_shift_report(cfg.witness_X, None, cfg.witness_lambdas, h=cfg.witness_h,
                         closed_form_tol=cfg.witness_closed_form_tol, factor=cfg.witness_factor)
    return [_case(a, "example47/closed_forms"), _case(b, "example47/witness")]


SUITE_FUNCS = {
    "exact": suite_exact,
    "domination": suite_domination,
    "weaktype": suite_weaktype,
    "jn": suite_jn,
    "orlicz": suite_orlicz,
    "lp": suite_lp,
    "example47": suite_closed_form,
}


def run_suite(name: str, cfg: VerifyConfig | None = None, corpus=None) -> dict:
    """Run a suite (or ``"all"``) and return the report payload.

    ``corpus`` is an optional list of ``(CorpusSpec, role)`` with role in
    ``{"b", "f", "both"}``; the defaults come from :func:`default_corpus`.
    """
    cfg = cfg or VerifyConfig()
    names = SUITES if name == "all" else (name,)
    cases = []
    for s in names:
        if s not in SUITE_FUNCS:
            raise ValueError(f"unknown suite {s!r}; expected one of {SUITES + ('all',)}")
        cases.extend(SUITE_FUNCS[s](cfg, corpus))
    cases.sort(key=lambda c: c.name)
    return {"suite": name, "config": cfg.to_dict(), "rng": RNG_ALGORITHM,
            "cases": [c.to_dict() for c in cases]}


def suite_passed(payload: dict) -> bool:
    return all(c["verdict"] != FAIL for c in payload["cases"])


def dumps_report(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=1, allow_nan=False) + "\n"


def write_report(payload: dict, path) -> None:
    Path(path).write_text(dumps_report(payload))


def write_sweep_csv(rep: InequalityReport, path) -> None:
    rows = rep.details.get("table")
    if rows is None:
        raise ValueError(f"report {rep.name!r} carries no sweep table")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lambda", "numerator", "denominator", "ratio"])
        for row in rows:
            w.writerow([f"{v:.17e}" for v in row])
