"""Seeded test-function generators.

Randomness comes from numpy's PCG64 bit generator seeded with the entry's
64-bit seed, so a ``CorpusSpec`` reproduces the same samples anywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grid import CLOSED_FORMS, Grid1D, SampledFn

RNG_ALGORITHM = "numpy.PCG64"

# positional parameter names for the mini-syntax, in order
PARAMS: dict[str, tuple[str, ...]] = {
    "const": ("c",),
    "indicator": ("u", "v"),
    "log_shift": (),
    "log_sing": ("c",),
    "gauss": ("center", "width"),
    "random_step": ("levels", "depth"),
    "random_uniform": ("lo", "hi"),
    "lacunary_bmo": ("terms",),
}
DEFAULTS: dict[str, dict] = {
    "const": {"c": 1.0},
    "indicator": {"u": 0.0, "v": 1.0},
    "log_shift": {},
    "log_sing": {"c": 0.0},
    "gauss": {"center": 0.0, "width": 1.0},
    "random_step": {"levels": 4, "depth": 3},
    "random_uniform": {"lo": -1.0, "hi": 1.0},
    "lacunary_bmo": {"terms": 6},
}
SEEDED = {"random_step", "random_uniform", "lacunary_bmo"}


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


@dataclass(frozen=True)
class CorpusSpec:
    generator: str
    grid: Grid1D
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.generator not in PARAMS:
            raise ValueError(f"generator: unknown {self.generator!r}; known: {sorted(PARAMS)}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed: must be a 64-bit unsigned integer, got {self.seed}")
        allowed = set(PARAMS[self.generator]) | {"amplitude"}
        for key in self.params:
            if key not in allowed:
                raise ValueError(f"params.{key}: not a parameter of {self.generator}")

    def resolved(self) -> dict:
        p = dict(DEFAULTS[self.generator])
        p.update(self.params)
        return p

    def with_grid(self, grid: Grid1D) -> "CorpusSpec":
        return CorpusSpec(self.generator, grid, dict(self.params), self.seed)

    @property
    def label(self) -> str:
        vals = ",".join(f"{self.resolved()[k]:g}" for k in PARAMS[self.generator])
        s = self.generator + (f":{vals}" if vals else "")
        return s + (f":{self.seed}" if self.generator in SEEDED else "")

    def to_dict(self) -> dict:
        return {"generator": self.generator, "params": dict(self.params), "seed": int(self.seed),
                "grid": self.grid.to_dict()}

    @classmethod
    def from_dict(cls, rec: dict) -> "CorpusSpec":
        try:
            g = rec["grid"]
            grid = Grid1D(g["a"], g["b"], g["n"])
        except (KeyError, TypeError):
            raise ValueError("grid: missing or malformed") from None
        return cls(rec["generator"], grid, dict(rec.get("params", {})), int(rec.get("seed", 0)))

    @classmethod
    def parse(cls, text: str, grid: Grid1D) -> "CorpusSpec":
        """``name[:p1,p2,...][:seed]``, e.g. ``indicator:0,1`` or ``random_step:4:7``."""
        parts = text.split(":")
        name = parts[0].strip()
        if name not in PARAMS:
            raise ValueError(f"generator: unknown {name!r}; known: {sorted(PARAMS)}")
        names = PARAMS[name]
        raw = [p for p in parts[1].split(",") if p.strip()] if len(parts) > 1 else []
        if len(raw) > len(names):
            raise ValueError(f"params: {name} takes at most {len(names)} parameters, got {len(raw)}")
        params = {k: float(v) for k, v in zip(names, raw)}
        seed = int(parts[2]) if len(parts) > 2 else 0
        if len(parts) > 3:
            raise ValueError(f"spec {text!r}: expected name[:params][:seed]")
        return cls(name, grid, params, seed)


def _check_singularity(x: np.ndarray, c: float, field_name: str) -> None:
    if np.any(x == c):
        raise ValueError(f"{field_name}: singularity at {c} coincides with a sample point")


def gen(spec: CorpusSpec) -> SampledFn:
    """Materialise a corpus entry on its grid."""
    p = spec.resolved()
    amp = float(p.pop("amplitude", 1.0))
    x = spec.grid.points
    name = spec.generator
    if name == "log_shift":
        _check_singularity(x, -1.0, "grid")
    if name == "log_sing":
        _check_singularity(x, float(p["c"]), "params.c")
    if name in CLOSED_FORMS:
        keys = PARAMS[name]
        vals = CLOSED_FORMS[name](x, *(float(p[k]) for k in keys))
    elif name == "random_step":
        levels, depth = int(p["levels"]), int(p["depth"])
        if levels < 1:
            raise ValueError(f"params.levels: must be >= 1, got {levels}")
        if depth < 0:
            raise ValueError(f"params.depth: must be >= 0, got {depth}")
        blocks = 2**depth
        draws = rng(spec.seed).integers(0, levels, size=blocks)
        idx = np.minimum(((x - spec.grid.a) / spec.grid.length * blocks).astype(np.int64), blocks - 1)
        vals = draws[idx].astype(np.float64)
    elif name == "random_uniform":
        lo, hi = float(p["lo"]), float(p["hi"])
        if not hi > lo:
            raise ValueError(f"params.hi: must exceed lo ({lo}), got {hi}")
        vals = rng(spec.seed).uniform(lo, hi, size=x.shape[0])
    elif name == "lacunary_bmo":
        terms = int(p["terms"])
        if terms < 1:
            raise ValueError(f"params.terms: must be >= 1, got {terms}")
        signs = rng(spec.seed).choice(np.array([-1.0, 1.0]), size=terms)
        m = np.arange(1, terms + 1)
        vals = (signs[:, None] * np.cos(np.ldexp(1.0, m)[:, None] * x[None, :])).sum(axis=0)
    else:  # pragma: no cover - guarded by CorpusSpec
        raise ValueError(f"generator: unknown {name!r}")
    return SampledFn(spec.grid, amp * vals)


def load_manifest(path) -> list[CorpusSpec]:
    recs = json.loads(Path(path).read_text())
    if not isinstance(recs, list):
        raise ValueError(f"{path}: manifest must be a JSON list of corpus specs")
    return [CorpusSpec.from_dict(r) for r in recs]


def save_manifest(specs, path) -> None:
    Path(path).write_text(json.dumps([s.to_dict() for s in specs], indent=2) + "\n")


def random_pairs(count: int, grid: Grid1D, seed: int) -> list[tuple[CorpusSpec, CorpusSpec]]:
    """Seeded (b, f) specs mixing every generator family."""
    r = rng(seed)
    pairs = []
    b_kinds = ("random_uniform", "random_step", "lacunary_bmo", "log_sing", "indicator")
    f_kinds = ("random_uniform", "random_step", "indicator", "gauss")
    lo, hi = grid.a, grid.b
    for _ in range(count):
        specs = []
        for kinds in (b_kinds, f_kinds):
            kind = kinds[int(r.integers(len(kinds)))]
            sub = int(r.integers(2**63))
            amp = float(r.uniform(0.5, 3.0))
            if kind == "random_uniform":
                params = {"lo": -2.0, "hi": 2.0}
            elif kind == "random_step":
                params = {"levels": int(r.integers(2, 6)), "depth": int(r.integers(1, 6))}
            elif kind == "lacunary_bmo":
                params = {"terms": int(r.integers(2, 8))}
            elif kind == "log_sing":
                # half-way between two sample points, never on one
                k = int(r.integers(grid.n - 1))
                params = {"c": float(grid.a + (k + 1) * grid.h)}
            elif kind == "indicator":
                u, v = sorted(r.uniform(lo, hi, size=2))
                params = {"u": float(u), "v": float(v)}
            else:
                params = {"center": float(r.uniform(lo, hi)), "width": float(r.uniform(0.05, 0.5) * grid.length)}
            params["amplitude"] = amp if kinds is f_kinds else float(r.choice([-1.0, 1.0]) * amp)
            specs.append(CorpusSpec(kind, grid, params, sub))
        pairs.append((specs[0], specs[1]))
    return pairs
