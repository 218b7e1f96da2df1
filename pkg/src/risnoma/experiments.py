"""Config-driven sweep runner writing deterministic CSV result tables."""

from __future__ import annotations

import concurrent.futures
import dataclasses
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .channels import perturb_csi, sample_channels
from .config import DomainError, Geometry, SystemConfig
from .metrics import SCHEME_IDS, run_scheme, trial_rng

CSV_COLUMNS = (
    "sweep_var",
    "sweep_value",
    "scheme",
    "ns",
    "nr",
    "m",
    "trials",
    "avg_secrecy_rate",
    "avg_secrecy_rate_normalized",
    "sop",
    "infeasible_fraction",
    "mean_alg1_iters",
    "sem_secrecy_rate",
    "avg_h1",
    "avg_h2",
    "avg_rel_error",
    "seed",
)

SCENARIOS = ("internal", "external_no_csi", "external_csi", "dynamic_users", "imperfect_csi")

SWEEP_VARS = ("d_u2", "d_u1", "d_rx", "psi", "p_dbm", "t", "ns", "nr")


@dataclass(frozen=True)
class Series:
    """One plotted line: a scheme, optionally with its own antenna or
    eavesdropper counts (token forms ``s``, ``s@NSxNR``, ``s@NSxNR@mM``)."""

    scheme: str
    ns: Optional[int] = None
    nr: Optional[int] = None
    m: Optional[int] = None

    def token(self) -> str:
        tok = self.scheme
        if self.ns is not None or self.nr is not None:
            tok += f"@{self.ns}x{self.nr}"
        if self.m is not None:
            tok += f"@m{self.m}"
        return tok

    @classmethod
    def parse(cls, token: str) -> "Series":
        parts = [p.strip() for p in token.split("@")]
        scheme = parts[0]
        ns = nr = m = None
        try:
            for part in parts[1:]:
                if part.startswith("m"):
                    m = int(part[1:])
                else:
                    ns_s, _, nr_s = part.partition("x")
                    ns, nr = int(ns_s), int(nr_s)
        except ValueError as exc:
            raise DomainError(f"bad series token '{token}'") from exc
        return cls(scheme=scheme, ns=ns, nr=nr, m=m)


@dataclass(frozen=True)
class Experiment:
    scenario: str
    sweep_var: str
    sweep_start: float
    sweep_stop: float
    sweep_step: float
    series: tuple[Series, ...]
    trials: int = 1000
    seed: int = 1
    psi: float = 0.5          # prescribed split when not swept
    t: float = 0.0            # CSI error ratio when not swept
    d_rx: float = 0.5
    d_ry: float = 0.5
    d_u1: float = 2.0
    d_u2: float = 3.0
    m: int = 0
    eav_range: tuple[float, float] = (1.0, 1.5)
    # dynamic-user circles: (center_x, radius); centers sit on the x-axis
    dynamic_radius: float = 0.5
    eav_center: float = 2.0
    u1_center: float = 3.0
    u2_center: float = 4.0
    overrides: tuple[tuple[str, str], ...] = ()

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise DomainError(f"unknown scenario '{self.scenario}'")
        if self.sweep_var not in SWEEP_VARS:
            raise DomainError(f"unknown sweep variable '{self.sweep_var}'")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if not self.series:
            raise DomainError("at least one series is required")
        if self.sweep_step <= 0 or self.sweep_stop < self.sweep_start:
            raise DomainError("sweep range must be nonempty with positive step")
        if not math.isfinite(self.sweep_start) or not math.isfinite(self.sweep_stop):
            raise DomainError("sweep range must be finite")
        for s in self.series:
            if s.scheme not in SCHEME_IDS:
                raise DomainError(f"unknown scheme '{s.scheme}'")
        needs_eavs = {"proposed_csi", "scheme4", "scheme6"}
        for s in self.series:
            m = s.m if s.m is not None else self.m
            if s.scheme in needs_eavs and m == 0:
                raise DomainError("eavesdropper-CSI schemes require m >= 1")
        base = self.base_config()
        an_schemes = {"proposed_no_csi", "scheme3", "proposed_csi", "scheme4", "scheme6"}
        for s in self.series:
            ns = s.ns if s.ns is not None else base.ns
            if s.scheme in an_schemes and ns < 3:
                raise DomainError(f"series '{s.token()}' needs Ns >= 3")

    def sweep_values(self) -> list[float]:
        n = int(round((self.sweep_stop - self.sweep_start) / self.sweep_step)) + 1
        return [round(self.sweep_start + i * self.sweep_step, 12) for i in range(n)]

    def base_config(self) -> SystemConfig:
        kwargs: dict = {"m": self.m}
        fields = {f.name for f in dataclasses.fields(SystemConfig)}
        for key, val in self.overrides:
            if key in fields:
                kwargs[key] = _coerce(SystemConfig, key, val)
        return SystemConfig(**kwargs)


def _coerce(cls, key: str, val: str):
    for f in dataclasses.fields(cls):
        if f.name == key:
            if f.type in ("int", int):
                return int(val)
            if f.type in ("float", float):
                return float(val)
            return val
    raise DomainError(f"unknown config key '{key}'")


# --- flat key=value config format -------------------------------------------

_SCALAR_KEYS = {
    "scenario": str,
    "sweep_var": str,
    "sweep_start": float,
    "sweep_stop": float,
    "sweep_step": float,
    "trials": int,
    "seed": int,
    "psi": float,
    "t": float,
    "d_rx": float,
    "d_ry": float,
    "d_u1": float,
    "d_u2": float,
    "m": int,
    "dynamic_radius": float,
    "eav_center": float,
    "u1_center": float,
    "u2_center": float,
}


def parse_config(text: str) -> Experiment:
    """Parse the flat ``key = value`` format (lists comma-separated)."""
    data: dict = {}
    overrides: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DomainError(f"line {lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key in _SCALAR_KEYS:
            try:
                data[key] = _SCALAR_KEYS[key](val)
            except ValueError as exc:
                raise DomainError(f"bad value for '{key}': {val!r}") from exc
        elif key == "series" or key == "schemes":
            data["series"] = tuple(Series.parse(tok) for tok in val.split(",") if tok.strip())
        elif key == "eav_range":
            lo, _, hi = val.partition(",")
            data["eav_range"] = (float(lo), float(hi))
        elif key.startswith("override."):
            overrides.append((key[len("override."):], val))
        else:
            raise DomainError(f"unknown config key '{key}'")
    missing = {"scenario", "sweep_var", "sweep_start", "sweep_stop", "sweep_step", "series"} - set(data)
    if missing:
        raise DomainError(f"missing config keys: {', '.join(sorted(missing))}")
    exp = Experiment(overrides=tuple(overrides), **data)
    exp.validate()
    return exp


def serialize_config(exp: Experiment) -> str:
    """Inverse of :func:`parse_config` (round-trips exactly)."""
    lines = []
    for key in _SCALAR_KEYS:
        lines.append(f"{key} = {getattr(exp, key)!r}".replace("'", ""))
    lines.append(f"series = {', '.join(s.token() for s in exp.series)}")
    lines.append(f"eav_range = {exp.eav_range[0]}, {exp.eav_range[1]}")
    for key, val in exp.overrides:
        lines.append(f"override.{key} = {val}")
    return "\n".join(lines) + "\n"


# --- presets mirroring the simulation-study figures --------------------------

def _preset_fig4() -> Experiment:
    return Experiment(
        scenario="internal",
        sweep_var="d_u2",
        sweep_start=2.5,
        sweep_stop=4.0,
        sweep_step=0.1,
        series=(
            Series("proposed_internal", 8, 16),
            Series("proposed_internal", 16, 16),
            Series("proposed_internal", 16, 32),
            Series("baseline_alg4", 16, 16),
        ),
        trials=10_000,
        d_rx=0.5,
        d_u1=2.0,
    )


def _preset_fig5() -> Experiment:
    return Experiment(
        scenario="internal",
        sweep_var="d_rx",
        sweep_start=-1.0,
        sweep_stop=3.0,
        sweep_step=0.25,
        series=(
            Series("proposed_internal", 16, 16),
            Series("proposed_internal", 16, 32),
            Series("scheme2", 16, 16),
        ),
        trials=1000,
        d_u1=1.0,
        d_u2=3.0,
    )


def _preset_fig7() -> Experiment:
    return Experiment(
        scenario="imperfect_csi",
        sweep_var="t",
        sweep_start=0.0,
        sweep_stop=0.1,
        sweep_step=0.02,
        series=(Series("proposed_internal", 16, 16),),
        trials=2000,
        d_rx=0.5,
        d_u1=2.0,
        d_u2=3.0,
    )


def _preset_fig8() -> Experiment:
    return Experiment(
        scenario="external_no_csi",
        sweep_var="psi",
        sweep_start=0.05,
        sweep_stop=1.0,
        sweep_step=0.05,
        series=(
            Series("proposed_no_csi", 16, 16),
            Series("scheme3", 16, 16),
        ),
        trials=1000,
        d_rx=0.5,
        d_u1=2.0,
        d_u2=3.0,
        m=10,
    )


def _preset_fig9() -> Experiment:
    return Experiment(
        scenario="external_csi",
        sweep_var="d_u2",
        sweep_start=2.5,
        sweep_stop=4.0,
        sweep_step=0.25,
        series=(
            Series("proposed_csi", 16, 16),
            Series("proposed_csi", 16, 16, m=20),
            Series("scheme4", 16, 16),
            Series("scheme5", 16, 16),
            Series("scheme6", 16, 16),
        ),
        trials=1000,
        d_rx=0.5,
        d_u1=2.0,
        m=10,
    )


def _preset_fig10() -> Experiment:
    return Experiment(
        scenario="dynamic_users",
        sweep_var="p_dbm",
        sweep_start=10.0,
        sweep_stop=40.0,
        sweep_step=5.0,
        series=(
            Series("proposed_csi", 16, 16),
            Series("scheme4", 16, 16),
            Series("scheme5", 16, 16),
            Series("scheme6", 16, 16),
        ),
        trials=1000,
        d_rx=0.5,
        d_ry=1.0,
        m=10,
    )


PRESETS = {
    "fig4": _preset_fig4,
    "fig5": _preset_fig5,
    "fig6": _preset_fig5,   # same sweep; avg_h1/avg_h2 columns carry the data
    "fig7": _preset_fig7,
    "fig8": _preset_fig8,
    "fig9": _preset_fig9,
    "fig10": _preset_fig10,
}


def preset(name: str) -> Experiment:
    if name not in PRESETS:
        raise DomainError(f"unknown preset '{name}'; available: {', '.join(sorted(PRESETS))}")
    return PRESETS[name]()


# --- execution ----------------------------------------------------------------

def _point_config(exp: Experiment, series: Series, value: float) -> SystemConfig:
    cfg = exp.base_config()
    updates: dict = {}
    if series.ns is not None:
        updates["ns"] = series.ns
    if series.nr is not None:
        updates["nr"] = series.nr
    if series.m is not None:
        updates["m"] = series.m
    if exp.sweep_var == "p_dbm":
        updates["p_dbm"] = value
    elif exp.sweep_var == "ns":
        updates["ns"] = int(value)
    elif exp.sweep_var == "nr":
        updates["nr"] = int(value)
    return replace(cfg, **updates) if updates else cfg


def _point_geometry(exp: Experiment, value: float, m: int):
    d_rx, d_u1, d_u2 = exp.d_rx, exp.d_u1, exp.d_u2
    if exp.sweep_var == "d_rx":
        d_rx = value
    elif exp.sweep_var == "d_u1":
        d_u1 = value
    elif exp.sweep_var == "d_u2":
        d_u2 = value

    if exp.scenario == "dynamic_users":
        def sample(rng: np.random.Generator) -> Geometry:
            def in_circle(cx: float) -> tuple[float, float]:
                r = exp.dynamic_radius * np.sqrt(rng.uniform())
                ang = rng.uniform(0.0, 2.0 * np.pi)
                return (cx + r * np.cos(ang), r * np.sin(ang))

            eavs = tuple(in_circle(exp.eav_center) for _ in range(m))
            return Geometry(
                ris=(d_rx, exp.d_ry),
                u1=in_circle(exp.u1_center),
                u2=in_circle(exp.u2_center),
                eavesdroppers=eavs,
            )

        return sample
    if m > 0:
        lo, hi = exp.eav_range

        def sample(rng: np.random.Generator) -> Geometry:
            return Geometry.on_axis(
                d_rx=d_rx,
                d_ry=exp.d_ry,
                d_u1=d_u1,
                d_u2=d_u2,
                d_eavs=tuple(rng.uniform(lo, hi, m)),
            )

        return sample
    return Geometry.on_axis(d_rx=d_rx, d_ry=exp.d_ry, d_u1=d_u1, d_u2=d_u2)


def _run_trial(exp: Experiment, series: Series, value: float, trial: int) -> tuple:
    """(rate, sop_flag, infeasible, iters, h1, h2, rel_err) for one trial."""
    cfg = _point_config(exp, series, value)
    geo = _point_geometry(exp, value, cfg.m)
    rng = trial_rng(exp.seed, trial)
    geo_r = geo(rng) if callable(geo) else geo
    ch = sample_channels(cfg, geo_r, rng)
    psi = value if exp.sweep_var == "psi" else exp.psi

    if exp.scenario == "imperfect_csi":
        t = value if exp.sweep_var == "t" else exp.t
        perfect = run_scheme(series.scheme, ch, cfg, rng, psi=psi)
        est = perturb_csi(ch, t, rng)
        # design on the estimate, evaluate on the true channels
        from .an_beamforming import algorithm2_blind, algorithm3_csi
        from .beamforming import algorithm1
        from .channels import effective_gains
        from .metrics import secrecy_rate_external, snrs as snrs_of

        ris, trace = algorithm1(est, cfg, target=2)
        gains_est = effective_gains(est, ris)
        try:
            from .power_allocation import solve_internal

            split = solve_internal(gains_est.h1, gains_est.h2, cfg)
        except DomainError:
            split = None
        if split is not None and split.feasible:
            gains_true = effective_gains(ch, ris)
            s = snrs_of(gains_true, split, 0, cfg)
            rate_i = secrecy_rate_external(s)
        else:
            rate_i = 0.0
        rp = perfect.secrecy_rate
        rel = abs(rp - rate_i) / rp if rp > 0 else float("nan")
        return (
            rp,
            perfect.h1 >= perfect.h2,
            perfect.outage,
            perfect.iterations,
            perfect.h1,
            perfect.h2,
            rel,
        )

    res = run_scheme(series.scheme, ch, cfg, rng, psi=psi)
    return (
        res.secrecy_rate,
        res.h1 >= res.h2,
        res.outage,
        res.iterations,
        res.h1,
        res.h2,
        float("nan"),
    )


def _run_chunk(args) -> list[tuple]:
    exp, series, value, lo, hi = args
    return [_run_trial(exp, series, value, i) for i in range(lo, hi)]


def _aggregate(exp: Experiment, series: Series, value: float, rows: list[tuple]) -> dict:
    arr = np.asarray(rows, dtype=float)
    rates = arr[:, 0]
    n = len(rates)
    mean = float(np.sum(rates) / n)
    sem = float(np.std(rates, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    rels = arr[:, 6]
    rels = rels[~np.isnan(rels)]
    return {
        "sweep_var": exp.sweep_var,
        "sweep_value": value,
        "scheme": series.scheme,
        "ns": _point_config(exp, series, value).ns,
        "nr": _point_config(exp, series, value).nr,
        "m": _point_config(exp, series, value).m,
        "trials": n,
        "avg_secrecy_rate": mean,
        "sop": float(np.sum(arr[:, 1]) / n),
        "infeasible_fraction": float(np.sum(arr[:, 2]) / n),
        "mean_alg1_iters": float(np.sum(arr[:, 3]) / n),
        "sem_secrecy_rate": sem,
        "avg_h1": float(np.sum(arr[:, 4]) / n),
        "avg_h2": float(np.sum(arr[:, 5]) / n),
        "avg_rel_error": float(np.sum(rels) / len(rels)) if len(rels) else 0.0,
        "seed": exp.seed,
    }


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.9g}"
    return str(x)


def run_experiment(exp: Experiment, out_path: str, workers: int = 1) -> list[dict]:
    """Run every (sweep value, series) cell and write one CSV row each.

    Output is deterministic for a fixed experiment: trials use per-index RNG
    substreams and aggregation order is fixed, so the worker count does not
    affect the bytes written.
    """
    exp.validate()
    rows: list[dict] = []
    points = [(v, s) for v in exp.sweep_values() for s in exp.series]
    if workers > 1:
        chunk = max(64, exp.trials // (4 * workers))
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            for value, series in points:
                tasks = [
                    (exp, series, value, lo, min(lo + chunk, exp.trials))
                    for lo in range(0, exp.trials, chunk)
                ]
                results: list[tuple] = []
                for part in pool.map(_run_chunk, tasks):
                    results.extend(part)
                rows.append(_aggregate(exp, series, value, results))
    else:
        for value, series in points:
            results = [_run_trial(exp, series, value, i) for i in range(exp.trials)]
            rows.append(_aggregate(exp, series, value, results))

    top = max((r["avg_secrecy_rate"] for r in rows), default=0.0)
    for r in rows:
        r["avg_secrecy_rate_normalized"] = r["avg_secrecy_rate"] / top if top > 0 else 0.0

    with open(out_path, "w", newline="") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for r in rows:
            fh.write(",".join(_fmt(r[c]) for c in CSV_COLUMNS) + "\n")
    return rows
