"""Config loading, sweep execution and result emission.

Config files are flat ``key = value`` text with ``#`` comments. Recognized
keys (anything else is a parse error):

    system.fc_hz, system.beta_eff_hz,
    geometry.num_bs, geometry.radius_m, geometry.user_x, geometry.user_y,
    fas.M, fas.n_s, fas.W_u, fas.W_b, fas.user_orientation_rad,
    sweep.axis, sweep.values, sweep.trials, sweep.seed,
    solver.tol, solver.max_iters

Omitted keys take the defaults below. A sweep evaluates every
(axis value, scenario, method) point; the random baseline is averaged as
sqrt(mean(PEB^2)) over seeded trials whose streams are derived from
(master seed, point index, trial index), so output is byte-identical across
runs and across worker counts.
"""

from __future__ import annotations

import concurrent.futures
import enum
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import (
    DegenerateGeometry,
    FaslocError,
    InvalidConfig,
    NotPositiveDefinite,
    ParseError,
    SingularBase,
    ValidationError,
)
from .fisher import (
    MeasurementModel,
    Scenario,
    ScenarioConfig,
    network_fim,
    peb,
)
from .geometry import symmetric_ring
from .linalg2 import Vec2, logdet
from .ports import Selection, linear_layout
from .select import (
    DEFAULT_EXHAUSTIVE_CAP,
    Method,
    bs_side_selection,
    exhaustive_selection,
    greedy_selection,
    random_selection,
    relaxed_selection,
)

CSV_HEADER = "scenario,method,axis,axis_value,snr_db,M,n_s,peb_m,logdet,seed,status"

STATUS_OK = "ok"
STATUS_UNLOCALIZABLE = "unlocalizable"


class SweepAxis(enum.Enum):
    SNR_DB = "snr_db"
    NUM_PORTS = "num_ports"
    ACTIVE_PORTS = "active_ports"


_DEFAULT_SNR_VALUES = tuple(float(v) for v in range(-10, 31, 2))

_DEFAULTS: dict[str, object] = {
    "system.fc_hz": 3.0e9,
    "system.beta_eff_hz": 10.0e6,
    "geometry.num_bs": 4,
    "geometry.radius_m": 50.0,
    "geometry.user_x": 1.0,
    "geometry.user_y": 1.5,
    "fas.M": 60,
    "fas.n_s": 10,
    "fas.W_u": 0.5,
    "fas.W_b": 2.0,
    "fas.user_orientation_rad": 0.0,
    "sweep.axis": "snr_db",
    "sweep.values": _DEFAULT_SNR_VALUES,
    "sweep.trials": 100,
    "sweep.seed": 0,
    "solver.tol": 1e-8,
    "solver.max_iters": 5000,
}

# Operating SNR for sweeps whose axis is not SNR itself.
DEFAULT_OPERATING_SNR_DB = 20.0


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep and how to average it."""

    axis: SweepAxis = SweepAxis.SNR_DB
    values: tuple[float, ...] = _DEFAULT_SNR_VALUES
    scenarios: tuple[Scenario, ...] = (Scenario.USER_SIDE, Scenario.BS_SIDE)
    methods: tuple[Method, ...] = (Method.RANDOM, Method.GREEDY)
    trials: int = 100
    seed: int = 0
    snr_db: float = DEFAULT_OPERATING_SNR_DB
    n_s: int = 10
    user_disc_radius_m: float = 0.0
    per_trial: bool = False
    solver_tol: float = 1e-8
    solver_max_iters: int = 5000
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP

    def __post_init__(self):
        if not self.values:
            raise InvalidConfig("sweep.values must be nonempty")
        for a, b in zip(self.values, self.values[1:]):
            if not b > a:
                raise InvalidConfig("sweep.values must be strictly increasing")
        if self.trials < 1:
            raise InvalidConfig(f"sweep.trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise InvalidConfig(f"sweep.seed must be >= 0, got {self.seed}")
        if not self.scenarios or not self.methods:
            raise InvalidConfig("scenarios and methods must be nonempty")
        if self.user_disc_radius_m < 0.0:
            raise InvalidConfig("user disc radius must be >= 0")


@dataclass(frozen=True)
class TrialResult:
    """One seeded draw inside an averaged sweep point (kept for auditing)."""

    seed: int
    user: tuple[float, float]
    selections: tuple[Selection, ...]
    peb_m: float
    logdet: float
    status: str


@dataclass(frozen=True)
class ResultRow:
    """One emitted sweep point.

    peb_m is positive and finite for status=ok rows and +inf otherwise; the
    CSV renders non-finite floats as empty fields. selections/user/trials
    carry enough detail to recompute peb_m from scratch and never reach the
    CSV.
    """

    scenario: Scenario
    method: Method
    axis: SweepAxis
    axis_value: float
    snr_db: float
    m_ports: int
    n_s: int
    peb_m: float
    logdet: float
    seed: int
    status: str
    is_trial: bool = False
    user: tuple[float, float] | None = None
    selections: tuple[Selection, ...] | None = None
    trials: tuple[TrialResult, ...] = field(default=(), repr=False)


# ---------------------------------------------------------------------------
# Config parsing


def _parse_lines(text: str, source: str) -> dict[str, tuple[str, int]]:
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ParseError(f"{source}:{lineno}: empty key or value in {raw!r}")
        if key not in _DEFAULTS:
            raise ParseError(f"{source}:{lineno}: unknown key {key!r}")
        if key in entries:
            raise ParseError(
                f"{source}:{lineno}: duplicate key {key!r} "
                f"(first set on line {entries[key][1]})"
            )
        entries[key] = (value, lineno)
    return entries


def _parse_int(key: str, value: str, lineno: int, source: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"{source}:{lineno}: {key} expects an integer, got {value!r}")


def _parse_float(key: str, value: str, lineno: int, source: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ParseError(f"{source}:{lineno}: {key} expects a number, got {value!r}")


def _parse_values(key: str, value: str, lineno: int, source: str) -> tuple[float, ...]:
    parts = [p for chunk in value.split(",") for p in chunk.split()]
    if not parts:
        raise ParseError(f"{source}:{lineno}: {key} expects a list of numbers")
    out = []
    for p in parts:
        try:
            out.append(float(p))
        except ValueError:
            raise ParseError(
                f"{source}:{lineno}: {key} has a non-numeric entry {p!r}"
            )
    return tuple(out)


_INT_KEYS = {"geometry.num_bs", "fas.M", "fas.n_s", "sweep.trials", "sweep.seed",
             "solver.max_iters"}
_FLOAT_KEYS = {"system.fc_hz", "system.beta_eff_hz", "geometry.radius_m",
               "geometry.user_x", "geometry.user_y", "fas.W_u", "fas.W_b",
               "fas.user_orientation_rad", "solver.tol"}


def _typed_settings(entries: dict[str, tuple[str, int]], source: str) -> dict[str, object]:
    settings = dict(_DEFAULTS)
    for key, (value, lineno) in entries.items():
        if key in _INT_KEYS:
            settings[key] = _parse_int(key, value, lineno, source)
        elif key in _FLOAT_KEYS:
            settings[key] = _parse_float(key, value, lineno, source)
        elif key == "sweep.values":
            settings[key] = _parse_values(key, value, lineno, source)
        elif key == "sweep.axis":
            try:
                settings[key] = SweepAxis(value).value
            except ValueError:
                raise ParseError(
                    f"{source}:{lineno}: sweep.axis must be one of "
                    f"{[a.value for a in SweepAxis]}, got {value!r}"
                )
    return settings


def _validate(settings: dict[str, object]) -> None:
    def bad(msg: str):
        raise ValidationError(msg)

    if settings["system.fc_hz"] <= 0:
        bad("system.fc_hz must be positive")
    if settings["system.beta_eff_hz"] <= 0:
        bad("system.beta_eff_hz must be positive")
    if settings["geometry.num_bs"] < 1:
        bad("geometry.num_bs must be >= 1")
    if settings["geometry.radius_m"] <= 0:
        bad("geometry.radius_m must be positive")
    m = settings["fas.M"]
    n_s = settings["fas.n_s"]
    if m < 1:
        bad("fas.M must be >= 1")
    if n_s < 1:
        bad("fas.n_s must be >= 1")
    if settings["fas.W_u"] < 0 or settings["fas.W_b"] < 0:
        bad("FAS apertures must be >= 0")
    if settings["sweep.trials"] < 1:
        bad("sweep.trials must be >= 1")
    if settings["sweep.seed"] < 0:
        bad("sweep.seed must be >= 0")
    if settings["solver.tol"] <= 0:
        bad("solver.tol must be positive")
    if settings["solver.max_iters"] < 1:
        bad("solver.max_iters must be >= 1")

    values = settings["sweep.values"]
    if not values:
        bad("sweep.values must be nonempty")
    for a, b in zip(values, values[1:]):
        if not b > a:
            bad("sweep.values must be strictly increasing")

    axis = SweepAxis(settings["sweep.axis"])
    if axis in (SweepAxis.NUM_PORTS, SweepAxis.ACTIVE_PORTS):
        for v in values:
            if v != int(v) or v < 1:
                bad(f"sweep.values for {axis.value} must be positive integers")
    if axis is SweepAxis.NUM_PORTS:
        if n_s > min(values):
            bad(f"fas.n_s={n_s} exceeds the smallest swept port count {min(values)}")
    elif axis is SweepAxis.ACTIVE_PORTS:
        if max(values) > m:
            bad(f"swept n_s={max(values)} exceeds fas.M={m}")
        # n_s itself is replaced by the axis; no further constraint.
    else:
        if n_s > m:
            bad(f"fas.n_s={n_s} exceeds fas.M={m}")


def build_configs(settings: dict[str, object]) -> dict[Scenario, ScenarioConfig]:
    """Scenario configs for both deployment modes from typed settings.

    The user-side layout runs along fas.user_orientation_rad; each bs-side
    layout is oriented broadside to its anchor's line toward the origin.
    Models are built at the 20 dB reference; sweeps override SNR per point.
    """
    anchors = tuple(
        symmetric_ring(settings["geometry.num_bs"], settings["geometry.radius_m"])
    )
    user = Vec2(settings["geometry.user_x"], settings["geometry.user_y"])
    model = MeasurementModel.from_snr_db(
        DEFAULT_OPERATING_SNR_DB,
        fc_hz=settings["system.fc_hz"],
        beta_eff_hz=settings["system.beta_eff_hz"],
    )
    m = settings["fas.M"]
    user_layout = linear_layout(
        m, settings["fas.W_u"], model.wavelength,
        settings["fas.user_orientation_rad"],
    )
    bs_layouts = []
    for a in anchors:
        radial = math.atan2(a.position.y, a.position.x)
        bs_layouts.append(
            linear_layout(m, settings["fas.W_b"], model.wavelength,
                          radial + math.pi / 2.0)
        )
    return {
        Scenario.USER_SIDE: ScenarioConfig(
            scenario=Scenario.USER_SIDE,
            anchors=anchors,
            user=user,
            layouts=(user_layout,),
            model=model,
        ),
        Scenario.BS_SIDE: ScenarioConfig(
            scenario=Scenario.BS_SIDE,
            anchors=anchors,
            user=user,
            layouts=tuple(bs_layouts),
            model=model,
        ),
    }


def load_config(
    path: str | Path | None = None,
) -> tuple[dict[Scenario, ScenarioConfig], SweepSpec]:
    """Parse a config file (or use pure defaults when path is None)."""
    if path is None:
        entries: dict[str, tuple[str, int]] = {}
        source = "<defaults>"
    else:
        p = Path(path)
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read config {p}: {exc}") from exc
        source = str(p)
        entries = _parse_lines(text, source)
    settings = _typed_settings(entries, source)
    _validate(settings)
    configs = build_configs(settings)
    spec = SweepSpec(
        axis=SweepAxis(settings["sweep.axis"]),
        values=tuple(settings["sweep.values"]),
        trials=settings["sweep.trials"],
        seed=settings["sweep.seed"],
        n_s=settings["fas.n_s"],
        solver_tol=settings["solver.tol"],
        solver_max_iters=settings["solver.max_iters"],
    )
    return configs, spec


# ---------------------------------------------------------------------------
# Sweep execution


def _with_snr(config: ScenarioConfig, snr_db: float) -> ScenarioConfig:
    return replace(config, model=config.model.with_snr_db(snr_db))


def _with_num_ports(config: ScenarioConfig, m: int) -> ScenarioConfig:
    layouts = tuple(
        linear_layout(m, lay.aperture_wavelengths, lay.wavelength, lay.orientation_rad)
        for lay in config.layouts
    )
    return replace(config, layouts=layouts)


def point_config(
    configs: dict[Scenario, ScenarioConfig],
    spec: SweepSpec,
    scenario: Scenario,
    axis_value: float,
) -> tuple[ScenarioConfig, int, float]:
    """Instance, budget and SNR for one sweep point."""
    base = configs[scenario]
    if spec.axis is SweepAxis.SNR_DB:
        return _with_snr(base, axis_value), spec.n_s, axis_value
    if spec.axis is SweepAxis.NUM_PORTS:
        cfg = _with_snr(_with_num_ports(base, int(axis_value)), spec.snr_db)
        return cfg, spec.n_s, spec.snr_db
    cfg = _with_snr(base, spec.snr_db)
    return cfg, int(axis_value), spec.snr_db


def _derive_seed(master: int, point_index: int, trial: int) -> int:
    ss = np.random.SeedSequence([master, point_index, trial])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _draw_user(base: Vec2, radius: float, trial_seed: int) -> Vec2:
    rng = np.random.default_rng([trial_seed, 1])
    r = radius * math.sqrt(rng.uniform())
    phi = rng.uniform(0.0, 2.0 * math.pi)
    return Vec2(base.x + r * math.cos(phi), base.y + r * math.sin(phi))


def _evaluate(
    cfg: ScenarioConfig, n_s: int, method: Method, seed: int, spec: SweepSpec
) -> tuple[tuple[Selection, ...], float, float, str]:
    """Run one selection and score it; singular outcomes become a status."""
    try:
        if cfg.scenario is Scenario.USER_SIDE:
            if method is Method.RANDOM:
                sel = random_selection(cfg.layouts[0].count, n_s, seed)
            elif method is Method.GREEDY:
                sel = greedy_selection(cfg, n_s).selection
            elif method is Method.RELAXED:
                _, report = relaxed_selection(
                    cfg, n_s, tol=spec.solver_tol, max_iters=spec.solver_max_iters
                )
                sel = report.selection
            else:
                sel = exhaustive_selection(cfg, n_s, cap=spec.exhaustive_cap).selection
            selections = (sel,)
            j = network_fim(cfg, sel)
        else:
            selections = bs_side_selection(cfg, n_s, method, seed=seed)
            j = network_fim(cfg, selections)
        obj = logdet(j)
        bound = peb(j)
        return selections, bound, obj, STATUS_OK
    except (NotPositiveDefinite, DegenerateGeometry, SingularBase):
        return (), float("inf"), float("-inf"), STATUS_UNLOCALIZABLE


def _compute_point(
    configs: dict[Scenario, ScenarioConfig],
    spec: SweepSpec,
    point_index: int,
    axis_value: float,
    scenario: Scenario,
    method: Method,
) -> ResultRow:
    cfg, n_s, snr_db = point_config(configs, spec, scenario, axis_value)
    m_ports = cfg.layouts[0].count
    averaged = method is Method.RANDOM or spec.user_disc_radius_m > 0.0

    common = dict(
        scenario=scenario,
        method=method,
        axis=spec.axis,
        axis_value=float(axis_value),
        snr_db=snr_db,
        m_ports=m_ports,
        n_s=n_s,
    )

    if not averaged:
        selections, bound, obj, status = _evaluate(cfg, n_s, method, spec.seed, spec)
        return ResultRow(
            **common,
            peb_m=bound,
            logdet=obj,
            seed=spec.seed,
            status=status,
            user=(cfg.user.x, cfg.user.y),
            selections=selections,
        )

    trials = []
    for t in range(spec.trials):
        tseed = _derive_seed(spec.seed, point_index, t)
        user = cfg.user
        if spec.user_disc_radius_m > 0.0:
            user = _draw_user(cfg.user, spec.user_disc_radius_m, tseed)
        cfg_t = replace(cfg, user=user)
        selections, bound, obj, status = _evaluate(cfg_t, n_s, method, tseed, spec)
        trials.append(
            TrialResult(
                seed=tseed,
                user=(user.x, user.y),
                selections=selections,
                peb_m=bound,
                logdet=obj,
                status=status,
            )
        )

    if all(t.status == STATUS_OK for t in trials):
        mean_sq = math.fsum(t.peb_m * t.peb_m for t in trials) / len(trials)
        agg_peb = math.sqrt(mean_sq)
        agg_logdet = math.fsum(t.logdet for t in trials) / len(trials)
        status = STATUS_OK
    else:
        agg_peb = float("inf")
        agg_logdet = float("-inf")
        status = STATUS_UNLOCALIZABLE
    return ResultRow(
        **common,
        peb_m=agg_peb,
        logdet=agg_logdet,
        seed=spec.seed,
        status=status,
        trials=tuple(trials),
    )


def run_sweep(
    configs: dict[Scenario, ScenarioConfig],
    spec: SweepSpec,
    jobs: int = 1,
) -> list[ResultRow]:
    """Evaluate every sweep point and return rows in deterministic order.

    Points are independent; with jobs > 1 they are farmed to a thread pool
    and the results are reassembled in enumeration order, so the output is
    identical for any worker count. Each returned list ends with per-trial
    expansion rows when spec.per_trial is set. A self-audit recomputes every
    row's bound from its recorded selections before returning.
    """
    points = []
    index = 0
    for value in spec.values:
        for scenario in spec.scenarios:
            for method in spec.methods:
                points.append((index, value, scenario, method))
                index += 1

    def work(pt):
        idx, value, scenario, method = pt
        return idx, _compute_point(configs, spec, idx, value, scenario, method)

    results: list[ResultRow | None] = [None] * len(points)
    if jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            for idx, row in pool.map(work, points):
                results[idx] = row
    else:
        for pt in points:
            idx, row = work(pt)
            results[idx] = row

    rows: list[ResultRow] = []
    for row in results:
        assert row is not None
        rows.append(row)
        if spec.per_trial and row.trials:
            for t in row.trials:
                rows.append(
                    replace(
                        row,
                        peb_m=t.peb_m,
                        logdet=t.logdet,
                        seed=t.seed,
                        status=t.status,
                        is_trial=True,
                        user=t.user,
                        selections=t.selections,
                        trials=(),
                    )
                )

    problems = verify_rows(configs, spec, rows)
    if problems:
        raise FaslocError(
            "sweep self-audit failed: " + "; ".join(problems[:5])
        )
    return rows


# ---------------------------------------------------------------------------
# Self-audit


def _rel_close(a: float, b: float, tol: float = 1e-9) -> bool:
    if not math.isfinite(a) or not math.isfinite(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _recompute(
    configs: dict[Scenario, ScenarioConfig],
    spec: SweepSpec,
    row: ResultRow,
    user: tuple[float, float],
    selections: tuple[Selection, ...],
) -> tuple[float, float]:
    cfg, _, _ = point_config(configs, spec, row.scenario, row.axis_value)
    cfg = replace(cfg, user=Vec2(*user))
    arg = selections[0] if cfg.scenario is Scenario.USER_SIDE else selections
    j = network_fim(cfg, arg)
    return peb(j), logdet(j)


def verify_rows(
    configs: dict[Scenario, ScenarioConfig],
    spec: SweepSpec,
    rows: Iterable[ResultRow],
) -> list[str]:
    """Recompute every ok row's bound from its recorded selections.

    Returns human-readable discrepancy descriptions (empty when clean).
    """
    problems = []
    for i, row in enumerate(rows):
        if row.status != STATUS_OK:
            continue
        try:
            if row.selections is not None:
                got_peb, got_logdet = _recompute(
                    configs, spec, row, row.user, row.selections
                )
            else:
                sq = []
                lds = []
                for t in row.trials:
                    p, ld = _recompute(configs, spec, row, t.user, t.selections)
                    sq.append(p * p)
                    lds.append(ld)
                got_peb = math.sqrt(math.fsum(sq) / len(sq))
                got_logdet = math.fsum(lds) / len(lds)
        except FaslocError as exc:
            problems.append(f"row {i}: recompute failed: {exc}")
            continue
        if not _rel_close(got_peb, row.peb_m):
            problems.append(
                f"row {i}: peb {row.peb_m!r} != recomputed {got_peb!r}"
            )
        if not _rel_close(got_logdet, row.logdet):
            problems.append(
                f"row {i}: logdet {row.logdet!r} != recomputed {got_logdet!r}"
            )
    return problems


# ---------------------------------------------------------------------------
# Emission


def _fmt(v: float) -> str:
    if not math.isfinite(v):
        return ""
    return f"{v:.9g}"


def _sorted_rows(rows: Iterable[ResultRow]) -> list[ResultRow]:
    return sorted(
        rows, key=lambda r: (r.scenario.value, r.method.value, r.axis_value)
    )


def render_csv(rows: Iterable[ResultRow]) -> str:
    lines = [CSV_HEADER]
    for r in _sorted_rows(rows):
        lines.append(
            ",".join(
                [
                    r.scenario.value,
                    r.method.value,
                    r.axis.value,
                    _fmt(r.axis_value),
                    _fmt(r.snr_db),
                    str(r.m_ports),
                    str(r.n_s),
                    _fmt(r.peb_m),
                    _fmt(r.logdet),
                    str(r.seed),
                    r.status,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def emit_csv(rows: Iterable[ResultRow], path: str | Path) -> None:
    """Write the sweep CSV (LF newlines, 9 significant digits)."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(render_csv(rows))


def emit_plot_data(rows: Iterable[ResultRow], path: str | Path) -> None:
    """Whitespace-separated series blocks, one per (scenario, method).

    Blocks are separated by two blank lines (gnuplot index convention) and
    ordered like the CSV. Unlocalizable points are omitted from the series
    and listed in a ``<path>.skipped`` sidecar instead. Per-trial rows are
    never plotted.
    """
    aggregates = [r for r in _sorted_rows(rows) if not r.is_trial]
    skipped = []
    blocks = []
    key = None
    for r in aggregates:
        if (r.scenario, r.method) != key:
            key = (r.scenario, r.method)
            blocks.append((key, []))
        if r.status != STATUS_OK:
            skipped.append(r)
            continue
        blocks[-1][1].append(r)
    with open(path, "w", encoding="utf-8", newline="") as f:
        if aggregates:
            f.write(f"# axis: {aggregates[0].axis.value}, values: peb_m\n")
        for i, ((scenario, method), series) in enumerate(blocks):
            if i:
                f.write("\n\n")
            f.write(f"# series scenario={scenario.value} method={method.value}\n")
            for r in series:
                f.write(f"{_fmt(r.axis_value)} {_fmt(r.peb_m)}\n")
    if skipped:
        with open(f"{path}.skipped", "w", encoding="utf-8", newline="") as f:
            for r in skipped:
                f.write(
                    f"scenario={r.scenario.value} method={r.method.value} "
                    f"axis_value={_fmt(r.axis_value)} status={r.status}\n"
                )


# ---------------------------------------------------------------------------
# CSV re-verification (the audit subcommand)


_NUMERIC_COLUMNS = {3, 4, 7, 8}  # axis_value, snr_db, peb_m, logdet


def audit_csv(
    csv_path: str | Path,
    configs: dict[Scenario, ScenarioConfig],
    spec: SweepSpec,
    jobs: int = 1,
) -> list[str]:
    """Re-run the sweep for (configs, spec) and diff it against a CSV file.

    String/integer columns must match exactly; numeric columns within 1e-9
    relative. Returns discrepancy descriptions (empty when the file checks
    out).
    """
    actual = Path(csv_path).read_text(encoding="utf-8").splitlines()
    expected = render_csv(run_sweep(configs, spec, jobs=jobs)).splitlines()
    problems = []
    if actual and actual[0] != CSV_HEADER:
        problems.append(f"header mismatch: {actual[0]!r}")
        return problems
    if len(actual) != len(expected):
        problems.append(
            f"row count mismatch: file has {len(actual) - 1}, "
            f"recomputed {len(expected) - 1}"
        )
        return problems
    for lineno, (got, want) in enumerate(zip(actual[1:], expected[1:]), start=2):
        if got == want:
            continue
        got_cols = got.split(",")
        want_cols = want.split(",")
        if len(got_cols) != len(want_cols):
            problems.append(f"line {lineno}: column count mismatch")
            continue
        for ci, (g, w) in enumerate(zip(got_cols, want_cols)):
            if g == w:
                continue
            if ci in _NUMERIC_COLUMNS and g and w and _rel_close(float(g), float(w)):
                continue
            problems.append(
                f"line {lineno}: column {ci} mismatch (file {g!r}, recomputed {w!r})"
            )
    return problems
