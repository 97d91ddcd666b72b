import itertools
import math

import numpy as np
import pytest

from fasloc.errors import (
    InvalidConfig,
    Nonconvergence,
    SingularBase,
    TooLarge,
)
from fasloc.fisher import (
    MeasurementModel,
    Scenario,
    ScenarioConfig,
    aoa_weight,
    network_fim,
)
from fasloc.geometry import Anchor, bearing, symmetric_ring
from fasloc.linalg2 import Vec2, logdet
from fasloc.ports import PortLayout, Selection, linear_layout
from fasloc.select import (
    Method,
    RelaxedWeights,
    bs_side_selection,
    exhaustive_selection,
    greedy_selection,
    project_capped_simplex,
    random_selection,
    relaxed_selection,
    top_k_selection,
)

MODEL = MeasurementModel.from_snr_db(10.0, fc_hz=3e9, beta_eff_hz=1e7)


def fixed_instance():
    """Asymmetric three-anchor instance with a 12-port user layout."""
    anchors = (
        Anchor(Vec2(40 * math.cos(0.3), 40 * math.sin(0.3)), 1),
        Anchor(Vec2(55 * math.cos(1.7), 55 * math.sin(1.7)), 2),
        Anchor(Vec2(70 * math.cos(3.9), 70 * math.sin(3.9)), 3),
    )
    lay = linear_layout(12, 1.5, 0.1, 0.2)
    return ScenarioConfig(Scenario.USER_SIDE, anchors, Vec2(1.0, 1.5), (lay,), MODEL)


def single_anchor_instance():
    anchors = (Anchor(Vec2(0.0, 0.0), 1),)
    lay = linear_layout(5, 0.5, 0.1)
    return ScenarioConfig(Scenario.USER_SIDE, anchors, Vec2(0.0, 50.0), (lay,), MODEL)


def scattered_instance(seed: int, num_anchors=3, m=10):
    """Non-collinear displacements so kernels are not proportional."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-0.5, 0.5, size=(m, 2))
    pts = pts - pts.mean(axis=0)
    disp = tuple(Vec2(float(x), float(y)) for x, y in pts)
    extent = max((a - b).norm() for i, a in enumerate(disp) for b in disp[i + 1:])
    lay = PortLayout(disp, aperture_wavelengths=extent, wavelength=1.0)
    anchors = tuple(
        Anchor(Vec2(float(r * math.cos(t)), float(r * math.sin(t))), id=i + 1)
        for i, (r, t) in enumerate(
            zip(rng.uniform(20, 80, num_anchors), rng.uniform(0, 2 * math.pi, num_anchors))
        )
    )
    user = Vec2(float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3)))
    return ScenarioConfig(Scenario.USER_SIDE, anchors, user, (lay,), MODEL)


# ---------------------------------------------------------------------------
# Random baseline


def test_random_selection_full_set():
    assert random_selection(6, 6, seed=123).indices == (1, 2, 3, 4, 5, 6)


def test_random_selection_deterministic():
    a = random_selection(60, 10, seed=42)
    b = random_selection(60, 10, seed=42)
    assert a == b
    c = random_selection(60, 10, seed=43)
    assert a != c  # overwhelmingly likely with C(60,10) subsets


def test_random_selection_validity():
    rng = np.random.default_rng(0)
    for _ in range(100):
        m = int(rng.integers(2, 30))
        n_s = int(rng.integers(1, m + 1))
        sel = random_selection(m, n_s, seed=int(rng.integers(0, 1 << 30)))
        assert sel.n_s == n_s
        assert all(1 <= i <= m for i in sel.indices)


def test_random_selection_errors():
    with pytest.raises(InvalidConfig):
        random_selection(60, 61, seed=0)
    with pytest.raises(InvalidConfig):
        random_selection(60, 0, seed=0)


# ---------------------------------------------------------------------------
# Greedy


def test_greedy_single_anchor_picks_outermost():
    # Only the component along u_perp matters; the outermost ports carry the
    # largest squared projection. Verified against the exhaustive oracle.
    cfg = single_anchor_instance()
    report = greedy_selection(cfg, 2)
    assert report.selection.indices == (1, 5)
    assert report.jitter > 0.0  # single anchor: ranging-only base is singular
    assert exhaustive_selection(cfg, 2).selection.indices == (1, 5)


def test_greedy_requires_regularization_on_singular_base():
    cfg = single_anchor_instance()
    with pytest.raises(SingularBase):
        greedy_selection(cfg, 2, regularize=False)


def test_greedy_full_budget():
    cfg = fixed_instance()
    report = greedy_selection(cfg, 12)
    assert report.selection.indices == tuple(range(1, 13))
    full = logdet(network_fim(cfg, Selection(tuple(range(1, 13)))))
    assert report.objective_logdet == pytest.approx(full, abs=1e-12)
    assert report.jitter == 0.0


def test_greedy_matches_exhaustive_on_fixed_instance():
    cfg = fixed_instance()
    g = greedy_selection(cfg, 4)
    e = exhaustive_selection(cfg, 4)
    assert e.iterations == 495
    gap = e.objective_logdet - g.objective_logdet
    assert gap >= -1e-12  # the oracle is a true optimum
    assert gap <= 1e-9, f"greedy fell short by {gap}"
    assert g.selection.indices == (1, 2, 11, 12)


def test_greedy_lazy_equals_naive():
    for seed in range(300, 310):
        cfg = scattered_instance(seed)
        lazy = greedy_selection(cfg, 4, lazy=True)
        naive = greedy_selection(cfg, 4, lazy=False)
        assert lazy.selection == naive.selection
        assert lazy.objective_logdet == naive.objective_logdet
        assert lazy.gains == pytest.approx(naive.gains, rel=1e-12)
        # laziness saves work: never more evaluations than the naive scan
        assert lazy.iterations <= naive.iterations


def test_greedy_report_is_consistent():
    cfg = fixed_instance()
    report = greedy_selection(cfg, 5)
    j = network_fim(cfg, report.selection)
    assert report.objective_logdet == pytest.approx(logdet(j), abs=1e-9)
    assert report.method is Method.GREEDY
    assert len(report.gains) == 5
    # marginal gains shrink as information accumulates
    assert all(b <= a + 1e-12 for a, b in zip(report.gains, report.gains[1:]))


def test_greedy_rejects_bs_config_and_bad_budget():
    cfg = fixed_instance()
    with pytest.raises(InvalidConfig):
        greedy_selection(cfg, 13)
    bs = ScenarioConfig(
        Scenario.BS_SIDE,
        cfg.anchors,
        cfg.user,
        tuple(cfg.layouts[0] for _ in cfg.anchors),
        cfg.model,
    )
    for fn in (greedy_selection, exhaustive_selection):
        with pytest.raises(InvalidConfig):
            fn(bs, 2)
    with pytest.raises(InvalidConfig):
        relaxed_selection(bs, 2)


# ---------------------------------------------------------------------------
# Exhaustive oracle


def test_exhaustive_full_budget_returns_everything():
    cfg = single_anchor_instance()
    report = exhaustive_selection(cfg, 5)
    assert report.selection.indices == (1, 2, 3, 4, 5)


def test_exhaustive_skips_zero_projection_port():
    # The center port of an odd linear layout projects to zero for every
    # bearing; with budget 1 the oracle must prefer an end port.
    cfg = single_anchor_instance()
    report = exhaustive_selection(cfg, 1)
    assert report.selection.indices == (1,)  # tie with port 5, lowest wins


def test_exhaustive_too_large():
    cfg = fixed_instance()
    with pytest.raises(TooLarge):
        exhaustive_selection(cfg, 4, cap=100)


def test_exhaustive_against_independent_brute_force():
    # Recompute every subset objective from raw geometry with numpy.
    for seed in (901, 902, 903):
        cfg = scattered_instance(seed, num_anchors=3, m=8)
        n_s = 3
        model = cfg.model
        lam_tau = 8 * math.pi**2 * model.beta_eff_hz**2 * model.snr_linear
        lam_tau /= model.speed_of_light**2
        kappa = (2 * math.pi / model.wavelength) ** 2 / model.phase_noise_var
        j0 = np.zeros((2, 2))
        kernels = []
        for a in cfg.anchors:
            d = np.array([cfg.user.x - a.position.x, cfg.user.y - a.position.y])
            r = np.linalg.norm(d)
            u = d / r
            up = np.array([-u[1], u[0]])
            j0 += lam_tau * np.outer(u, u)
            kernels.append(
                [
                    kappa
                    * (up @ np.array([p.x, p.y])) ** 2
                    * np.outer(up, up)
                    / r**2
                    for p in cfg.layouts[0].displacements
                ]
            )
        best_obj, best_combo = -np.inf, None
        for combo in itertools.combinations(range(8), n_s):
            j = j0 + sum(kernels[b][m] for b in range(3) for m in combo)
            sign, ld = np.linalg.slogdet(j)
            if sign > 0 and ld > best_obj:
                best_obj, best_combo = float(ld), combo
        report = exhaustive_selection(cfg, n_s)
        assert report.selection.indices == tuple(i + 1 for i in best_combo)
        assert report.objective_logdet == pytest.approx(best_obj, abs=1e-9)


# ---------------------------------------------------------------------------
# Capped-simplex projection and rounding


def bisect_project(y: np.ndarray, budget: float) -> np.ndarray:
    lo, hi = float(y.min()) - 1.0, float(y.max())
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.clip(y - mid, 0.0, 1.0).sum() > budget:
            lo = mid
        else:
            hi = mid
    return np.clip(y - hi, 0.0, 1.0)


def test_projection_feasibility_and_idempotence():
    rng = np.random.default_rng(89)
    for _ in range(300):
        m = int(rng.integers(1, 40))
        budget = int(rng.integers(0, m + 1))
        y = rng.normal(scale=3.0, size=m)
        x = project_capped_simplex(y, budget)
        assert np.all(x >= 0.0) and np.all(x <= 1.0)
        assert abs(x.sum() - budget) <= 1e-9
        again = project_capped_simplex(x, budget)
        assert np.allclose(again, x, atol=1e-12)


def test_projection_matches_bisection_oracle():
    rng = np.random.default_rng(97)
    for _ in range(200):
        m = int(rng.integers(2, 30))
        budget = int(rng.integers(1, m))
        y = rng.normal(scale=2.0, size=m)
        x = project_capped_simplex(y, budget)
        assert np.allclose(x, bisect_project(y, budget), atol=1e-9)


def test_projection_fixed_points_and_edges():
    assert np.array_equal(project_capped_simplex([5.0, -3.0], 2), [1.0, 1.0])
    assert np.array_equal(project_capped_simplex([5.0, -3.0], 0), [0.0, 0.0])
    feasible = np.array([0.25, 0.75, 1.0, 0.0])
    assert np.allclose(project_capped_simplex(feasible, 2.0), feasible, atol=1e-12)
    with pytest.raises(InvalidConfig):
        project_capped_simplex([1.0, 2.0], 3)


def test_top_k_selection_ties_and_scaling():
    assert top_k_selection([0.5, 0.9, 0.5, 0.1], 2).indices == (1, 2)
    rng = np.random.default_rng(101)
    for _ in range(100):
        w = rng.uniform(size=12)
        n_s = int(rng.integers(1, 12))
        c = float(rng.uniform(0.01, 100.0))
        assert top_k_selection(w, n_s) == top_k_selection(c * w, n_s)


# ---------------------------------------------------------------------------
# Convex relaxation


def test_relaxed_symmetric_kernels_stay_uniform():
    # Two mirrored ports toward one broadside anchor carry identical
    # kernels, so the uniform start is already optimal.
    anchors = (Anchor(Vec2(0.0, 0.0), 1), Anchor(Vec2(0.0, 100.0), 2))
    lay = linear_layout(4, 0.5, 0.1)
    dup = PortLayout(
        (lay.displacements[0], lay.displacements[3],
         lay.displacements[0], lay.displacements[3]),
        aperture_wavelengths=lay.aperture_wavelengths,
        wavelength=lay.wavelength,
    )
    cfg = ScenarioConfig(Scenario.USER_SIDE, anchors, Vec2(0.0, 50.0), (dup,), MODEL)
    weights, report = relaxed_selection(cfg, 2)
    assert np.allclose(weights.w, 0.5, atol=1e-12)
    assert report.iterations <= 1
    assert report.gap <= 1e-12


def test_relaxed_full_budget():
    cfg = fixed_instance()
    weights, report = relaxed_selection(cfg, 12)
    assert np.allclose(weights.w, 1.0)
    assert report.selection.indices == tuple(range(1, 13))


def test_relaxed_sandwich_on_fixed_instance():
    cfg = fixed_instance()
    e = exhaustive_selection(cfg, 4)
    weights, r = relaxed_selection(cfg, 4, tol=1e-9)
    assert r.relaxed_objective >= e.objective_logdet - 1e-9
    assert e.objective_logdet >= r.objective_logdet - 1e-9
    assert r.gap <= 1e-9
    j = network_fim(cfg, r.selection)
    assert r.objective_logdet == pytest.approx(logdet(j), abs=1e-9)


def test_relaxed_weights_validation():
    with pytest.raises(InvalidConfig):
        RelaxedWeights((1.2, 0.0), 1)
    with pytest.raises(InvalidConfig):
        RelaxedWeights((0.5, 0.1), 1)
    RelaxedWeights((0.25, 0.75), 1)


def test_relaxed_nonconvergence_reports_gap():
    cfg = scattered_instance(777)
    with pytest.raises(Nonconvergence) as exc:
        relaxed_selection(cfg, 3, tol=1e-300, max_iters=1)
    assert exc.value.gap > 0.0
    assert exc.value.iterations == 1


def test_relaxed_singular_start():
    # Endfire single anchor: no subset carries bearing information, so the
    # uniform start is singular.
    anchors = (Anchor(Vec2(50.0, 0.0), 1),)
    lay = linear_layout(4, 0.5, 0.1)
    cfg = ScenarioConfig(Scenario.USER_SIDE, anchors, Vec2(1.0, 0.0), (lay,), MODEL)
    with pytest.raises(SingularBase):
        relaxed_selection(cfg, 2)


# ---------------------------------------------------------------------------
# BS-side selection


def bs_instance(n_anchors=3, m=5, w_b=2.0):
    anchors = tuple(symmetric_ring(n_anchors, 50.0))
    layouts = []
    for a in anchors:
        radial = math.atan2(a.position.y, a.position.x)
        layouts.append(linear_layout(m, w_b, 0.1, radial + math.pi / 2))
    return ScenarioConfig(
        Scenario.BS_SIDE, anchors, Vec2(1.0, 1.5), tuple(layouts), MODEL
    )


def test_bs_side_greedy_picks_outermost():
    cfg = bs_instance()
    sels = bs_side_selection(cfg, 2, Method.GREEDY)
    assert len(sels) == cfg.num_anchors
    for sel in sels:
        assert sel.indices == (1, 5)


def test_bs_side_endfire_weight_is_zero():
    # Layout parallel to the bearing: every subset carries zero weight.
    anchors = (Anchor(Vec2(50.0, 0.0), 1),)
    lay = linear_layout(5, 2.0, 0.1, 0.0)  # along x, anchor on the x axis
    cfg = ScenarioConfig(Scenario.BS_SIDE, anchors, Vec2(1.0, 0.0), (lay,), MODEL)
    (sel,) = bs_side_selection(cfg, 2, Method.GREEDY)
    brg = bearing(cfg.user, anchors[0])
    assert aoa_weight(lay, sel, brg.u_perp, MODEL) == 0.0


def test_bs_side_greedy_matches_per_anchor_brute_force():
    cfg = bs_instance(n_anchors=4, m=7)
    sels = bs_side_selection(cfg, 3, Method.GREEDY)
    brgs = cfg.bearings()
    for b, sel in enumerate(sels, start=1):
        lay = cfg.layout_for(b)
        got = aoa_weight(lay, sel, brgs[b - 1].u_perp, MODEL)
        best = max(
            aoa_weight(lay, Selection(c), brgs[b - 1].u_perp, MODEL)
            for c in itertools.combinations(range(1, 8), 3)
        )
        assert got == pytest.approx(best, rel=1e-12)


def test_bs_side_methods_agree_except_random():
    cfg = bs_instance()
    greedy = bs_side_selection(cfg, 2, Method.GREEDY)
    assert bs_side_selection(cfg, 2, Method.EXHAUSTIVE) == greedy
    assert bs_side_selection(cfg, 2, Method.RELAXED) == greedy


def test_bs_side_random_is_seeded_per_anchor():
    cfg = bs_instance()
    a = bs_side_selection(cfg, 2, Method.RANDOM, seed=5)
    b = bs_side_selection(cfg, 2, Method.RANDOM, seed=5)
    assert a == b
    c = bs_side_selection(cfg, 2, Method.RANDOM, seed=6)
    assert a != c
    # distinct anchors get distinct streams (almost surely distinct draws)
    assert len({sel.indices for sel in a}) > 1 or len(a) == 1


def test_bs_side_rejects_user_config():
    cfg = fixed_instance()
    with pytest.raises(InvalidConfig):
        bs_side_selection(cfg, 2, Method.GREEDY)


def test_bs_side_full_budget_random():
    cfg = bs_instance(m=4)
    sels = bs_side_selection(cfg, 4, Method.RANDOM, seed=0)
    for sel in sels:
        assert sel.indices == (1, 2, 3, 4)


# ---------------------------------------------------------------------------
# Cross-route ordering


def test_oracle_sandwich_on_scattered_instances():
    for seed in (501, 502, 503, 504, 505):
        cfg = scattered_instance(seed)
        n_s = 3
        g = greedy_selection(cfg, n_s)
        e = exhaustive_selection(cfg, n_s)
        w, r = relaxed_selection(cfg, n_s, tol=1e-9)
        assert r.relaxed_objective >= e.objective_logdet - 1e-9
        assert e.objective_logdet >= g.objective_logdet - 1e-9
        assert e.objective_logdet >= r.objective_logdet - 1e-9


def test_greedy_never_beats_exhaustive():
    for seed in range(600, 620):
        cfg = scattered_instance(seed, num_anchors=2, m=8)
        g = greedy_selection(cfg, 3)
        e = exhaustive_selection(cfg, 3)
        assert g.objective_logdet <= e.objective_logdet + 1e-12
