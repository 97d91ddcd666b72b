"""Port-subset selection maximizing log det of the network information.

Four routes are provided: a seeded random baseline, lazy greedy, a convex
relaxation over fractional activation weights with top-k rounding, and an
exhaustive oracle for small instances. The joint (shared subset) problem
applies to user-side configs; bs-side configs decouple per anchor and are
handled by :func:`bs_side_selection`.
"""

from __future__ import annotations

import enum
import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    InvalidConfig,
    Nonconvergence,
    NotPositiveDefinite,
    SingularBase,
    TooLarge,
)
from .fisher import (
    Scenario,
    ScenarioConfig,
    base_information,
    network_fim,
    peb,
    port_kernel,
)
from .linalg2 import Mat2, is_spd, logdet
from .ports import Selection

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITERS = 5000
DEFAULT_EXHAUSTIVE_CAP = 2_000_000

# Jitter scale applied to a singular base matrix so greedy gains stay finite.
JITTER_REL = 1e-9


class Method(enum.Enum):
    RANDOM = "random"
    GREEDY = "greedy"
    RELAXED = "relaxed"
    EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True)
class RelaxedWeights:
    """Fractional activation weights on the capped simplex."""

    w: tuple[float, ...]
    n_s: int

    def __post_init__(self):
        for v in self.w:
            if not (0.0 <= v <= 1.0):
                raise InvalidConfig(f"weight {v!r} outside [0, 1]")
        if abs(math.fsum(self.w) - self.n_s) > 1e-9:
            raise InvalidConfig(
                f"weights sum to {math.fsum(self.w)!r}, budget is {self.n_s}"
            )


@dataclass(frozen=True)
class SelectionReport:
    """Outcome of one selection run.

    objective_logdet and peb_m are always recomputed from the returned
    selection through the reference network_fim path; -inf / inf mark an
    unlocalizable result. iterations counts gain evaluations (greedy),
    ascent steps (relaxed), or subsets enumerated (exhaustive). jitter is
    the diagonal regularization added when the port-independent base was
    singular, 0.0 otherwise. For the relaxed route, relaxed_objective is
    the fractional optimum value (an upper bound on every subset objective
    once the duality gap is below tol) and gap is the final certified gap.
    """

    selection: Selection | tuple[Selection, ...]
    objective_logdet: float
    peb_m: float
    iterations: int
    method: Method
    jitter: float = 0.0
    gains: tuple[float, ...] = ()
    relaxed_objective: float | None = None
    gap: float | None = None


def _finalize(config: ScenarioConfig, sel, method, iterations, **extra) -> SelectionReport:
    j = network_fim(config, sel)
    try:
        obj = logdet(j)
        bound = peb(j)
    except NotPositiveDefinite:
        obj = float("-inf")
        bound = float("inf")
    return SelectionReport(
        selection=sel,
        objective_logdet=obj,
        peb_m=bound,
        iterations=iterations,
        method=method,
        **extra,
    )


def random_selection(m_ports: int, n_s: int, seed: int) -> Selection:
    """Uniformly random n_s-subset of 1..m_ports, deterministic in seed."""
    if m_ports < 1:
        raise InvalidConfig(f"m_ports must be >= 1, got {m_ports}")
    if n_s < 1 or n_s > m_ports:
        raise InvalidConfig(f"n_s must be in 1..{m_ports}, got {n_s}")
    if n_s == m_ports:
        return Selection(tuple(range(1, m_ports + 1)))
    rng = np.random.default_rng(seed)
    picks = rng.choice(m_ports, size=n_s, replace=False)
    return Selection(tuple(sorted(int(i) + 1 for i in picks)))


# ---------------------------------------------------------------------------
# Shared-subset (user-side) machinery


@dataclass(frozen=True)
class _Instance:
    """Base matrix and per-port kernels aggregated over anchors."""

    j0: Mat2
    q11: np.ndarray
    q12: np.ndarray
    q22: np.ndarray

    @property
    def m_ports(self) -> int:
        return int(self.q11.size)

    def kernel(self, m: int) -> Mat2:
        i = m - 1
        return Mat2.symmetric(float(self.q11[i]), float(self.q12[i]), float(self.q22[i]))

    def accumulate(self, base: Mat2, indices) -> Mat2:
        a11, a12, a22 = base.a11, base.a12, base.a22
        for m in indices:
            i = m - 1
            a11 += self.q11[i]
            a12 += self.q12[i]
            a22 += self.q22[i]
        return Mat2.symmetric(a11, a12, a22)


def _require_user_side(config: ScenarioConfig, op: str) -> None:
    if config.scenario is not Scenario.USER_SIDE:
        raise InvalidConfig(
            f"{op} optimizes a single shared subset; use bs_side_selection "
            f"for bs-side configs"
        )


def aggregated_kernels(config: ScenarioConfig) -> list[Mat2]:
    """Per-port kernels summed over anchors (user-side configs only)."""
    _require_user_side(config, "aggregated_kernels")
    m_ports = config.layouts[0].count
    out = []
    for m in range(1, m_ports + 1):
        q = Mat2.zero()
        for b in range(1, config.num_anchors + 1):
            q = q + port_kernel(config, b, m)
        out.append(Mat2.symmetric(q.a11, q.a12, q.a22))
    return out

def _build_instance(config: ScenarioConfig) -> _Instance:
    kernels = aggregated_kernels(config)
    return _Instance(
        j0=base_information(config),
        q11=np.array([k.a11 for k in kernels]),
        q12=np.array([k.a12 for k in kernels]),
        q22=np.array([k.a22 for k in kernels]),
    )


def _logdet_or_ninf(m: Mat2) -> float:
    try:
        return logdet(m)
    except NotPositiveDefinite:
        return float("-inf")


def greedy_selection(
    config: ScenarioConfig,
    n_s: int,
    *,
    lazy: bool = True,
    regularize: bool = True,
) -> SelectionReport:
    """Builds the subset one port at a time by largest log-det gain.

    Each round adds the port whose aggregated kernel maximizes
    logdet(J + Q_m) - logdet(J); ties go to the lowest index. The lazy
    variant keeps a priority queue of stale gains and re-evaluates only the
    top candidate, which is valid because a gain can only shrink as J grows.
    When the port-independent base is singular it is jittered by
    JITTER_REL * max(1, trace) on the diagonal (unless regularize=False, in
    which case SingularBase is raised); the jitter steers the ordering only
    and is excluded from the reported objective.
    """
    _require_user_side(config, "greedy_selection")
    inst = _build_instance(config)
    if not 1 <= n_s <= inst.m_ports:
        raise InvalidConfig(f"n_s must be in 1..{inst.m_ports}, got {n_s}")

    j_work = inst.j0
    jitter = 0.0
    if not is_spd(j_work):
        if not regularize:
            raise SingularBase(
                "port-independent base information is singular; pass "
                "regularize=True to proceed with a diagonal jitter"
            )
        jitter = JITTER_REL * max(1.0, j_work.trace())
        j_work = j_work + Mat2.identity().scaled(jitter)

    def gain(j: Mat2, m: int) -> float:
        return _logdet_or_ninf(j + inst.kernel(m)) - logdet(j)

    chosen: list[int] = []
    gains: list[float] = []
    evals = 0

    if lazy:
        heap: list[tuple[float, int, int]] = []
        for m in range(1, inst.m_ports + 1):
            heap.append((-(gain(j_work, m)), m, 0))
            evals += 1
        heapq.heapify(heap)
        round_no = 0
        while len(chosen) < n_s:
            neg_g, m, stamp = heapq.heappop(heap)
            if stamp == round_no:
                chosen.append(m)
                gains.append(-neg_g)
                j_work = j_work + inst.kernel(m)
                round_no += 1
            else:
                g = gain(j_work, m)
                evals += 1
                heapq.heappush(heap, (-g, m, round_no))
    else:
        remaining = list(range(1, inst.m_ports + 1))
        while len(chosen) < n_s:
            best_m = None
            best_g = -math.inf
            for m in remaining:
                g = gain(j_work, m)
                evals += 1
                if g > best_g:
                    best_g = g
                    best_m = m
            chosen.append(best_m)
            gains.append(best_g)
            remaining.remove(best_m)
            j_work = j_work + inst.kernel(best_m)

    sel = Selection(tuple(sorted(chosen)))
    return _finalize(
        config, sel, Method.GREEDY, evals, jitter=jitter, gains=tuple(gains)
    )


def exhaustive_selection(
    config: ScenarioConfig, n_s: int, cap: int = DEFAULT_EXHAUSTIVE_CAP
) -> SelectionReport:
    """True argmax of log det over all n_s-subsets; the test oracle.

    Ties resolve to the lexicographically lowest subset. Raises TooLarge
    when C(M, n_s) exceeds ``cap``.
    """
    _require_user_side(config, "exhaustive_selection")
    inst = _build_instance(config)
    if not 1 <= n_s <= inst.m_ports:
        raise InvalidConfig(f"n_s must be in 1..{inst.m_ports}, got {n_s}")
    total = math.comb(inst.m_ports, n_s)
    if total > cap:
        raise TooLarge(
            f"C({inst.m_ports}, {n_s}) = {total} subsets exceeds cap {cap}"
        )
    best_obj = -math.inf
    best: tuple[int, ...] | None = None
    count = 0
    for combo in itertools.combinations(range(1, inst.m_ports + 1), n_s):
        count += 1
        obj = _logdet_or_ninf(inst.accumulate(inst.j0, combo))
        if obj > best_obj:
            best_obj = obj
            best = combo
    if best is None:  # every subset unlocalizable; report the first one
        best = tuple(range(1, n_s + 1))
    return _finalize(config, Selection(best), Method.EXHAUSTIVE, count)


# ---------------------------------------------------------------------------
# Convex relaxation


def project_capped_simplex(y: Sequence[float], budget: float) -> np.ndarray:
    """Euclidean projection onto {x in [0,1]^M : sum(x) = budget}.

    Solves for the shift tau with sum(clip(y - tau, 0, 1)) = budget by
    scanning the breakpoints of that piecewise-linear function, then clips.
    """
    y = np.asarray(y, dtype=float)
    m = y.size
    if not 0 <= budget <= m:
        raise InvalidConfig(f"budget {budget} infeasible for {m} ports")
    if budget == 0:
        return np.zeros(m)
    if budget == m:
        return np.ones(m)
    knots = np.unique(np.concatenate([y - 1.0, y]))
    sums = np.clip(y[None, :] - knots[:, None], 0.0, 1.0).sum(axis=1)
    # sums is non-increasing from m to 0; pick the last knot still >= budget.
    idx = int(np.nonzero(sums >= budget)[0][-1])
    if sums[idx] == budget:
        tau = knots[idx]
    else:
        slope = (sums[idx + 1] - sums[idx]) / (knots[idx + 1] - knots[idx])
        tau = knots[idx] + (budget - sums[idx]) / slope
    return np.clip(y - tau, 0.0, 1.0)


def top_k_selection(weights: Sequence[float], n_s: int) -> Selection:
    """Ports with the n_s largest weights; ties go to the lowest index."""
    w = np.asarray(weights, dtype=float)
    if not 1 <= n_s <= w.size:
        raise InvalidConfig(f"n_s must be in 1..{w.size}, got {n_s}")
    order = np.lexsort((np.arange(w.size), -w))
    picks = sorted(int(i) + 1 for i in order[:n_s])
    return Selection(tuple(picks))


def _weighted_info(inst: _Instance, x: np.ndarray) -> tuple[float, float, float]:
    j11 = inst.j0.a11 + float(inst.q11 @ x)
    j12 = inst.j0.a12 + float(inst.q12 @ x)
    j22 = inst.j0.a22 + float(inst.q22 @ x)
    return j11, j12, j22


def _objective(inst: _Instance, x: np.ndarray) -> float:
    j11, j12, j22 = _weighted_info(inst, x)
    det = j11 * j22 - j12 * j12
    if det <= 0.0 or j11 <= 0.0:
        return -math.inf
    return math.log(det)


def relaxed_objective(config: ScenarioConfig, weights: Sequence[float]) -> float:
    """log det of the information matrix at fractional activation weights."""
    inst = _build_instance(config)
    x = np.asarray(weights, dtype=float)
    if x.size != inst.m_ports:
        raise InvalidConfig(f"expected {inst.m_ports} weights, got {x.size}")
    val = _objective(inst, x)
    if val == -math.inf:
        raise NotPositiveDefinite("information matrix is singular at these weights")
    return val


def relaxed_gradient(config: ScenarioConfig, weights: Sequence[float]) -> np.ndarray:
    """Per-port derivative of the relaxed objective, tr(J(x)^-1 Q_m)."""
    inst = _build_instance(config)
    x = np.asarray(weights, dtype=float)
    if x.size != inst.m_ports:
        raise InvalidConfig(f"expected {inst.m_ports} weights, got {x.size}")
    j11, j12, j22 = _weighted_info(inst, x)
    det = j11 * j22 - j12 * j12
    if det <= 0.0 or j11 <= 0.0:
        raise NotPositiveDefinite("information matrix is singular at these weights")
    return (j22 * inst.q11 - 2.0 * j12 * inst.q12 + j11 * inst.q22) / det


def relaxed_selection(
    config: ScenarioConfig,
    n_s: int,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> tuple[RelaxedWeights, SelectionReport]:
    """Projected gradient ascent over fractional weights, then top-k rounding.

    Starts from the uniform feasible point n_s/M, takes backtracking ascent
    steps projected back onto the capped simplex, and stops once the linear
    maximization gap max_d <grad, d - x> over the feasible set falls to
    ``tol`` (that gap upper-bounds the remaining suboptimality, so the final
    objective is within tol of the fractional optimum). Raises
    Nonconvergence, carrying the last gap, if max_iters runs out first.
    """
    _require_user_side(config, "relaxed_selection")
    inst = _build_instance(config)
    m = inst.m_ports
    if not 1 <= n_s <= m:
        raise InvalidConfig(f"n_s must be in 1..{m}, got {n_s}")

    x = np.full(m, n_s / m)
    if _objective(inst, x) == -math.inf:
        raise SingularBase(
            "information matrix is singular at the uniform feasible start"
        )

    step = 1.0
    gap = math.inf
    iters = 0
    for iters in range(1, max_iters + 1):
        j11, j12, j22 = _weighted_info(inst, x)
        det = j11 * j22 - j12 * j12
        grad = (j22 * inst.q11 - 2.0 * j12 * inst.q12 + j11 * inst.q22) / det
        # The best feasible point of the linearized objective puts full
        # weight on the n_s largest gradient entries.
        top = np.partition(grad, m - n_s)[m - n_s:]
        gap = float(top.sum() - grad @ x)
        if gap <= tol:
            break
        h = None
        for _ in range(80):
            cand = project_capped_simplex(x + step * grad, n_s)
            h = cand - x
            if np.any(h != 0.0):
                break
            step *= 4.0
        if h is None or not np.any(h != 0.0):
            break  # no representable move; gap below is still certified
        # Exact line search on the feasible segment x + t*h, t in [0, 1]:
        # det(J + t*H) is quadratic in t, so the 1-D maximizer of
        # ln det is closed-form. c1 > 0 whenever h != 0 (projection
        # property), so the step always ascends.
        h11 = float(inst.q11 @ h)
        h12 = float(inst.q12 @ h)
        h22 = float(inst.q22 @ h)
        c1 = j11 * h22 + j22 * h11 - 2.0 * j12 * h12
        c2 = h11 * h22 - h12 * h12
        if c2 < 0.0:
            t_star = min(-c1 / (2.0 * c2), 1.0)
        else:
            t_star = 1.0
        if t_star <= 0.0:
            break
        x = np.clip(x + t_star * h, 0.0, 1.0)
        if t_star >= 1.0:
            step *= 2.0
        elif t_star < 0.25:
            step *= 0.5

    if gap > tol:
        # The loop may have moved once more after the last gap evaluation.
        j11, j12, j22 = _weighted_info(inst, x)
        det = j11 * j22 - j12 * j12
        grad = (j22 * inst.q11 - 2.0 * j12 * inst.q12 + j11 * inst.q22) / det
        top = np.partition(grad, m - n_s)[m - n_s:]
        gap = float(top.sum() - grad @ x)
    if gap > tol:
        raise Nonconvergence(
            f"duality gap {gap:.3e} above tol {tol:.3e} after {iters} iterations",
            gap=gap,
            iterations=iters,
        )
    f = _objective(inst, x)

    weights = RelaxedWeights(w=tuple(float(v) for v in x), n_s=n_s)
    sel = top_k_selection(x, n_s)
    report = _finalize(
        config,
        sel,
        Method.RELAXED,
        iters,
        relaxed_objective=f,
        gap=gap,
    )
    return weights, report


# ---------------------------------------------------------------------------
# BS-side (per-anchor) selection


def bs_side_selection(
    config: ScenarioConfig,
    n_s: int,
    method: Method,
    *,
    seed: int = 0,
) -> tuple[Selection, ...]:
    """Per-anchor activation for bs-side configs.

    Each anchor's bearing information depends only on its own subset through
    the sum of squared perpendicular projections, and the joint objective is
    monotone in each of those sums. The per-anchor optimum is therefore the
    n_s ports with the largest squared projection; greedy, exhaustive and
    rounded relaxation all coincide with that sort. Random draws use a
    stream derived from (seed, anchor position in the config).
    """
    if config.scenario is not Scenario.BS_SIDE:
        raise InvalidConfig("bs_side_selection requires a bs-side config")
    brgs = config.bearings()
    out = []
    for b in range(1, config.num_anchors + 1):
        layout = config.layout_for(b)
        if not 1 <= n_s <= layout.count:
            raise InvalidConfig(
                f"n_s must be in 1..{layout.count} for anchor {b}, got {n_s}"
            )
        if method is Method.RANDOM:
            rng = np.random.default_rng([seed, b])
            if n_s == layout.count:
                picks = range(layout.count)
            else:
                picks = rng.choice(layout.count, size=n_s, replace=False)
            out.append(Selection(tuple(sorted(int(i) + 1 for i in picks))))
        else:
            u_perp = brgs[b - 1].u_perp
            proj2 = np.array([u_perp.dot(d) ** 2 for d in layout.displacements])
            out.append(top_k_selection(proj2, n_s))
    return tuple(out)
