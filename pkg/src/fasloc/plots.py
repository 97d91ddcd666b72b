"""Render sweep curves to a self-contained vector-graphics file."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .experiments import STATUS_OK, ResultRow, SweepAxis  # noqa: E402

_AXIS_LABELS = {
    SweepAxis.SNR_DB: "SNR (dB)",
    SweepAxis.NUM_PORTS: "candidate ports M",
    SweepAxis.ACTIVE_PORTS: "active ports n_s",
}

_STYLES = {
    ("user", "random"): dict(color="tab:blue", linestyle="--", marker="s"),
    ("user", "greedy"): dict(color="tab:blue", linestyle="-", marker="o"),
    ("user", "relaxed"): dict(color="tab:blue", linestyle="-.", marker="^"),
    ("user", "exhaustive"): dict(color="tab:blue", linestyle=":", marker="d"),
    ("bs", "random"): dict(color="tab:red", linestyle="--", marker="s"),
    ("bs", "greedy"): dict(color="tab:red", linestyle="-", marker="o"),
    ("bs", "relaxed"): dict(color="tab:red", linestyle="-.", marker="^"),
    ("bs", "exhaustive"): dict(color="tab:red", linestyle=":", marker="d"),
}


def render_curves(rows: Iterable[ResultRow], path: str | Path) -> None:
    """One log-scale PEB curve per (scenario, method); skips unlocalizable
    points and per-trial rows."""
    usable = [r for r in rows if not r.is_trial and r.status == STATUS_OK]
    series: dict[tuple[str, str], list[ResultRow]] = {}
    for r in sorted(usable, key=lambda r: (r.scenario.value, r.method.value, r.axis_value)):
        series.setdefault((r.scenario.value, r.method.value), []).append(r)

    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for key, pts in series.items():
        style = _STYLES.get(key, {})
        ax.semilogy(
            [p.axis_value for p in pts],
            [p.peb_m for p in pts],
            label=f"{key[0]}-side / {key[1]}",
            markersize=4,
            **style,
        )
    axis = usable[0].axis if usable else SweepAxis.SNR_DB
    ax.set_xlabel(_AXIS_LABELS[axis])
    ax.set_ylabel("PEB (m)")
    ax.grid(True, which="both", alpha=0.3)
    if series:
        ax.legend(fontsize=9)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
