"""ToA/AoA information matrices and the positioning error bound.

The network information about the user position decomposes per anchor into a
range (ToA) part lambda_tau * u u^T and a bearing (AoA) part
lambda_theta * u_perp u_perp^T / r^2. The AoA precision is what the
activated ports control: each selected port contributes the square of its
displacement component along u_perp, scaled by (2*pi/wavelength)^2 and the
per-port phase noise. Both deployment modes share this structure; they
differ only in which side hosts the reconfigurable ports.

ToA timing variance is modeled as

    sigma_tau^2 = 1 / (8 * pi^2 * beta_eff^2 * SNR)

the classical bound for delay estimation at effective bandwidth beta_eff.
Per-port phase noise defaults to 1 / (2 * SNR), the phase precision of a
single complex observation, so one SNR axis drives both measurement types
unless phase_noise_var is overridden.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import InvalidConfig, NotPositiveDefinite
from .geometry import Anchor, Bearing, bearing
from .linalg2 import Mat2, Vec2, inverse, outer
from .ports import PortLayout, Selection, perp_projection

SPEED_OF_LIGHT_M_S = 299792458.0


class Scenario(enum.Enum):
    """Which side of the link hosts the fluid antenna."""

    USER_SIDE = "user"
    BS_SIDE = "bs"


@dataclass(frozen=True)
class MeasurementModel:
    """Per-port, per-anchor measurement quality parameters."""

    snr_linear: float
    beta_eff_hz: float
    wavelength: float
    phase_noise_var: float
    speed_of_light: float = SPEED_OF_LIGHT_M_S

    def __post_init__(self):
        for name in ("snr_linear", "beta_eff_hz", "wavelength", "phase_noise_var"):
            v = getattr(self, name)
            if not (v > 0.0) or not math.isfinite(v):
                raise InvalidConfig(f"{name} must be positive, got {v!r}")

    @classmethod
    def from_snr_db(
        cls,
        snr_db: float,
        *,
        fc_hz: float,
        beta_eff_hz: float,
        phase_noise_var: float | None = None,
        speed_of_light: float = SPEED_OF_LIGHT_M_S,
    ) -> "MeasurementModel":
        """Build a model from an SNR in dB and a carrier frequency."""
        if not (fc_hz > 0.0):
            raise InvalidConfig(f"fc_hz must be positive, got {fc_hz!r}")
        snr = 10.0 ** (snr_db / 10.0)
        if phase_noise_var is None:
            phase_noise_var = 1.0 / (2.0 * snr)
        return cls(
            snr_linear=snr,
            beta_eff_hz=beta_eff_hz,
            wavelength=speed_of_light / fc_hz,
            phase_noise_var=phase_noise_var,
            speed_of_light=speed_of_light,
        )

    def with_snr_db(self, snr_db: float) -> "MeasurementModel":
        """Same carrier and bandwidth at a different SNR; phase noise is
        re-derived from the new SNR."""
        snr = 10.0 ** (snr_db / 10.0)
        return MeasurementModel(
            snr_linear=snr,
            beta_eff_hz=self.beta_eff_hz,
            wavelength=self.wavelength,
            phase_noise_var=1.0 / (2.0 * snr),
            speed_of_light=self.speed_of_light,
        )


@dataclass(frozen=True)
class InfoWeights:
    """Per-anchor scalar information weights.

    lambda_tau has units 1/s^2 folded with 1/c^2 (net 1/m^2 on the range
    axis); lambda_theta has units 1/rad^2.
    """

    lambda_tau: float
    lambda_theta: float

    def __post_init__(self):
        if self.lambda_tau < 0.0 or self.lambda_theta < 0.0:
            raise InvalidConfig("information weights must be nonnegative")


SelectionArg = Union[Selection, Sequence[Selection]]


@dataclass(frozen=True)
class ScenarioConfig:
    """A full problem instance.

    USER_SIDE carries exactly one layout (shared by all anchors); BS_SIDE
    carries one layout per anchor, ordered like ``anchors``.
    """

    scenario: Scenario
    anchors: tuple[Anchor, ...]
    user: Vec2
    layouts: tuple[PortLayout, ...]
    model: MeasurementModel

    def __post_init__(self):
        if not self.anchors:
            raise InvalidConfig("need at least one anchor")
        ids = [a.id for a in self.anchors]
        if len(set(ids)) != len(ids):
            raise InvalidConfig(f"anchor ids must be unique, got {ids}")
        if self.scenario is Scenario.USER_SIDE and len(self.layouts) != 1:
            raise InvalidConfig(
                f"user-side config needs exactly one layout, got {len(self.layouts)}"
            )
        if self.scenario is Scenario.BS_SIDE and len(self.layouts) != len(self.anchors):
            raise InvalidConfig(
                f"bs-side config needs one layout per anchor "
                f"({len(self.anchors)}), got {len(self.layouts)}"
            )

    @property
    def num_anchors(self) -> int:
        return len(self.anchors)

    def layout_for(self, anchor_index: int) -> PortLayout:
        """Layout serving the 1-based ``anchor_index``."""
        if not 1 <= anchor_index <= len(self.anchors):
            raise InvalidConfig(
                f"anchor index {anchor_index} out of range 1..{len(self.anchors)}"
            )
        if self.scenario is Scenario.USER_SIDE:
            return self.layouts[0]
        return self.layouts[anchor_index - 1]

    def bearings(self) -> tuple[Bearing, ...]:
        return tuple(bearing(self.user, a) for a in self.anchors)


def toa_variance(model: MeasurementModel) -> float:
    """Timing variance sigma_tau^2 in s^2."""
    return 1.0 / (8.0 * math.pi**2 * model.beta_eff_hz**2 * model.snr_linear)


def toa_weight(model: MeasurementModel) -> float:
    """Range information weight lambda_tau = 1 / (sigma_tau^2 c^2), 1/m^2."""
    return 1.0 / (toa_variance(model) * model.speed_of_light**2)


def toa_fim(brg: Bearing, model: MeasurementModel) -> Mat2:
    """Per-anchor ToA information: lambda_tau * u u^T."""
    return outer(brg.u).scaled(toa_weight(model))


def aoa_weight(
    layout: PortLayout, sel: Selection, u_perp: Vec2, model: MeasurementModel
) -> float:
    """Bearing information weight of a port subset, 1/rad^2.

    lambda_theta = (2*pi/wavelength)^2 / phase_noise_var * sum over the
    selected ports of the squared displacement component along u_perp.
    Vanishes exactly when every selected port projects to zero (endfire).
    """
    sel.validate_for(layout)
    kappa = (2.0 * math.pi / model.wavelength) ** 2
    total = 0.0
    for m in sel.indices:
        p = perp_projection(layout, m, u_perp)
        total += p * p
    return kappa / model.phase_noise_var * total


def aoa_fim(brg: Bearing, lambda_theta: float) -> Mat2:
    """Per-anchor AoA information: lambda_theta * u_perp u_perp^T / r^2."""
    if lambda_theta < 0.0:
        raise InvalidConfig(f"lambda_theta must be >= 0, got {lambda_theta!r}")
    return outer(brg.u_perp).scaled(lambda_theta / (brg.range_m * brg.range_m))


def _selections_per_anchor(
    config: ScenarioConfig, selections: SelectionArg
) -> tuple[Selection, ...]:
    if config.scenario is Scenario.USER_SIDE:
        if not isinstance(selections, Selection):
            raise InvalidConfig(
                "user-side scenario takes a single shared Selection"
            )
        return (selections,) * config.num_anchors
    if isinstance(selections, Selection):
        raise InvalidConfig("bs-side scenario takes one Selection per anchor")
    per = tuple(selections)
    if len(per) != config.num_anchors:
        raise InvalidConfig(
            f"expected {config.num_anchors} selections, got {len(per)}"
        )
    return per


def anchor_weights(
    config: ScenarioConfig, selections: SelectionArg
) -> tuple[InfoWeights, ...]:
    """Per-anchor (lambda_tau, lambda_theta) for the given activated ports."""
    per = _selections_per_anchor(config, selections)
    lam_tau = toa_weight(config.model)
    brgs = config.bearings()
    out = []
    for b in range(1, config.num_anchors + 1):
        lam_theta = aoa_weight(
            config.layout_for(b), per[b - 1], brgs[b - 1].u_perp, config.model
        )
        out.append(InfoWeights(lambda_tau=lam_tau, lambda_theta=lam_theta))
    return tuple(out)


def network_fim(config: ScenarioConfig, selections: SelectionArg) -> Mat2:
    """Sum of per-anchor ToA and AoA information matrices (symmetric PSD)."""
    per = _selections_per_anchor(config, selections)
    brgs = config.bearings()
    total = Mat2.zero()
    for b in range(1, config.num_anchors + 1):
        brg = brgs[b - 1]
        total = total + toa_fim(brg, config.model)
        lam_theta = aoa_weight(
            config.layout_for(b), per[b - 1], brg.u_perp, config.model
        )
        total = total + aoa_fim(brg, lam_theta)
    return total


def peb(j: Mat2) -> float:
    """Positioning error bound sqrt(trace(J^-1)) in meters.

    Raises NotPositiveDefinite when J is singular; such a configuration is
    unlocalizable.
    """
    inv = inverse(j)
    t = inv.trace()
    if t <= 0.0:
        # det > 0 with nonpositive trace means negative definite input.
        raise NotPositiveDefinite(f"inverse trace is not positive ({t:.6g})")
    return math.sqrt(t)


def port_kernel(config: ScenarioConfig, anchor_index: int, port: int) -> Mat2:
    """Additive information share of one port toward one anchor.

    The share is (2*pi/wavelength)^2 / phase_noise_var * projection^2 *
    u_perp u_perp^T / r^2, so summing kernels over any activated set
    reproduces that set's AoA information matrix exactly, term by term.
    """
    layout = config.layout_for(anchor_index)
    brg = bearing(config.user, config.anchors[anchor_index - 1])
    p = perp_projection(layout, port, brg.u_perp)
    kappa = (2.0 * math.pi / config.model.wavelength) ** 2
    share = kappa / config.model.phase_noise_var * (p * p)
    return outer(brg.u_perp).scaled(share / (brg.range_m * brg.range_m))


def base_information(config: ScenarioConfig) -> Mat2:
    """Port-independent ToA part of the network information matrix."""
    total = Mat2.zero()
    for brg in config.bearings():
        total = total + toa_fim(brg, config.model)
    return total
