"""Closed-form energetics of the four-stroke cycle.

Stage labels: A (cold thermal at omega1) -> B (compressed to omega2) ->
C (hot thermal at omega2) -> D (expanded back to omega1) -> A.  The single
parameter chi >= 0 measures how non-adiabatic the two driven strokes are
(chi = 0 is the quantum-adiabatic limit).  Sign convention throughout:
positive work/heat means energy flowing INTO the working substance, so
W = <H>_after - <H>_before and the first law reads
w_ab + q_bc + w_cd + q_da = 0 identically.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .core import EngineConfig
from .errors import NotAnEngineError, RegimeWarning

__all__ = [
    "CycleEnergies",
    "CycleReport",
    "stage_energies",
    "works_and_heats",
    "works_and_heats_from_params",
    "efficiency",
    "friction_work",
    "temperature_ratio_bound",
    "carnot",
    "otto_ideal",
]


def _coth(x: float) -> float:
    return 1.0 / math.tanh(x)


@dataclass(frozen=True)
class CycleEnergies:
    """Mean energy of the working substance at the four stage points."""

    h_a: float
    h_b: float
    h_c: float
    h_d: float


@dataclass(frozen=True)
class CycleReport:
    """Works, heats and derived figures for one operating point.

    eta is nan (and is_engine False) when the point absorbs no heat or
    produces no net work; every other field is always defined.
    """

    w_ab: float
    q_bc: float
    w_cd: float
    q_da: float
    w_net: float
    eta: float
    w_fric: float
    w_ad: float
    is_engine: bool


def stage_energies(config: EngineConfig, chi: float) -> CycleEnergies:
    """Mean energies at A..D for squeezing chi accumulated on each driven stroke.

    h_a = w1 coth(bc w1/2)            h_b = w2 cosh(chi) coth(bc w1/2)
    h_c = w2 coth(bh w2/2)            h_d = w1 cosh(chi) coth(bh w2/2)
    """
    if chi < 0.0:
        raise ValueError(f"chi must be >= 0, got {chi}")
    cc = _coth(config.beta_c * config.omega1 / 2.0)
    ch = _coth(config.beta_h * config.omega2 / 2.0)
    cosh_chi = math.cosh(chi)
    return CycleEnergies(
        h_a=config.omega1 * cc,
        h_b=config.omega2 * cosh_chi * cc,
        h_c=config.omega2 * ch,
        h_d=config.omega1 * cosh_chi * ch,
    )


def works_and_heats_from_params(
    omega1: float, omega2: float, beta_c: float, beta_h: float, chi: float
) -> CycleReport:
    """works_and_heats on raw parameters (no ordering constraints).

    Useful for symmetry checks such as swapping the roles of the two
    frequencies and the two baths, which maps compression quantities onto
    expansion quantities.
    """
    cc = _coth(beta_c * omega1 / 2.0)
    ch = _coth(beta_h * omega2 / 2.0)
    cosh_chi = math.cosh(chi)
    h_a = omega1 * cc
    h_b = omega2 * cosh_chi * cc
    h_c = omega2 * ch
    h_d = omega1 * cosh_chi * ch
    w_ab = h_b - h_a
    q_bc = h_c - h_b
    w_cd = h_d - h_c
    q_da = h_a - h_d
    w_net = -(w_ab + w_cd)
    w_ad = (omega1 - omega2) * ch
    w_fric = 2.0 * omega1 * math.sinh(chi / 2.0) ** 2 * ch
    is_engine = w_net > 0.0 and q_bc > 0.0
    eta = w_net / q_bc if is_engine else float("nan")
    return CycleReport(
        w_ab=w_ab,
        q_bc=q_bc,
        w_cd=w_cd,
        q_da=q_da,
        w_net=w_net,
        eta=eta,
        w_fric=w_fric,
        w_ad=w_ad,
        is_engine=is_engine,
    )


def works_and_heats(config: EngineConfig, chi: float) -> CycleReport:
    """Works and heats over one cycle at squeezing chi (positive = into the substance)."""
    if chi < 0.0:
        raise ValueError(f"chi must be >= 0, got {chi}")
    return works_and_heats_from_params(
        config.omega1, config.omega2, config.beta_c, config.beta_h, chi
    )


def efficiency(config: EngineConfig, chi: float) -> float:
    """Engine efficiency eta = w_net / q_bc in closed form,

        eta = 1 - (w1/w2) (cosh(chi) coth(bh w2/2) - coth(bc w1/2))
                        / (coth(bh w2/2) - cosh(chi) coth(bc w1/2)),

    equal to 1 - w1/w2 at chi = 0.  Raises NotAnEngineError outside the
    engine regime (no heat absorbed or no net work).
    """
    report = works_and_heats(config, chi)
    if not report.is_engine:
        raise NotAnEngineError(
            f"chi = {chi}: q_bc = {report.q_bc:.6g}, w_net = {report.w_net:.6g}; "
            "not operating as an engine"
        )
    cc = _coth(config.beta_c * config.omega1 / 2.0)
    ch = _coth(config.beta_h * config.omega2 / 2.0)
    cosh_chi = math.cosh(chi)
    return 1.0 - (config.omega1 / config.omega2) * (cosh_chi * ch - cc) / (ch - cosh_chi * cc)


def friction_work(config: EngineConfig, chi: float) -> tuple[float, float]:
    """(w_fric, w_ad) for the expansion stroke.

    w_ad = (w1 - w2) coth(bh w2/2) is the work of a quantum-adiabatic
    expansion; w_fric = 2 w1 sinh^2(chi/2) coth(bh w2/2) >= 0 is the excess
    pumped in by squeezing, and w_cd = w_ad + w_fric identically.
    """
    report = works_and_heats(config, chi)
    return report.w_fric, report.w_ad


def temperature_ratio_bound(config: EngineConfig, chi: float) -> bool:
    """High-temperature positive-work condition expressed as a temperature ratio.

    True iff t_hot/t_cold > (w2/w1) (w2 cosh(chi) - w1) / (w2 - w1 cosh(chi)).
    At chi = 0 this reduces to t_hot/t_cold > w2/w1.  When
    w2 <= w1 cosh(chi) the bound diverges and no finite ratio satisfies it.

    The underlying approximation coth(x) ~ 1/x holds for x = beta*omega/2
    small, i.e. temperatures LARGE compared to the oscillator quanta; a
    RegimeWarning is emitted when either stroke sits more than 5% away
    from that limit.
    """
    for name, x in (
        ("cold stroke", config.beta_c * config.omega1 / 2.0),
        ("hot stroke", config.beta_h * config.omega2 / 2.0),
    ):
        if x * _coth(x) - 1.0 > 0.05:
            warnings.warn(
                f"{name}: beta*omega/2 = {x:.4g} is outside the high-temperature regime "
                "(coth(x) deviates from 1/x by more than 5%); the ratio bound is approximate",
                RegimeWarning,
                stacklevel=2,
            )
    cosh_chi = math.cosh(chi)
    denom = config.omega2 - config.omega1 * cosh_chi
    if denom <= 0.0:
        return False
    rhs = (config.omega2 / config.omega1) * (config.omega2 * cosh_chi - config.omega1) / denom
    return config.t_hot / config.t_cold > rhs


def carnot(config: EngineConfig) -> float:
    """Carnot limit 1 - t_cold/t_hot."""
    return 1.0 - config.t_cold / config.t_hot


def otto_ideal(config: EngineConfig) -> float:
    """Ideal (quantum-adiabatic) cycle efficiency 1 - omega1/omega2."""
    return 1.0 - config.omega1 / config.omega2
