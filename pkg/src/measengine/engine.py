"""Engine cycles built from measurement strokes.

Two cycle shapes:

* three-stroke: thermalize (TP), excitation measurement (QMI), entropy-
  preserving damping measurement (QMII), and back to TP.
* five-stroke: TP, adiabatic gap stretch 1 -> r (API), QMI, QMII,
  adiabatic return r -> 1 (APII), back to TP.

Each cycle is evaluated two independent ways.  The numeric path evolves
the density matrix stroke by stroke through the Kraus channels and reads
energies off the state.  The analytic path evaluates the closed-form
bookkeeping for the same cycle.  They must agree to ~1e-10; the verify
suite and tests enforce that.

Sign conventions (all energies in units of the bare level spacing):
q_in is the energy imported by QMI, q_out = E_TP - E_APII is the energy
exchanged with the reservoir on thermalization (negative when the engine
dissipates), w_api = E_TP - E_API, w_apii = E_QMII - E_APII, delta is the
isentropic energy drop across QMII, w_ext = q_in + q_out is the net
extracted work, and eta = w_ext / q_in.

Adiabatic strokes are population-preserving Hamiltonian relabelings
(frequency 1 <-> r); the cycle never populates off-diagonal elements,
so nothing more is needed.  Thermalization is a full reset to the Gibbs
state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .channels import (
    NoIsentropicStrengthError,
    apply_unselective,
    first_channel,
    isentropic_strength,
    second_channel,
)
from .states import (
    DensityMatrix,
    Hamiltonian,
    gibbs_state,
    mean_energy,
    von_neumann_entropy,
)

GAMMA_NUMERIC_MIN = 0.5  # below this the population-swapping channel does not exist

FLAG_ETA_ZERO_INPUT = "eta-zero-input"
FLAG_OUTSIDE_RANGE = "gamma-outside-engine-range"
FLAG_NO_PARTNER = "no-isentropic-partner"


class InvalidCycleError(ValueError):
    """Cycle parameters violate a mode-dependent bound."""


class UnrealizableChannelError(InvalidCycleError):
    """Parameters pass the work bound but the damping channel cannot exist."""


class CycleMode(str, Enum):
    THREE_STROKE = "three"
    FIVE_STROKE = "five"


@dataclass(frozen=True)
class CycleParams:
    """Cycle control knobs: b = beta*gap, strength fraction gamma, ratio r."""

    b: float
    gamma: float
    mode: CycleMode
    r: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mode", CycleMode(self.mode))
        if not math.isfinite(self.b) or self.b <= 0:
            raise InvalidCycleError(f"b must be finite and positive, got {self.b}")
        if not math.isfinite(self.gamma) or not 0.0 <= self.gamma <= 1.0:
            raise InvalidCycleError(f"gamma must lie in [0, 1], got {self.gamma}")
        if not math.isfinite(self.r) or self.r < 1.0:
            raise InvalidCycleError(f"frequency ratio r must be >= 1, got {self.r}")
        if self.mode is CycleMode.THREE_STROKE and self.r != 1.0:
            raise InvalidCycleError(f"three-stroke cycle requires r = 1, got r = {self.r}")

    @property
    def strength(self) -> float:
        """Excitation strength P = gamma * (1 - e^-b)."""
        return self.gamma * (1.0 - math.exp(-self.b))


@dataclass(frozen=True, eq=False)
class StrokeRecord:
    name: str  # TP, API, QMI, QMII, APII
    state_after: DensityMatrix
    hamiltonian_after: Hamiltonian
    energy_after: float
    entropy_after: float


@dataclass(frozen=True, eq=False)
class EnergyLedger:
    """Per-cycle energy bookkeeping from one evaluation path."""

    params: CycleParams
    source: str  # "numeric" or "analytic"
    strokes: tuple[StrokeRecord, ...]
    q_in: float
    q_out: float
    w_api: float
    w_apii: float
    delta: float
    w_ext: float
    eta: float
    q_used: float  # NaN when no isentropic partner strength exists
    valid: bool    # gamma within the mode's engine range
    flags: tuple[str, ...] = ()

    def stroke(self, name: str) -> StrokeRecord:
        for rec in self.strokes:
            if rec.name == name:
                return rec
        raise KeyError(f"no stroke named {name!r} in this ledger")


def gamma_bounds(mode: CycleMode | str, r: float = 1.0) -> tuple[float, float]:
    """Engine-valid gamma range: [1/2, 1] three-stroke, [1/(1+r), 1] five-stroke."""
    mode = CycleMode(mode)
    if not math.isfinite(r) or r < 1.0:
        raise InvalidCycleError(f"frequency ratio r must be >= 1, got {r}")
    if mode is CycleMode.THREE_STROKE:
        return (0.5, 1.0)
    return (1.0 / (1.0 + r), 1.0)


def _record(name: str, state: DensityMatrix, h: Hamiltonian) -> StrokeRecord:
    return StrokeRecord(name, state, h, mean_energy(state, h), von_neumann_entropy(state))


def _eta(w_ext: float, q_in: float, flags: list[str]) -> float:
    if q_in == 0.0:
        flags.append(FLAG_ETA_ZERO_INPUT)
        return 0.0
    return w_ext / q_in


def run_three_stroke_numeric(p: CycleParams) -> EnergyLedger:
    """Evolve gibbs -> QMI -> QMII numerically and ledger the energies."""
    if p.mode is not CycleMode.THREE_STROKE:
        raise InvalidCycleError(f"three-stroke run got mode {p.mode.value!r}")
    lo, hi = gamma_bounds(p.mode)
    if not lo <= p.gamma <= hi:
        raise InvalidCycleError(
            f"gamma = {p.gamma:g} outside the three-stroke engine range [{lo:g}, {hi:g}]"
        )
    h = Hamiltonian.qubit(1.0)
    rho_th = gibbs_state(h, p.b)
    strength = p.strength
    rho_m = apply_unselective(first_channel(strength), rho_th)
    q = isentropic_strength(strength, p.b)
    rho_n = apply_unselective(second_channel(q), rho_m)

    tp = _record("TP", rho_th, h)
    qmi = _record("QMI", rho_m, h)
    qmii = _record("QMII", rho_n, h)

    q_in = qmi.energy_after - tp.energy_after
    q_out = tp.energy_after - qmii.energy_after
    delta = qmi.energy_after - qmii.energy_after
    w_ext = q_in + q_out
    flags: list[str] = []
    eta = _eta(w_ext, q_in, flags)
    return EnergyLedger(
        params=p, source="numeric", strokes=(tp, qmi, qmii),
        q_in=q_in, q_out=q_out, w_api=0.0, w_apii=0.0, delta=delta,
        w_ext=w_ext, eta=eta, q_used=q, valid=True, flags=tuple(flags),
    )


def run_five_stroke_numeric(p: CycleParams) -> EnergyLedger:
    """Evolve the five-stroke cycle numerically and ledger the energies."""
    if p.mode is not CycleMode.FIVE_STROKE:
        raise InvalidCycleError(f"five-stroke run got mode {p.mode.value!r}")
    lo, hi = gamma_bounds(p.mode, p.r)
    if not lo <= p.gamma <= hi:
        raise InvalidCycleError(
            f"gamma = {p.gamma:g} outside the five-stroke engine range [{lo:g}, {hi:g}]"
        )
    if p.gamma < GAMMA_NUMERIC_MIN:
        raise UnrealizableChannelError(
            f"isentropic channel unrealizable: gamma = {p.gamma:g} < {GAMMA_NUMERIC_MIN} "
            "leaves no damping strength in [0, 1] that swaps the populations"
        )
    h1 = Hamiltonian.qubit(1.0)
    hr = Hamiltonian.qubit(p.r)
    rho_th = gibbs_state(h1, p.b)
    strength = p.strength
    rho_m = apply_unselective(first_channel(strength), rho_th)
    q = isentropic_strength(strength, p.b)
    rho_n = apply_unselective(second_channel(q), rho_m)

    tp = _record("TP", rho_th, h1)
    api = _record("API", rho_th, hr)    # gap stretch, populations untouched
    qmi = _record("QMI", rho_m, hr)
    qmii = _record("QMII", rho_n, hr)
    apii = _record("APII", rho_n, h1)   # gap restored before thermalization

    w_api = tp.energy_after - api.energy_after
    q_in = qmi.energy_after - api.energy_after
    delta = qmi.energy_after - qmii.energy_after
    w_apii = qmii.energy_after - apii.energy_after
    q_out = tp.energy_after - apii.energy_after
    w_ext = q_in + q_out
    flags: list[str] = []
    eta = _eta(w_ext, q_in, flags)
    return EnergyLedger(
        params=p, source="numeric", strokes=(tp, api, qmi, qmii, apii),
        q_in=q_in, q_out=q_out, w_api=w_api, w_apii=w_apii, delta=delta,
        w_ext=w_ext, eta=eta, q_used=q, valid=True, flags=tuple(flags),
    )


def _analytic_pieces(p: CycleParams):
    """Shared closed-form ingredients, in overflow-safe form.

    ground = e^(b/2)/Z = 1/(1 + e^-b) is the thermal ground population;
    pumped = P * ground is the population moved up by QMI.
    """
    x = math.exp(-p.b)
    ground = 1.0 / (1.0 + x)
    excited = x / (1.0 + x)
    th = math.tanh(0.5 * p.b)
    strength = p.strength
    pumped = strength * ground
    # Post-QMI populations and their QMII swap.
    m_pops = ((1.0 - strength) * ground, excited + pumped)
    n_pops = (m_pops[1], m_pops[0])
    return th, strength, pumped, m_pops, n_pops


def _partner_strength(strength: float, b: float, flags: list[str]) -> float:
    try:
        return isentropic_strength(strength, b)
    except NoIsentropicStrengthError:
        flags.append(FLAG_NO_PARTNER)
        return math.nan


def analytic_three_stroke(p: CycleParams) -> EnergyLedger:
    """Closed-form three-stroke ledger; defined for all gamma in [0, 1].

    Outside the engine range [1/2, 1] the values are still the formula
    values (useful for plotting the full efficiency curve) and the ledger
    is flagged invalid.
    """
    if p.mode is not CycleMode.THREE_STROKE:
        raise InvalidCycleError(f"three-stroke evaluation got mode {p.mode.value!r}")
    th, strength, pumped, m_pops, n_pops = _analytic_pieces(p)
    q_in = pumped
    q_out = pumped - th
    delta = 2.0 * pumped - th  # equals w_ext up to roundoff
    w_ext = q_in + q_out
    flags: list[str] = []
    if p.gamma == 0.0:
        flags.append(FLAG_ETA_ZERO_INPUT)
        eta = 0.0
    else:
        eta = 2.0 - 1.0 / p.gamma
    q_used = _partner_strength(strength, p.b, flags)
    lo, hi = gamma_bounds(p.mode)
    valid = lo <= p.gamma <= hi
    if not valid:
        flags.append(FLAG_OUTSIDE_RANGE)
    h = Hamiltonian.qubit(1.0)
    strokes = (
        _record("QMI", DensityMatrix.from_populations(m_pops), h),
        _record("QMII", DensityMatrix.from_populations(n_pops), h),
    )
    return EnergyLedger(
        params=p, source="analytic", strokes=strokes,
        q_in=q_in, q_out=q_out, w_api=0.0, w_apii=0.0, delta=delta,
        w_ext=w_ext, eta=eta, q_used=q_used, valid=valid, flags=tuple(flags),
    )


def analytic_five_stroke(p: CycleParams) -> EnergyLedger:
    """Closed-form five-stroke ledger; defined for all gamma in [0, 1].

    eta is evaluated as (gamma*(1+r) - 1)/(gamma*r), which is exactly
    zero at the lower bound gamma = 1/(1+r).
    """
    if p.mode is not CycleMode.FIVE_STROKE:
        raise InvalidCycleError(f"five-stroke evaluation got mode {p.mode.value!r}")
    th, strength, pumped, m_pops, n_pops = _analytic_pieces(p)
    r = p.r
    # r-scaled three-stroke blocks: at r = 1 every entry degenerates to the
    # three-stroke value bit for bit.
    w_api = 0.5 * (r - 1.0) * th
    q_in = r * pumped
    delta = r * (2.0 * pumped - th)
    w_apii = (r - 1.0) * (0.5 * th - pumped)
    q_out = pumped - th
    w_ext = q_in + q_out
    flags: list[str] = []
    if p.gamma == 0.0:
        flags.append(FLAG_ETA_ZERO_INPUT)
        eta = 0.0
    else:
        eta = (p.gamma * (1.0 + r) - 1.0) / (p.gamma * r)
    q_used = _partner_strength(strength, p.b, flags)
    lo, hi = gamma_bounds(p.mode, r)
    valid = lo <= p.gamma <= hi
    if not valid:
        flags.append(FLAG_OUTSIDE_RANGE)
    h1 = Hamiltonian.qubit(1.0)
    hr = Hamiltonian.qubit(r)
    thermal = gibbs_state(h1, p.b)
    rho_m = DensityMatrix.from_populations(m_pops)
    rho_n = DensityMatrix.from_populations(n_pops)
    strokes = (
        _record("TP", thermal, h1),
        _record("API", thermal, hr),
        _record("QMI", rho_m, hr),
        _record("QMII", rho_n, hr),
        _record("APII", rho_n, h1),
    )
    return EnergyLedger(
        params=p, source="analytic", strokes=strokes,
        q_in=q_in, q_out=q_out, w_api=w_api, w_apii=w_apii, delta=delta,
        w_ext=w_ext, eta=eta, q_used=q_used, valid=valid, flags=tuple(flags),
    )


def numeric_realizable(p: CycleParams) -> bool:
    """True when the numeric cycle can run: gamma within bounds and >= 1/2."""
    lo, hi = gamma_bounds(p.mode, p.r)
    return max(lo, GAMMA_NUMERIC_MIN) <= p.gamma <= hi


def run_numeric(p: CycleParams) -> EnergyLedger:
    """Dispatch to the numeric runner for the mode in `p`."""
    if p.mode is CycleMode.THREE_STROKE:
        return run_three_stroke_numeric(p)
    return run_five_stroke_numeric(p)


def run_analytic(p: CycleParams) -> EnergyLedger:
    """Dispatch to the closed-form evaluator for the mode in `p`."""
    if p.mode is CycleMode.THREE_STROKE:
        return analytic_three_stroke(p)
    return analytic_five_stroke(p)


def first_law_residual(ledger: EnergyLedger) -> float:
    """Signed five-stroke energy-balance residual; zero for a closed cycle."""
    if ledger.params.mode is not CycleMode.FIVE_STROKE:
        raise InvalidCycleError("first-law residual is defined for five-stroke ledgers")
    return ledger.q_out + ledger.q_in - ledger.w_api - ledger.delta - ledger.w_apii
