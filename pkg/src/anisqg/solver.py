"""
Integrating-factor RK4 solver for the anisotropically dissipated active scalar

    ∂ₜθ + (u·∇)θ + μ Λ_{x1}^{2α} θ + ν Λ_{x2}^{2β} θ = 0,

with u given by the SQG law (-R₂θ, R₁θ) or the porous-medium law
(-R₁R₂θ, R₁R₁θ), plus the diagnostics that monitor the a priori bounds.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Iterator, Literal

import numpy as np

from . import norms
from .spectral import (
    TWO_PI,
    Grid,
    OperatorSpec,
    SpectralField,
    _real_samples_unchecked,
    _spectral_unchecked,
    _velocity_symbols,
    dealias,
    from_spectral,
    plane_wave,
    random_band_limited_field,
    symbol,
    velocity,
)

log = logging.getLogger(__name__)

DT_MIN, DT_MAX = 1e-7, 1e-1
VELOCITY_FLOOR = 1e-8
LP_EXPONENTS = (2.0, 4.0, 8.0, math.inf)
LP_SLACK = 1e-6
MEAN_DRIFT_TOL = 1e-14


class BlowUpError(RuntimeError):
    """Non-finite values appeared while stepping."""

    def __init__(self, t: float, message: str = ""):
        super().__init__(f"blow-up at t={t!r}" + (f": {message}" if message else ""))
        self.t = t


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class PlaneWaveIC:
    k1: int
    k2: int
    amplitude: float = 1.0


@dataclass(frozen=True)
class RandomIC:
    seed: int
    kmax: int
    amplitude: float = 1.0
    decay_rate: float = 2.0


@dataclass(frozen=True)
class CheckpointIC:
    path: str


InitialCondition = PlaneWaveIC | RandomIC | CheckpointIC


@dataclass(frozen=True)
class SimulationConfig:
    n1: int
    n2: int
    alpha: float
    beta: float
    t_end: float
    initial_condition: InitialCondition
    mu: float = 1.0
    nu: float = 1.0
    velocity_law: Literal["sqg", "pm"] = "sqg"
    dt: float | None = None
    cfl_factor: float | None = None
    diagnostics_every: int = 1

    def __post_init__(self):
        Grid(self.n1, self.n2)
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {v}")
        for name in ("mu", "nu"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.velocity_law not in ("sqg", "pm"):
            raise ValueError(f"velocity_law must be 'sqg' or 'pm', got {self.velocity_law!r}")
        if not self.t_end > 0:
            raise ValueError(f"t_end must be > 0, got {self.t_end}")
        if (self.dt is None) == (self.cfl_factor is None):
            raise ValueError("exactly one of dt and cfl_factor must be set")
        if self.dt is not None and not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.cfl_factor is not None and not self.cfl_factor > 0:
            raise ValueError(f"cfl_factor must be > 0, got {self.cfl_factor}")
        if self.diagnostics_every < 1:
            raise ValueError(f"diagnostics_every must be >= 1, got {self.diagnostics_every}")
        ic = self.initial_condition
        if isinstance(ic, (PlaneWaveIC, RandomIC)) and not ic.amplitude > 0:
            raise ValueError(f"initial amplitude must be > 0, got {ic.amplitude}")

    @property
    def grid(self) -> Grid:
        return Grid(self.n1, self.n2)


@dataclass(frozen=True)
class SolverState:
    t: float
    theta: SpectralField
    step: int = 0


# ---------------------------------------------------------------------------
# admissibility


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    regime: Literal["low-alpha", "high-alpha-large-beta", "high-alpha-small-beta", "none"]
    threshold: float


def check_admissibility(alpha: float, beta: float) -> Admissibility:
    """Global-regularity condition on the dissipation exponents.

    ``beta > 1/(2 alpha + 1)`` for ``alpha <= 1/2`` and
    ``beta > (1 - alpha)/(2 alpha)`` for ``1/2 < alpha < 1``. The regime names
    which H¹ argument applies: ``beta > max(alpha, 1/(2 alpha + 1))`` or
    ``alpha > beta > (1 - alpha)/(2 alpha)``.
    """
    if not (0.0 < alpha < 1.0 and 0.0 < beta < 1.0):
        raise ValueError(f"exponents must lie in (0, 1), got alpha={alpha}, beta={beta}")
    threshold = 1.0 / (2 * alpha + 1) if alpha <= 0.5 else (1 - alpha) / (2 * alpha)
    if beta <= threshold:
        return Admissibility(False, "none", threshold)
    if alpha <= 0.5:
        regime = "low-alpha"
    elif beta > max(alpha, 1.0 / (2 * alpha + 1)):
        regime = "high-alpha-large-beta"
    elif alpha > beta:
        regime = "high-alpha-small-beta"
    else:
        # beta == alpha > 1/2: covered by neither strict inequality of the
        # two H¹ propositions, though the combined condition holds
        regime = "high-alpha-large-beta"
    return Admissibility(True, regime, threshold)


# ---------------------------------------------------------------------------
# dynamics


def linear_symbol(grid: Grid, mu: float, nu: float, alpha: float, beta: float) -> np.ndarray:
    """L(k) = μ|k₁|^{2α} + ν|k₂|^{2β}."""
    return mu * symbol(grid, OperatorSpec.directional(1, 2 * alpha)) + nu * symbol(
        grid, OperatorSpec.directional(2, 2 * beta)
    )


def _nonlinear_coeffs(coeffs: np.ndarray, grid: Grid, law: str) -> np.ndarray:
    s1, s2 = _velocity_symbols(grid, law)
    d1 = symbol(grid, OperatorSpec.partial(1))
    d2 = symbol(grid, OperatorSpec.partial(2))
    stack = np.stack([coeffs * s1, coeffs * s2, coeffs * d1, coeffs * d2])
    u1, u2, t1, t2 = _real_samples_unchecked(stack, grid)
    out = _spectral_unchecked(u1 * t1 + u2 * t2, grid)
    out[~grid.dealias_mask] = 0.0
    return out


def nonlinear_term(theta: SpectralField, velocity_law: str = "sqg") -> SpectralField:
    """dealias(u·∇θ), with derivatives in Fourier space and products on the grid."""
    return SpectralField(theta.grid, _nonlinear_coeffs(theta.coeffs, theta.grid, velocity_law))


class _Stepper:
    """IF-RK4 in the variable v = e^{Lt}θ; caches the exponential factors per dt."""

    def __init__(self, config: SimulationConfig):
        self.grid = config.grid
        self.law = config.velocity_law
        self.L = linear_symbol(self.grid, config.mu, config.nu, config.alpha, config.beta)
        self._dt = None

    def _factors(self, dt: float):
        if dt != self._dt:
            self._half = np.exp(-0.5 * dt * self.L)
            self._full = self._half * self._half
            self._dt = dt
        return self._half, self._full

    def __call__(self, c: np.ndarray, dt: float, t: float) -> np.ndarray:
        E, E2 = self._factors(dt)
        N = lambda x: -_nonlinear_coeffs(x, self.grid, self.law)  # noqa: E731
        k1 = N(c)
        k2 = N(E * (c + 0.5 * dt * k1))
        k3 = N(E * c + 0.5 * dt * k2)
        k4 = N(E2 * c + dt * E * k3)
        out = E2 * c + (dt / 6.0) * (E2 * k1 + 2.0 * E * (k2 + k3) + k4)
        if not np.all(np.isfinite(out)):
            raise BlowUpError(t, "non-finite coefficients in RK stage")
        out[~self.grid.dealias_mask] = 0.0
        return out


def step(state: SolverState, dt: float, config: SimulationConfig, _stepper: _Stepper | None = None) -> SolverState:
    """Advance one IF-RK4 step of size dt."""
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    stepper = _stepper or _Stepper(config)
    c = stepper(state.theta.coeffs, dt, state.t)
    return SolverState(state.t + dt, SpectralField(state.theta.grid, c), state.step + 1)


def cfl_dt(state: SolverState, config: SimulationConfig) -> float:
    if config.cfl_factor is None:
        raise ValueError("cfl_dt requires cfl_factor in the configuration")
    g = state.theta.grid
    u1, u2 = velocity(state.theta, config.velocity_law)
    speeds = _real_samples_unchecked(np.stack([u1.coeffs, u2.coeffs]), g)
    umax = max(float(np.max(np.abs(speeds))), VELOCITY_FLOOR)
    dx = TWO_PI / max(g.n1, g.n2)
    return float(np.clip(config.cfl_factor * dx / umax, DT_MIN, DT_MAX))


# ---------------------------------------------------------------------------
# diagnostics


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    l2: float
    lp4: float
    lp8: float
    linf: float
    h1: float
    h2: float
    diss_alpha: float
    diss_beta: float
    A: float
    B: float
    besov: float
    energy_residual: float
    # per-axis parts of A and B for the dissipation–gradient check
    grad1_sq: float = 0.0
    grad2_sq: float = 0.0
    diss_grad1: float = 0.0
    diss_grad2: float = 0.0

    def as_dict(self) -> dict[str, float]:
        return asdict(self)

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in asdict(self).values())


RECORD_FIELDS = tuple(f.name for f in fields(DiagnosticsRecord))


def measure(theta: SpectralField, alpha: float, beta: float, t: float, energy_residual: float = 0.0) -> DiagnosticsRecord:
    """All per-time diagnostics of θ; energy_residual is supplied by the caller."""
    values = from_spectral(theta)
    g = norms.grad_norms(theta, alpha, beta)
    return DiagnosticsRecord(
        t=t,
        l2=norms.l2_norm(theta),
        lp4=norms.lp_of_samples(values, 4.0),
        lp8=norms.lp_of_samples(values, 8.0),
        linf=float(np.max(np.abs(values), initial=0.0)),
        h1=math.sqrt(g.A),
        h2=norms.sobolev_seminorm(theta, 2.0),
        diss_alpha=norms.directional_seminorm(theta, 1, alpha) ** 2,
        diss_beta=norms.directional_seminorm(theta, 2, beta) ** 2,
        A=g.A,
        B=g.B,
        besov=norms.besov_b0_inf(theta),
        energy_residual=energy_residual,
        grad1_sq=g.grad1_sq,
        grad2_sq=g.grad2_sq,
        diss_grad1=g.diss_grad1,
        diss_grad2=g.diss_grad2,
    )


def energy_residual(prev: DiagnosticsRecord, cur: DiagnosticsRecord, mu: float, nu: float) -> float:
    """|Δ(½‖θ‖²)/Δt + μ·diss_alpha + ν·diss_beta| with midpoint dissipation."""
    dt = cur.t - prev.t
    if dt <= 0:
        return 0.0
    d_energy = 0.5 * (cur.l2**2 - prev.l2**2) / dt
    diss = 0.5 * (mu * (prev.diss_alpha + cur.diss_alpha) + nu * (prev.diss_beta + cur.diss_beta))
    return abs(d_energy + diss)


def energy_budget(records: list[DiagnosticsRecord], mu: float, nu: float, quadrature: str = "simpson") -> np.ndarray:
    """Cumulative |‖θ(t)‖² + 2∫(μ diss_alpha + ν diss_beta) - ‖θ₀‖²| per record.

    The dissipation integral uses composite Simpson on uniformly spaced
    records (trapezoid on a trailing odd interval), or plain trapezoid.
    """
    from scipy.integrate import cumulative_simpson, cumulative_trapezoid

    t = np.array([r.t for r in records])
    d = np.array([mu * r.diss_alpha + nu * r.diss_beta for r in records])
    e = np.array([r.l2**2 for r in records])
    if len(records) < 2:
        return np.zeros(len(records))
    if quadrature == "simpson" and len(records) >= 3:
        integral = cumulative_simpson(d, x=t, initial=0.0)
    elif quadrature in ("simpson", "trapezoid"):
        integral = cumulative_trapezoid(d, x=t, initial=0.0)
    else:
        raise ValueError(f"unknown quadrature {quadrature!r}")
    return np.abs(e + 2.0 * integral - e[0])


def verify_dissipation_relation(record: DiagnosticsRecord, theta0_l2: float, alpha: float, beta: float, slack: float = 1e-9) -> bool:
    """Check ‖∂ᵢθ‖^{2(s+1)} <= ‖θ‖^{2s}‖Λ^s_{xᵢ}∂ᵢθ‖² per axis (s = α, β).

    Uses the record's own ‖θ(t)‖₂; the weaker form with ‖θ₀‖₂ follows from
    ‖θ(t)‖₂ <= ‖θ₀‖₂, which is also checked. Summing the two axes gives
    B >= c·A^γ with γ = min(α, β) + 1 once A is bounded below.
    """
    if record.l2 > theta0_l2 * (1 + slack):
        return False
    ok = True
    for grad_sq, diss, s in ((record.grad1_sq, record.diss_grad1, alpha), (record.grad2_sq, record.diss_grad2, beta)):
        lhs = grad_sq ** (s + 1)
        rhs = record.l2 ** (2 * s) * diss
        ok &= lhs <= rhs * (1 + slack)
    return bool(ok)


# ---------------------------------------------------------------------------
# driver


def initial_state(config: SimulationConfig) -> SolverState:
    grid = config.grid
    ic = config.initial_condition
    if isinstance(ic, PlaneWaveIC):
        theta = plane_wave(grid, ic.k1, ic.k2, ic.amplitude)
        return SolverState(0.0, dealias(theta))
    if isinstance(ic, RandomIC):
        f = random_band_limited_field(grid, ic.seed, ic.kmax, "decaying", ic.decay_rate)
        peak = float(np.max(np.abs(from_spectral(f))))
        return SolverState(0.0, dealias(f * (ic.amplitude / peak)))
    if isinstance(ic, CheckpointIC):
        from .persistence import read_checkpoint

        ck = read_checkpoint(ic.path)
        if (ck.n1, ck.n2) != (config.n1, config.n2):
            raise ValueError(f"checkpoint grid {ck.n1}x{ck.n2} does not match config {config.n1}x{config.n2}")
        return ck.state
    raise TypeError(f"unsupported initial condition {ic!r}")


@dataclass
class Monitor:
    """Runtime checks of the a priori bounds; violations do not stop stepping."""

    theta0_l2: float
    mean0: complex
    mean_scale: float
    last: dict[float, float] = field(default_factory=dict)
    last_t: float = 0.0
    reference: dict[float, float] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    @classmethod
    def start(cls, state: SolverState, record: DiagnosticsRecord) -> "Monitor":
        lp = _lp_table(record)
        return cls(
            theta0_l2=record.l2,
            mean0=complex(state.theta.coeffs[0, 0]),
            mean_scale=max(1.0, record.linf),
            last=dict(lp),
            last_t=record.t,
            reference=dict(lp),
        )

    def update(self, state: SolverState, record: DiagnosticsRecord) -> None:
        dt = record.t - self.last_t
        for p, value in _lp_table(record).items():
            allowed = self.last[p] + LP_SLACK * self.reference[p] * max(dt, 0.0)
            if value > allowed:
                self.violations.append(f"t={record.t:.6g}: L^{p:g} norm increased to {value:.17g} (> {allowed:.17g})")
            self.last[p] = value
        self.last_t = record.t
        drift = abs(complex(state.theta.coeffs[0, 0]) - self.mean0)
        if drift > MEAN_DRIFT_TOL * self.mean_scale:
            self.violations.append(f"t={record.t:.6g}: mean drifted by {drift:.3e}")


def _lp_table(r: DiagnosticsRecord) -> dict[float, float]:
    return {2.0: r.l2, 4.0: r.lp4, 8.0: r.lp8, math.inf: r.linf}


@dataclass
class RunResult:
    config: SimulationConfig
    admissibility: Admissibility | None
    records: list[DiagnosticsRecord]
    final_state: SolverState
    blew_up: bool = False
    blowup_t: float | None = None
    violations: list[str] = field(default_factory=list)

    @property
    def exploratory(self) -> bool:
        return self.admissibility is None or not self.admissibility.admissible


def admissibility_for(config: SimulationConfig) -> Admissibility | None:
    try:
        return check_admissibility(config.alpha, config.beta)
    except ValueError:
        # endpoint exponents (alpha or beta == 1) lie outside the theorem's range
        return None


def iterate(config: SimulationConfig, state: SolverState | None = None) -> Iterator[tuple[SolverState, bool]]:
    """Yield (state, is_diagnostics_step) from the initial state to t_end.

    Fixed-dt runs take round((t_end - t0)/dt) steps with t = t0 + k·dt;
    CFL runs shorten the last step to land on t_end.
    """
    state = state if state is not None else initial_state(config)
    stepper = _Stepper(config)
    t0, k0 = state.t, state.step
    yield state, True
    if config.dt is not None:
        nsteps = int(round((config.t_end - t0) / config.dt))
        for k in range(1, nsteps + 1):
            c = stepper(state.theta.coeffs, config.dt, state.t)
            state = SolverState(t0 + k * config.dt, SpectralField(state.theta.grid, c), k0 + k)
            yield state, (k % config.diagnostics_every == 0) or k == nsteps
        return
    k = 0
    while state.t < config.t_end * (1 - 1e-14):
        dt = min(cfl_dt(state, config), config.t_end - state.t)
        c = stepper(state.theta.coeffs, dt, state.t)
        k += 1
        t_new = config.t_end if dt == config.t_end - state.t else state.t + dt
        state = SolverState(t_new, SpectralField(state.theta.grid, c), k0 + k)
        yield state, (k % config.diagnostics_every == 0) or state.t >= config.t_end * (1 - 1e-14)


def run(config: SimulationConfig, state: SolverState | None = None) -> RunResult:
    """Integrate to t_end, recording diagnostics every ``diagnostics_every`` steps.

    Inadmissible exponents are run anyway and labelled exploratory. A blow-up
    stops the run; the result keeps every finite record gathered so far.
    """
    adm = admissibility_for(config)
    if adm is not None and not adm.admissible:
        log.info("alpha=%g beta=%g outside the global-regularity region; exploratory run", config.alpha, config.beta)
    records: list[DiagnosticsRecord] = []
    monitor: Monitor | None = None
    current = state
    result = None
    try:
        for current, emit in iterate(config, state):
            if not emit:
                continue
            rec = measure(current.theta, config.alpha, config.beta, current.t)
            if records:
                rec = _with_residual(rec, energy_residual(records[-1], rec, config.mu, config.nu))
            if not rec.is_finite():
                raise BlowUpError(current.t, "non-finite diagnostics")
            if monitor is None:
                monitor = Monitor.start(current, rec)
            else:
                monitor.update(current, rec)
            records.append(rec)
    except BlowUpError as exc:
        log.warning("%s", exc)
        result = RunResult(config, adm, records, current, blew_up=True, blowup_t=exc.t)
    if result is None:
        result = RunResult(config, adm, records, current)
    if monitor is not None:
        result.violations = list(monitor.violations)
    return result


def _with_residual(rec: DiagnosticsRecord, residual: float) -> DiagnosticsRecord:
    d = rec.as_dict()
    d["energy_residual"] = residual
    return DiagnosticsRecord(**d)
