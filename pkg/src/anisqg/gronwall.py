"""
Explicit bounds for the logarithmic Gronwall inequality

    A' + B <= [l + m ln(A+e) + n (ln(A+B+e))^α] (A+e) + f,
    B >= C1 A^γ,   n <= K (A+B+e)^β,   β < (γ-1)/γ,

and a brute-force ODE oracle to check them against.

The certificate follows the constructive argument: with A₁ = A+e+σ and
B₁ = A+B+e+σ one shows (ln B₁)^α <= C2 B₁^θ₁/A₁^θ₂ + C3 ln A₁, absorbs the
n-term by Young's inequality, and applies the linear Gronwall inequality to
X = ln A₁ + ∫B₁/(2A₁). σ can be astronomically large for small γθ₁ - θ₂, so
all σ-dependent quantities are carried as a = ln(e+σ) and every bound is
compared in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid

E = math.e
GRID_POINTS = 400
A1_GRID_END = 1e12
B1_GRID_END = 1e16
LOG_SIGMA_CAP = 700.0  # ln(e+σ) above this would overflow e^X
HYPOTHESIS_SLACK = 1e-9
DERIVATIVE_TOL = 0.01
ODE_DT = 1e-4
SUBSTEP_THRESHOLD = 0.01


class GronwallError(ValueError):
    pass


class CertificateFailure(GronwallError):
    """No σ below the cap satisfies the two pointwise inequalities."""


class TrajectoryError(GronwallError):
    """Trajectory samples whose derivative column disagrees with A."""


# ---------------------------------------------------------------------------
# coefficient presets


class Coefficient:
    """A closed-form coefficient function of time."""

    def __call__(self, t):
        raise NotImplementedError

    def integral(self, t):
        """∫₀ᵗ of the coefficient."""
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(Coefficient):
    value: float

    def __call__(self, t):
        return self.value + 0.0 * np.asarray(t, dtype=float)

    def integral(self, t):
        return self.value * np.asarray(t, dtype=float)

    def describe(self) -> str:
        return f"constant({self.value!r})"


@dataclass(frozen=True)
class Polynomial(Coefficient):
    """c₀ + c₁t + c₂t² + ..."""

    coeffs: tuple[float, ...]

    def __call__(self, t):
        return np.polynomial.polynomial.polyval(np.asarray(t, dtype=float), self.coeffs)

    def integral(self, t):
        anti = np.polynomial.polynomial.polyint(self.coeffs)
        return np.polynomial.polynomial.polyval(np.asarray(t, dtype=float), anti)

    def describe(self) -> str:
        return "polynomial(" + ", ".join(repr(c) for c in self.coeffs) + ")"


@dataclass(frozen=True)
class Piecewise(Coefficient):
    """Piecewise constant: values[i] on [breaks[i-1], breaks[i])."""

    breaks: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(self.breaks) + 1:
            raise GronwallError("piecewise needs len(values) == len(breaks) + 1")
        if list(self.breaks) != sorted(self.breaks):
            raise GronwallError("piecewise breaks must be ascending")

    def __call__(self, t):
        idx = np.searchsorted(np.asarray(self.breaks), np.asarray(t, dtype=float), side="right")
        return np.asarray(self.values)[idx]

    def integral(self, t):
        t = np.asarray(t, dtype=float)
        edges = np.concatenate([[0.0], self.breaks])
        vals = np.asarray(self.values, dtype=float)
        total = np.zeros_like(t)
        for i, v in enumerate(vals):
            lo = edges[i]
            hi = self.breaks[i] if i < len(self.breaks) else np.inf
            total = total + v * np.clip(np.minimum(t, hi) - lo, 0.0, None)
        return total

    def describe(self) -> str:
        return f"piecewise(breaks={list(self.breaks)}, values={list(self.values)})"


ZERO = Constant(0.0)


# ---------------------------------------------------------------------------
# problem and certificate


@dataclass(frozen=True)
class GronwallProblem:
    gamma: float
    alpha_g: float
    beta_g: float
    C1: float
    K: float = 0.0
    T: float = 1.0
    A0: float = 1.0
    l: Coefficient = ZERO
    m: Coefficient = ZERO
    n: Coefficient = ZERO
    f: Coefficient = ZERO

    def __post_init__(self):
        if not self.gamma > 1:
            raise GronwallError(f"gamma must exceed 1, got {self.gamma}")
        if not self.alpha_g > 0:
            raise GronwallError(f"alpha_g must be positive, got {self.alpha_g}")
        top = (self.gamma - 1) / self.gamma
        if not 0 <= self.beta_g < top:
            raise GronwallError(f"beta_g must lie in [0, (gamma-1)/gamma) = [0, {top:.6g}), got {self.beta_g}")
        if not self.C1 > 0:
            raise GronwallError(f"C1 must be positive, got {self.C1}")
        if not self.K >= 0:
            raise GronwallError(f"K must be nonnegative, got {self.K}")
        if not self.T > 0:
            raise GronwallError(f"T must be positive, got {self.T}")
        if not self.A0 >= 0:
            raise GronwallError(f"A0 must be nonnegative, got {self.A0}")
        ts = np.linspace(0.0, self.T, 2001)
        for name in ("l", "m", "n", "f"):
            if np.min(getattr(self, name)(ts)) < 0:
                raise GronwallError(f"coefficient {name} is negative somewhere on [0, T]")

    def rhs(self, t, A, B):
        """[l + m ln(A+e) + n (ln(A+B+e))^α](A+e) + f."""
        A = np.maximum(A, 0.0)
        B = np.maximum(B, 0.0)
        growth = self.l(t) + self.m(t) * np.log(A + E) + self.n(t) * np.log(A + B + E) ** self.alpha_g
        return growth * (A + E) + self.f(t)


def choose_thetas(gamma: float, beta_g: float) -> tuple[float, float]:
    """θ₁ at the midpoint of (β/(γ-1), 1-β), θ₂ = β + θ₁."""
    theta1 = 0.5 * (beta_g / (gamma - 1) + 1 - beta_g)
    return theta1, beta_g + theta1


def absorbed_constant(C2: float, K: float, theta2: float) -> float:
    """sup_{x>0} (C2 K x^θ₂ - x/2), attained at x* = (2 C2 K θ₂)^(1/(1-θ₂))."""
    if K == 0:
        return 0.0
    x_star = (2 * C2 * K * theta2) ** (1 / (1 - theta2))
    return C2 * K * (1 - theta2) * x_star**theta2


@dataclass(frozen=True)
class _Constants:
    gamma: float
    alpha: float
    C1: float
    theta1: float
    theta2: float
    C2: float = 1.0
    C3: float = 1.0

    @property
    def eps(self) -> float:
        return self.gamma * self.theta1 - self.theta2

    @property
    def log_low(self) -> float:
        # ln of C1 / 2^(γ-1)
        return math.log(self.C1) - (self.gamma - 1) * math.log(2)

    def lower_log_b1(self, a):
        """ln of the lower point max(C1 A₁^γ / 2^(γ-1), A₁) for a = ln A₁."""
        return np.maximum(self.log_low + self.gamma * np.asarray(a, dtype=float), a)

    def F_at_lower(self, a):
        """F(B₁) at the lower point: C2 B₁^θ₁ A₁^-θ₂ + C3 ln A₁ - (ln B₁)^α."""
        a = np.asarray(a, dtype=float)
        b = self.lower_log_b1(a)
        return self.C2 * np.exp(self.theta1 * b - self.theta2 * a) + self.C3 * a - b**self.alpha

    def tail(self, a: float) -> float:
        """ln c + εa - α ln(ln(C1/2^(γ-1)) + γa): a convex sufficient condition for (a)."""
        v = self.log_low + self.gamma * a
        if v <= 0:
            return -math.inf
        ln_c = math.log(self.C2) + self.theta1 * self.log_low
        return ln_c + self.eps * a - self.alpha * math.log(v)

    def tail_start(self) -> float:
        """First a where the C1 A₁^γ branch dominates and the tail is nondecreasing."""
        branch = -self.log_low / (self.gamma - 1)
        slope = (self.alpha * self.gamma / self.eps - self.log_low) / self.gamma
        return max(branch, slope, math.log(A1_GRID_END))

    def phi(self, b):
        """log form of (b): C2 θ₁ (C1/2^(γ-1))^(θ₂/γ) B₁^(θ₁-θ₂/γ) >= α (ln B₁)^(α-1), b = ln B₁."""
        b = np.asarray(b, dtype=float)
        return (
            math.log(self.C2 * self.theta1)
            + (self.theta2 / self.gamma) * self.log_low
            + (self.eps / self.gamma) * b
            - math.log(self.alpha)
            - (self.alpha - 1) * np.log(b)
        )

    def phi_min(self, b_min: float) -> float:
        """Exact minimum of φ on [b_min, ∞)."""
        b = b_min
        if self.alpha > 1:
            b = max(b_min, (self.alpha - 1) * self.gamma / self.eps)
        return float(self.phi(b))


def _condition_a(c: _Constants, a0: float) -> bool:
    a_end = max(a0, c.tail_start())
    grid = np.linspace(a0, a_end, GRID_POINTS)
    return bool(np.all(c.F_at_lower(grid) >= 0)) and c.tail(a_end) >= 0


def _condition_b(c: _Constants, a0: float) -> bool:
    b_min = float(c.lower_log_b1(a0))
    return b_min > 0 and c.phi_min(b_min) >= 0


def _feasible(c: _Constants, a0: float) -> bool:
    return _condition_a(c, a0) and _condition_b(c, a0)


def _log_e_plus(x: float) -> float:
    return math.log(E + x)


def find_log_sigma(c: _Constants, tol: float = 1e-12) -> float:
    """Smallest a = ln(e+σ) above the floor at which both conditions hold (scan then bisect)."""
    log_floor = math.log(2 / c.C1) / (c.gamma - 1)
    if log_floor > LOG_SIGMA_CAP:
        raise CertificateFailure("sigma floor (2/C1)^(1/(gamma-1)) - e exceeds the cap")
    floor = max(math.exp(log_floor) - E, 0.0)
    lo = _log_e_plus(floor)
    if _feasible(c, lo):
        return lo
    hi = lo
    step = 1.0
    while True:
        hi = lo + step
        if hi > LOG_SIGMA_CAP:
            if _feasible(c, LOG_SIGMA_CAP):
                hi = LOG_SIGMA_CAP
                break
            raise CertificateFailure(
                f"no sigma with ln(e+sigma) <= {LOG_SIGMA_CAP} satisfies the key bound "
                f"(gamma={c.gamma}, alpha={c.alpha}, theta1={c.theta1}, theta2={c.theta2})"
            )
        if _feasible(c, hi):
            break
        lo, step = hi, step * 2
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if _feasible(c, mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class GronwallCertificate:
    problem: GronwallProblem
    log_e_sigma: float  # ln(e + σ)
    theta1: float
    theta2: float
    C2: float
    C3: float
    C_star: float
    X0: float

    @property
    def sigma(self) -> float:
        return math.exp(self.log_e_sigma) - E

    def X(self, t):
        """e^{∫(m + C3 n)} (X0 + ∫(1 + C* + l + f)), the bound on ln A₁ + ∫B₁/(2A₁)."""
        p = self.problem
        t = np.asarray(t, dtype=float)
        growth = p.m.integral(t) + self.C3 * p.n.integral(t)
        forcing = (1 + self.C_star) * t + p.l.integral(t) + p.f.integral(t)
        return np.exp(growth) * (self.X0 + forcing)

    def log_A_bound(self, t):
        return self.X(t)

    def A_bound(self, t):
        with np.errstate(over="ignore"):
            return np.exp(self.X(t))

    def log_B_integral_bound(self, t):
        X = self.X(t)
        return math.log(2) + np.log(X) + X

    def B_integral_bound(self, t):
        with np.errstate(over="ignore"):
            return 2 * self.X(t) * np.exp(self.X(t))

    def constants(self) -> _Constants:
        p = self.problem
        return _Constants(p.gamma, p.alpha_g, p.C1, self.theta1, self.theta2, self.C2, self.C3)

    def verification_grid(self, points: int = GRID_POINTS) -> dict[str, float]:
        """Minimum of each proof inequality on log-spaced A₁, B₁ grids (log form)."""
        c = self.constants()
        a0 = self.log_e_sigma
        a = np.linspace(a0, max(a0, math.log(A1_GRID_END)), points)
        b_lo = float(c.lower_log_b1(a0))
        b = np.linspace(b_lo, max(b_lo, math.log(B1_GRID_END)), points)
        return {
            "min_F_at_lower": float(np.min(c.F_at_lower(a))),
            "min_phi": float(np.min(c.phi(b))),
            "phi_exact_min": c.phi_min(b_lo),
            "tail_value": c.tail(max(a0, c.tail_start())),
        }

    def summary(self) -> dict:
        return {
            "sigma": self.sigma,
            "log_e_sigma": self.log_e_sigma,
            "theta1": self.theta1,
            "theta2": self.theta2,
            "C2": self.C2,
            "C3": self.C3,
            "C_star": self.C_star,
            "X0": self.X0,
            "X_T": float(self.X(self.problem.T)),
        }


def build_certificate(problem: GronwallProblem) -> GronwallCertificate:
    theta1, theta2 = choose_thetas(problem.gamma, problem.beta_g)
    c = _Constants(problem.gamma, problem.alpha_g, problem.C1, theta1, theta2)
    if not (theta2 < 1 and theta2 < problem.gamma * theta1):
        raise CertificateFailure(f"theta choice violates its constraints: theta1={theta1}, theta2={theta2}")
    a = find_log_sigma(c)
    X0 = a + math.log1p(problem.A0 * math.exp(-a))  # ln(A0 + e + σ)
    return GronwallCertificate(
        problem, a, theta1, theta2, c.C2, c.C3, absorbed_constant(c.C2, problem.K, theta2), X0
    )


# ---------------------------------------------------------------------------
# trajectories


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    A: np.ndarray
    B: np.ndarray
    dA: np.ndarray
    truncated: bool = False
    breaks: tuple[float, ...] = ()  # times where the driving coefficients jump


@dataclass(frozen=True)
class TrajectoryCheck:
    hypotheses_ok: bool
    bound_ok: bool
    margin: float
    failures: tuple[str, ...] = ()


def _random_piecewise(rng: np.random.Generator, T: float, pieces: int, lo: float, hi: float) -> Piecewise:
    breaks = np.sort(rng.uniform(0.0, T, size=pieces - 1))
    return Piecewise(tuple(float(b) for b in breaks), tuple(float(v) for v in rng.uniform(lo, hi, size=pieces)))


def synth_trajectory(problem: GronwallProblem, mode: str = "saturating", seed: int = 0, dt: float = ODE_DT) -> Trajectory:
    """Integrate a trajectory satisfying the hypotheses with classical RK4.

    saturating: B = C1 A^γ, A' = RHS - B (equality in both relations)
    decaying: B = C1 A^γ, A' = -B
    random-coefficient: B = C1 A^γ (1 + r(t)), A' = λ(t) RHS - B with random
    piecewise-constant λ ∈ [0, 1], r >= 0 drawn from ``seed``.
    """
    p = problem
    gamma, C1, alpha = p.gamma, p.C1, p.alpha_g
    steps = int(round(p.T / dt))
    ts = np.linspace(0.0, steps * dt, steps + 1)
    half = np.linspace(0.0, steps * dt, 2 * steps + 1)  # RK4 stages sit on the half-step grid
    if mode == "saturating":
        lam_c, r_c = Constant(1.0), ZERO
    elif mode == "decaying":
        lam_c, r_c = ZERO, ZERO
    elif mode == "random-coefficient":
        rng = np.random.Generator(np.random.PCG64(seed))
        lam_c = _random_piecewise(rng, p.T, 5, 0.0, 1.0)
        r_c = _random_piecewise(rng, p.T, 5, 0.0, 2.0)
    else:
        raise GronwallError(f"unknown trajectory mode {mode!r}")
    lam, r = lam_c(half), r_c(half)
    # plain float lists: the stepping loop is scalar and numpy scalars are slow
    L, M, N, Fc = (list(map(float, c(half))) for c in (p.l, p.m, p.n, p.f))
    lam, r = list(map(float, lam)), list(map(float, r))
    log = math.log

    def b_of(j, A):
        return C1 * max(A, 0.0) ** gamma * (1.0 + r[j])

    def deriv(j, A):
        A = max(A, 0.0)
        B = b_of(j, A)
        if lam[j] == 0.0:
            return -B
        growth = L[j] + M[j] * log(A + E) + N[j] * log(A + B + E) ** alpha
        return lam[j] * (growth * (A + E) + Fc[j]) - B

    def slow_deriv(t, A):
        A = max(A, 0.0)
        B = C1 * A**gamma * (1.0 + float(r_c(t)))
        return float(lam_c(t)) * float(p.rhs(t, A, B)) - B

    def substeps(t0, a, count):
        # fallback for steps where A changes by more than 1%: RK4 on a finer grid
        h = dt / count
        for q in range(count):
            t = t0 + q * h
            k1 = slow_deriv(t, a)
            k2 = slow_deriv(t + h / 2, a + h / 2 * k1)
            k3 = slow_deriv(t + h / 2, a + h / 2 * k2)
            k4 = slow_deriv(t + h, a + h * k3)
            a = max(a + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4), 0.0)
        return a

    A = [float(p.A0)]
    truncated = False
    try:
        for i in range(steps):
            j, a = 2 * i, A[-1]
            k1 = deriv(j, a)
            k2 = deriv(j + 1, a + dt / 2 * k1)
            k3 = deriv(j + 1, a + dt / 2 * k2)
            k4 = deriv(j + 2, a + dt * k3)
            change = dt * max(abs(k1), abs(k4))
            if change > SUBSTEP_THRESHOLD * max(a, 1.0):
                nxt = substeps(ts[i], a, min(1000, math.ceil(change / (SUBSTEP_THRESHOLD * max(a, 1.0))) * 4))
            else:
                nxt = a + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            if not math.isfinite(nxt) or nxt > 1e300:
                truncated = True
                break
            A.append(max(nxt, 0.0))
    except OverflowError:
        truncated = True
    k = len(A)
    A_arr = np.asarray(A)
    B = np.array([b_of(2 * i, a) for i, a in enumerate(A)])
    dA = np.array([deriv(2 * i, a) for i, a in enumerate(A)])
    return Trajectory(ts[:k], A_arr, B, dA, truncated=truncated, breaks=coefficient_breaks(lam_c, r_c))


def coefficient_breaks(*coeffs: Coefficient) -> tuple[float, ...]:
    """Sorted jump times of the piecewise-constant coefficients among ``coeffs``."""
    return tuple(sorted({b for c in coeffs if isinstance(c, Piecewise) for b in c.breaks}))


def check_derivative_consistency(traj: Trajectory, tol: float = DERIVATIVE_TOL, breaks: Sequence[float] = ()) -> None:
    """Require each difference quotient of A to lie between the neighbouring A'
    samples, widened by ``tol`` of their magnitude.

    A bracket rather than a trapezoid keeps the test valid when a coefficient
    jump sits on a sample. Intervals with a jump strictly inside (from
    ``breaks`` or ``traj.breaks``) are skipped: A' takes values there that
    neither endpoint sample sees.
    """
    if len(traj.t) < 2:
        return
    quotient = np.diff(traj.A) / np.diff(traj.t)
    left, right = traj.dA[:-1], traj.dA[1:]
    scale = np.maximum(np.maximum(np.abs(left), np.abs(right)), np.abs(quotient))
    slack = tol * scale + 1e-9 * max(1.0, float(np.max(np.abs(traj.dA))))
    bad = (quotient < np.minimum(left, right) - slack) | (quotient > np.maximum(left, right) + slack)
    jumps = np.asarray(sorted({*breaks, *traj.breaks}), dtype=float)
    if jumps.size:
        # interval i = [t_i, t_{i+1}] holds a jump when t_i < b < t_{i+1}
        lo = np.searchsorted(traj.t, jumps, side="right") - 1
        inside = (lo >= 0) & (lo < len(quotient)) & (traj.t[np.clip(lo, 0, len(traj.t) - 1)] < jumps)
        inside &= jumps < traj.t[np.clip(lo + 1, 0, len(traj.t) - 1)]
        bad[lo[inside]] = False
    if np.any(bad):
        i = int(np.argmax(bad))
        raise TrajectoryError(f"A' inconsistent with A differences near t={traj.t[i]:.6g}")


def verify_trajectory(problem: GronwallProblem, traj: Trajectory, certificate: GronwallCertificate | None = None) -> TrajectoryCheck:
    check_derivative_consistency(traj, breaks=coefficient_breaks(problem.l, problem.m, problem.n, problem.f))
    cert = certificate or build_certificate(problem)
    p = problem
    t, A, B, dA = traj.t, traj.A, traj.B, traj.dA
    failures = []

    rhs = p.rhs(t, A, B)
    if np.any(dA + B > rhs + HYPOTHESIS_SLACK * np.maximum(1.0, np.abs(rhs))):
        failures.append("differential inequality")
    if np.any(B < p.C1 * np.maximum(A, 0.0) ** p.gamma * (1 - HYPOTHESIS_SLACK)):
        failures.append("coercivity B >= C1 A^gamma")
    if np.any(p.n(t) > p.K * (A + B + E) ** p.beta_g * (1 + HYPOTHESIS_SLACK)):
        failures.append("n <= K (A+B+e)^beta")
    hypotheses_ok = not failures

    X = cert.X(t)
    with np.errstate(divide="ignore"):
        log_A = np.log(A)
        integral = cumulative_trapezoid(B, t, initial=0.0) if len(t) > 1 else np.zeros_like(t)
        log_int = np.log(integral)
    a_ok = bool(np.all(log_A <= X))
    b_ok = bool(np.all(log_int <= math.log(2) + np.log(X) + X))
    if not a_ok:
        failures.append("A exceeds A_bound")
    if not b_ok:
        failures.append("integral of B exceeds B_integral_bound")
    margin = float(np.min(-np.expm1(log_A - X))) if len(t) else 1.0
    return TrajectoryCheck(hypotheses_ok, a_ok and b_ok, margin, tuple(failures))


def closed_form_decay(A0: float, C1: float, gamma: float, t):
    """Solution of A' = -C1 A^γ."""
    t = np.asarray(t, dtype=float)
    if A0 == 0:
        return np.zeros_like(t)
    return (A0 ** (1 - gamma) + C1 * (gamma - 1) * t) ** (1 / (1 - gamma))


# ---------------------------------------------------------------------------
# presets and campaigns


def _random_coefficient(rng: np.random.Generator, T: float, scale: float) -> Coefficient:
    kind = rng.integers(0, 3)
    if kind == 0:
        return Constant(float(rng.uniform(0, scale)))
    if kind == 1:
        c = rng.uniform(0, scale / 3, size=3)  # nonnegative coefficients stay nonnegative on t >= 0
        return Polynomial(tuple(float(x) for x in c))
    return _random_piecewise(rng, T, 4, 0.0, scale)


def _bounded_by(coef: Coefficient, K: float, T: float) -> Coefficient:
    """Rescale ``coef`` so its maximum on [0, T] is at most K."""
    peak = float(np.max(coef(np.linspace(0.0, T, 2001))))
    if peak <= K:
        return coef
    s = K / peak * (1 - 1e-12)
    if isinstance(coef, Constant):
        return Constant(coef.value * s)
    if isinstance(coef, Polynomial):
        return Polynomial(tuple(c * s for c in coef.coeffs))
    return Piecewise(coef.breaks, tuple(v * s for v in coef.values))


def random_problem(seed: int, margin: float = 0.05, T: float = 1.0) -> GronwallProblem:
    """γ ∈ (1/(1-margin), 2], α_g ∈ (1, 2], β_g ∈ [0, (γ-1)/γ - margin], n <= K."""
    rng = np.random.Generator(np.random.PCG64(seed))
    gamma = float(rng.uniform(1 / (1 - margin), 2.0))
    alpha_g = float(rng.uniform(1.0, 2.0)) or 2.0
    beta_g = float(rng.uniform(0.0, (gamma - 1) / gamma - margin))
    C1 = float(math.exp(rng.uniform(math.log(0.2), math.log(5.0))))
    K = float(rng.uniform(0.0, 2.0))
    l, m, f = (_random_coefficient(rng, T, 1.0) for _ in range(3))
    n = _bounded_by(_random_coefficient(rng, T, 2.0), K, T)
    A0 = float(rng.uniform(0.0, 5.0))
    return GronwallProblem(gamma, alpha_g, beta_g, C1, K, T, A0, l, m, n, f)


PRESETS: dict[str, Callable[[int], GronwallProblem]] = {
    "closed-form-decay": lambda seed: GronwallProblem(2.0, 1.5, 0.0, 1.0, A0=1.0),
    "constant": lambda seed: GronwallProblem(
        2.0, 1.5, 0.3, 1.0, K=0.5, A0=1.0, l=Constant(0.5), m=Constant(0.5), n=Constant(0.5), f=Constant(0.5)
    ),
    "random": random_problem,
}
MODES = ("saturating", "decaying", "random-coefficient")


@dataclass
class GronwallTrial:
    seed: int
    problem: GronwallProblem
    certificate: GronwallCertificate | None
    checks: dict[str, TrajectoryCheck] = field(default_factory=dict)
    truncated: dict[str, bool] = field(default_factory=dict)
    error: str | None = None

    @property
    def sound(self) -> bool:
        """Every trajectory meeting the hypotheses is bounded by the certificate."""
        return self.error is None and all(c.bound_ok for c in self.checks.values() if c.hypotheses_ok)


def run_trial(problem: GronwallProblem, seed: int, modes: Sequence[str] = MODES) -> GronwallTrial:
    try:
        cert = build_certificate(problem)
    except CertificateFailure as exc:
        return GronwallTrial(seed, problem, None, error=str(exc))
    trial = GronwallTrial(seed, problem, cert)
    for mode in modes:
        traj = synth_trajectory(problem, mode, seed)
        trial.truncated[mode] = traj.truncated
        trial.checks[mode] = verify_trajectory(problem, traj, cert)
    return trial


def run_campaign(preset: str | Callable[[int], GronwallProblem], trials: int, seed: int = 0) -> list[GronwallTrial]:
    make = PRESETS[preset] if isinstance(preset, str) else preset
    out = []
    for i in range(trials):
        s = int(np.random.SeedSequence([seed, i]).generate_state(1)[0])
        out.append(run_trial(make(s), s))
    return out
