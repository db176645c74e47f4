"""
Empirical laboratory for the anisotropic interpolation, product, commutator
and logarithmic Sobolev inequalities.

Each registered case evaluates a left-hand side and a list of right-hand-side
factors on random band-limited fields; the ratio LHS / RHS is an empirical
lower bound for the inequality's constant. Two cases (``interp-l2-a`` and
``interp-l2-b``) reduce to Hölder's inequality in frequency and hold with
constant exactly 1 on the torus; the others are checked for boundedness and
stability under grid refinement.

Homogeneous inequalities fail on the torus for fields that are constant along
the differentiated direction, so samples strip the k₁ = 0 and/or k₂ = 0 modes
as the case requires.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from . import norms
from .spectral import (
    DOMAIN_MEASURE,
    Grid,
    OperatorSpec,
    SpectralField,
    _real_samples_unchecked,
    _spectral_unchecked,
    apply_multiplier,
    from_spectral,
    random_band_limited_field,
    symbol,
)

CASE_IDS = (
    "interp-l2-a",
    "interp-l2-b",
    "interp-linf-a",
    "interp-linf-b",
    "triple-mixed",
    "triple-l2",
    "commutator",
    "log-sobolev",
    "aniso-linf",
)
EXACT_CASES = {"interp-l2-a": 1.0 + 1e-10, "interp-l2-b": 1.0 + 1e-10}
ZERO_TOL = 1e-12


class ParameterRangeError(ValueError):
    """Inequality parameters outside the range where the lemma applies."""


# ---------------------------------------------------------------------------
# case definitions


@dataclass(frozen=True)
class _CaseDef:
    policies: tuple[str, ...]  # one zero-mode policy per input field; "axis" = strip the case's axis
    defaults: Mapping[str, float]
    validate: Callable[[Mapping[str, float]], None]
    draw: Callable[[np.random.Generator], dict[str, float]]
    exponents: Callable[[Mapping[str, float]], tuple[float, ...]] | None
    lhs: Callable[[Sequence[SpectralField], Mapping[str, float]], float]
    factors: Callable[[Sequence[SpectralField], Mapping[str, float]], tuple[float, ...]]
    combine: Callable[[Sequence[float], Mapping[str, float]], float] | None = None


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ParameterRangeError(msg)


def _axis(params: Mapping[str, float]) -> int:
    axis = int(params.get("axis", 1))
    _require(axis in (1, 2), f"axis must be 1 or 2, got {params.get('axis')}")
    return axis


def _lebesgue(values: np.ndarray, p: float) -> float:
    return norms.lp_of_samples(values, p)


# interp-l2-a: ‖Λ^s_{xi} f‖ <= ‖f‖^{1-s/(δ+1)} ‖Λ^δ_{xi} ∂_{xi} f‖^{s/(δ+1)}


def _v_l2a(p):
    _axis(p)
    s, d = p["s"], p["delta"]
    _require(d >= 0 and d + 1 <= 4, f"delta must lie in [0, 3], got {d}")
    _require(0 <= s <= d + 1, f"s must lie in [0, delta+1], got s={s}, delta={d}")


def _d_l2a(rng):
    d = rng.uniform(0.0, 2.5)
    return {"s": rng.uniform(0.0, d + 1), "delta": d, "axis": float(rng.integers(1, 3))}


# interp-l2-b: ‖Λ^γ_{xi} f‖ <= ‖f‖^{1-γ/ϱ} ‖Λ^ϱ_{xi} f‖^{γ/ϱ}


def _v_l2b(p):
    _axis(p)
    g, r = p["gamma"], p["rho"]
    _require(0 < r <= 4, f"rho must lie in (0, 4], got {r}")
    _require(0 <= g <= r, f"gamma must lie in [0, rho], got gamma={g}, rho={r}")


def _d_l2b(rng):
    r = rng.uniform(0.05, 4.0)
    return {"gamma": rng.uniform(0.0, r), "rho": r, "axis": float(rng.integers(1, 3))}


# interp-linf-a: ‖∂_{xi} f‖_{L^{2(γ+1)}} <= C ‖f‖_∞^{γ/(γ+1)} ‖Λ^γ_{xi} ∂_{xi} f‖^{1/(γ+1)}


def _v_linfa(p):
    _axis(p)
    _require(0 <= p["gamma"] <= 3, f"gamma must lie in [0, 3], got {p['gamma']}")


def _lhs_linfa(fs, p):
    d = apply_multiplier(fs[0], OperatorSpec.partial(_axis(p)))
    return _lebesgue(from_spectral(d), 2 * (p["gamma"] + 1))


# interp-linf-b: ‖Λ^δ_{xi} f‖_{L^{2(ϱ+1)/δ}} <= C ‖f‖_∞^{1-δ/(ϱ+1)} ‖Λ^ϱ_{xi} ∂_{xi} f‖^{δ/(ϱ+1)}


def _v_linfb(p):
    _axis(p)
    d, r = p["delta"], p["rho"]
    _require(0 <= r <= 3, f"rho must lie in [0, 3], got {r}")
    _require(0 <= d <= r + 1, f"delta must lie in [0, rho+1], got delta={d}, rho={r}")


def _lhs_linfb(fs, p):
    d, r = p["delta"], p["rho"]
    lam = apply_multiplier(fs[0], OperatorSpec.directional(_axis(p), d))
    exponent = math.inf if d == 0 else 2 * (r + 1) / d
    return _lebesgue(from_spectral(lam), exponent)


# triple-mixed: ∫|fgh| <= C ‖f‖_{L^q_{x2}L^p_{x1}} ‖g‖^{1-1/(γ1 p)} ‖Λ^{γ1}_{x1} g‖^{1/(γ1 p)}
#                                 × ‖h‖^{1-1/(γ2 q)} ‖Λ^{γ2}_{x2} h‖^{1/(γ2 q)}


def _inv(x: float) -> float:
    return 0.0 if math.isinf(x) else 1.0 / x


def _v_triple(p):
    for name in ("p", "q"):
        _require(p[name] >= 2, f"{name} must lie in [2, inf], got {p[name]}")
    _require(_inv(p["p"]) < p["gamma1"] <= 1, f"gamma1 must lie in (1/p, 1], got {p['gamma1']}")
    _require(_inv(p["q"]) < p["gamma2"] <= 1, f"gamma2 must lie in (1/q, 1], got {p['gamma2']}")


def _d_triple(rng):
    choices = (2.0, 3.0, 4.0, 8.0, math.inf)
    pp, qq = (float(choices[i]) for i in rng.integers(0, len(choices), size=2))
    return {
        "p": pp,
        "q": qq,
        "gamma1": rng.uniform(_inv(pp), 1.0) or 1.0,
        "gamma2": rng.uniform(_inv(qq), 1.0) or 1.0,
    }


def _triple_exps(p):
    a, b = _inv(p["p"]) / p["gamma1"], _inv(p["q"]) / p["gamma2"]
    return (1.0, 1 - a, a, 1 - b, b)


def triple_integral(f: SpectralField, g: SpectralField, h: SpectralField) -> float:
    """∫|fgh| by grid quadrature."""
    vals = _real_samples_unchecked(np.stack([f.coeffs, g.coeffs, h.coeffs]), f.grid)
    return DOMAIN_MEASURE * float(np.mean(np.abs(vals[0] * vals[1] * vals[2])))


def _triple_factors(fs, p):
    f, g, h = fs
    return (
        norms.mixed_norm(f, p["p"], p["q"]),
        norms.l2_norm(g),
        norms.directional_seminorm(g, 1, p["gamma1"]),
        norms.l2_norm(h),
        norms.directional_seminorm(h, 2, p["gamma2"]),
    )


def _v_triple_l2(p):
    for name in ("gamma1", "gamma2"):
        _require(0.5 < p[name] <= 1, f"{name} must lie in (1/2, 1], got {p[name]}")


def _with_l2(p):
    return {**p, "p": 2.0, "q": 2.0}


# commutator: ‖Λ^s(fg) - gΛ^s f - fΛ^s g‖_p <= C ‖g‖_∞ ‖Λ^s f‖_p


def _v_comm(p):
    _require(0 < p["s"] < 1, f"s must lie in (0, 1), got {p['s']}")
    _require(2 <= p.get("p", 2.0) < math.inf, f"p must lie in [2, inf), got {p.get('p')}")


def commutator_field(f: SpectralField, g: SpectralField, s: float, form: str = "three-term") -> np.ndarray:
    """Real-space samples of Λ^s(fg) - gΛ^s f - fΛ^s g (``form="three-term"``)
    or Λ^s(fg) - fΛ^s g (``form="two-term"``).

    The product fg is formed on the grid without dealiasing; it is exact when
    both inputs are band-limited to |k| < n/4 per axis.
    """
    grid = f.grid
    lam = symbol(grid, OperatorSpec.full(s))
    fv, gv, lf, lg = _real_samples_unchecked(
        np.stack([f.coeffs, g.coeffs, f.coeffs * lam, g.coeffs * lam]), grid
    )
    fg_hat = _spectral_unchecked(fv * gv, grid)
    lfg = _real_samples_unchecked(fg_hat * lam, grid)
    if form == "three-term":
        return lfg - gv * lf - fv * lg
    if form == "two-term":
        return lfg - fv * lg
    raise ValueError(f"unknown commutator form {form!r}")


def _lhs_comm(fs, p):
    f, g = fs
    bracket = commutator_field(f, g, p["s"], p.get("form", "three-term"))
    return _lebesgue(bracket, p.get("p", 2.0))


def _factors_comm(fs, p):
    f, g = fs
    pp = p.get("p", 2.0)
    if pp == 2.0:
        lam_f = norms.sobolev_seminorm(f, p["s"])
    else:
        lam_f = _lebesgue(from_spectral(apply_multiplier(f, OperatorSpec.full(p["s"]))), pp)
    return (norms.sup_norm(g), lam_f)


# log-sobolev: ‖f‖_∞ <= C (1 + ‖f‖₂ + ‖f‖_{B⁰∞∞} ln(e + ‖Λ^σ f‖₂)), σ > 1


def _v_logsob(p):
    _require(1 < p["sigma"] <= 4, f"sigma must lie in (1, 4], got {p['sigma']}")


def _factors_logsob(fs, p):
    f = fs[0]
    return (1.0, norms.l2_norm(f), norms.besov_b0_inf(f), norms.sobolev_seminorm(f, p["sigma"]))


def _combine_logsob(factors, p):
    one, l2, besov, lam = factors
    return one + l2 + besov * math.log(math.e + lam)


# aniso-linf: ‖h‖_∞ <= C ‖h‖^{1-1/(2δ1)-1/(2δ2)} ‖Λ^{δ1}_{x1} h‖^{1/(2δ1)} ‖Λ^{δ2}_{x2} h‖^{1/(2δ2)}


def _v_aniso(p):
    d1, d2 = p["delta1"], p["delta2"]
    _require(0 < d1 <= 4 and 0 < d2 <= 4, f"delta1, delta2 must lie in (0, 4], got {d1}, {d2}")
    _require(1 / d1 + 1 / d2 < 2, f"need 1/delta1 + 1/delta2 < 2, got {1 / d1 + 1 / d2}")


def _d_aniso(rng):
    while True:
        d1, d2 = rng.uniform(0.55, 3.0, size=2)
        if 1 / d1 + 1 / d2 < 1.9:
            return {"delta1": float(d1), "delta2": float(d2)}


def _aniso_exps(p):
    a, b = 1 / (2 * p["delta1"]), 1 / (2 * p["delta2"])
    return (1 - a - b, a, b)


CASES: dict[str, _CaseDef] = {
    "interp-l2-a": _CaseDef(
        policies=("axis",),
        defaults={"s": 1.0, "delta": 0.5, "axis": 1.0},
        validate=_v_l2a,
        draw=_d_l2a,
        exponents=lambda p: (1 - p["s"] / (p["delta"] + 1), p["s"] / (p["delta"] + 1)),
        lhs=lambda fs, p: norms.directional_seminorm(fs[0], _axis(p), p["s"]),
        factors=lambda fs, p: (
            norms.l2_norm(fs[0]),
            norms.directional_seminorm(fs[0], _axis(p), p["delta"] + 1),
        ),
    ),
    "interp-l2-b": _CaseDef(
        policies=("axis",),
        defaults={"gamma": 0.4, "rho": 0.9, "axis": 1.0},
        validate=_v_l2b,
        draw=_d_l2b,
        exponents=lambda p: (1 - p["gamma"] / p["rho"], p["gamma"] / p["rho"]),
        lhs=lambda fs, p: norms.directional_seminorm(fs[0], _axis(p), p["gamma"]),
        factors=lambda fs, p: (norms.l2_norm(fs[0]), norms.directional_seminorm(fs[0], _axis(p), p["rho"])),
    ),
    "interp-linf-a": _CaseDef(
        policies=("axis",),
        defaults={"gamma": 0.5, "axis": 1.0},
        validate=_v_linfa,
        draw=lambda rng: {"gamma": rng.uniform(0.0, 2.0), "axis": float(rng.integers(1, 3))},
        exponents=lambda p: (p["gamma"] / (p["gamma"] + 1), 1 / (p["gamma"] + 1)),
        lhs=_lhs_linfa,
        factors=lambda fs, p: (norms.sup_norm(fs[0]), norms.directional_seminorm(fs[0], _axis(p), p["gamma"] + 1)),
    ),
    "interp-linf-b": _CaseDef(
        policies=("axis",),
        defaults={"delta": 0.5, "rho": 0.75, "axis": 1.0},
        validate=_v_linfb,
        draw=lambda rng: (lambda r: {"delta": rng.uniform(0.05, r + 1), "rho": r, "axis": float(rng.integers(1, 3))})(
            rng.uniform(0.0, 2.0)
        ),
        exponents=lambda p: (1 - p["delta"] / (p["rho"] + 1), p["delta"] / (p["rho"] + 1)),
        lhs=_lhs_linfb,
        factors=lambda fs, p: (norms.sup_norm(fs[0]), norms.directional_seminorm(fs[0], _axis(p), p["rho"] + 1)),
    ),
    "triple-mixed": _CaseDef(
        policies=("keep", "strip-x1", "strip-x2"),
        defaults={"p": 4.0, "q": 4.0, "gamma1": 0.75, "gamma2": 0.75},
        validate=_v_triple,
        draw=_d_triple,
        exponents=_triple_exps,
        lhs=lambda fs, p: triple_integral(*fs),
        factors=_triple_factors,
    ),
    "triple-l2": _CaseDef(
        policies=("keep", "strip-x1", "strip-x2"),
        defaults={"gamma1": 0.75, "gamma2": 0.75},
        validate=_v_triple_l2,
        draw=lambda rng: {"gamma1": rng.uniform(0.5, 1.0) or 1.0, "gamma2": rng.uniform(0.5, 1.0) or 1.0},
        exponents=lambda p: _triple_exps(_with_l2(p)),
        lhs=lambda fs, p: triple_integral(*fs),
        factors=lambda fs, p: _triple_factors(fs, _with_l2(p)),
    ),
    "commutator": _CaseDef(
        policies=("keep", "keep"),
        defaults={"s": 0.5, "p": 2.0},
        validate=_v_comm,
        draw=lambda rng: {"s": rng.uniform(0.05, 0.95), "p": 2.0},
        exponents=lambda p: (1.0, 1.0),
        lhs=_lhs_comm,
        factors=_factors_comm,
    ),
    "log-sobolev": _CaseDef(
        policies=("strip-both",),
        defaults={"sigma": 1.5},
        validate=_v_logsob,
        draw=lambda rng: {"sigma": rng.uniform(1.05, 3.0)},
        exponents=None,
        lhs=lambda fs, p: norms.sup_norm(fs[0]),
        factors=_factors_logsob,
        combine=_combine_logsob,
    ),
    "aniso-linf": _CaseDef(
        policies=("strip-both",),
        defaults={"delta1": 1.5, "delta2": 1.5},
        validate=_v_aniso,
        draw=_d_aniso,
        exponents=_aniso_exps,
        lhs=lambda fs, p: norms.sup_norm(fs[0]),
        factors=lambda fs, p: (
            norms.l2_norm(fs[0]),
            norms.directional_seminorm(fs[0], 1, p["delta1"]),
            norms.directional_seminorm(fs[0], 2, p["delta2"]),
        ),
    ),
}


def exponents(case_id: str, params: Mapping[str, float]) -> tuple[float, ...] | None:
    """Exponent attached to each RHS factor (None for the log-Sobolev case)."""
    d = _case(case_id)
    d.validate(params)
    return None if d.exponents is None else tuple(float(e) for e in d.exponents(params))


def _case(case_id: str) -> _CaseDef:
    try:
        return CASES[case_id]
    except KeyError:
        raise ValueError(f"unknown inequality case {case_id!r}; expected one of {CASE_IDS}") from None


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class SamplePolicy:
    """How campaign fields are drawn: band limit n // kmax_divisor, spectral profile."""

    kmax_divisor: int = 8
    profile: str = "flat"
    decay_rate: float = 1.0
    policies: tuple[str, ...] | None = None  # override the case's zero-mode policies

    def kmax(self, grid: Grid) -> int:
        return max(2, min(grid.n1, grid.n2) // self.kmax_divisor)


@dataclass(frozen=True)
class InequalityCase:
    """A registered inequality with fixed parameters, or ``parameters=None``
    to draw in-range parameters independently for every sample."""

    id: str
    parameters: Mapping[str, float] | None = None
    sample: SamplePolicy = SamplePolicy()

    def __post_init__(self):
        d = _case(self.id)
        if self.parameters is not None:
            d.validate(self.parameters)

    @classmethod
    def default(cls, case_id: str, **overrides: float) -> "InequalityCase":
        return cls(case_id, {**_case(case_id).defaults, **overrides})

    @property
    def n_fields(self) -> int:
        return len(_case(self.id).policies)

    def field_policies(self, params: Mapping[str, float]) -> tuple[str, ...]:
        raw = self.sample.policies or _case(self.id).policies
        axis = int(params.get("axis", 1))
        return tuple(f"strip-x{axis}" if p == "axis" else p for p in raw)


@dataclass(frozen=True)
class Evaluation:
    lhs: float
    rhs_factors: tuple[float, ...]
    rhs: float
    ratio: float | None  # None when degenerate (LHS = RHS = 0)
    degenerate: bool
    hard_violation: bool  # RHS = 0 while LHS > 0


def eval_case(case: InequalityCase | str, fields: Sequence[SpectralField], params: Mapping[str, float] | None = None) -> Evaluation:
    """Evaluate LHS, RHS factors and their ratio on the given input fields."""
    if isinstance(case, str):
        case = InequalityCase.default(case)
    d = _case(case.id)
    params = dict(params if params is not None else (case.parameters or d.defaults))
    d.validate(params)
    if len(fields) != len(d.policies):
        raise ValueError(f"{case.id} takes {len(d.policies)} field(s), got {len(fields)}")
    lhs = float(d.lhs(fields, params))
    factors = tuple(float(x) for x in d.factors(fields, params))
    if d.combine is not None:
        rhs = float(d.combine(factors, params))
    else:
        rhs = math.prod(_pow(x, e) for x, e in zip(factors, d.exponents(params)))
    scale = math.prod(max(norms.l2_norm(f), 1e-300) for f in fields)
    zero = ZERO_TOL * scale
    if rhs <= zero:
        degenerate = lhs <= zero
        return Evaluation(lhs, factors, rhs, None if degenerate else math.inf, degenerate, not degenerate)
    return Evaluation(lhs, factors, rhs, lhs / rhs, False, False)


def _pow(x: float, e: float) -> float:
    # 0**0 == 1: a factor with zero exponent does not enter the bound
    return 1.0 if e == 0 else x**e


@dataclass(frozen=True)
class LogSobolevCheck:
    lhs: float
    rhs_with_C1: float
    implied_C: float


def log_sobolev_check(f: SpectralField, sigma: float) -> LogSobolevCheck:
    """implied_C = ‖f‖_∞ / (1 + ‖f‖₂ + ‖f‖_{B⁰∞∞} ln(e + ‖Λ^σ f‖₂))."""
    if not sigma > 1:
        raise ParameterRangeError(f"sigma must exceed 1, got {sigma}")
    params = {"sigma": float(sigma)}
    lhs = norms.sup_norm(f)
    rhs = _combine_logsob(_factors_logsob([f], params), params)
    return LogSobolevCheck(lhs, rhs, lhs / rhs)


# ---------------------------------------------------------------------------
# campaigns


@dataclass
class InequalityReport:
    case_id: str
    ratios: dict[int, list[float]] = field(default_factory=dict)
    degenerate: int = 0
    violations: list[str] = field(default_factory=list)
    bound: float | None = None

    @property
    def samples(self) -> int:
        return sum(len(v) for v in self.ratios.values()) + self.degenerate

    def _all(self) -> np.ndarray:
        vals = [r for v in self.ratios.values() for r in v]
        return np.asarray(vals, dtype=float)

    @property
    def max_ratio(self) -> float | None:
        a = self._all()
        return float(a.max()) if a.size else None

    @property
    def mean_ratio(self) -> float | None:
        a = self._all()
        return float(a.mean()) if a.size else None

    def quantiles(self, qs: Sequence[float] = (0.5, 0.9, 0.99)) -> dict[float, float]:
        a = self._all()
        return {q: float(np.quantile(a, q)) for q in qs} if a.size else {}

    def per_resolution(self) -> dict[int, dict[str, float]]:
        out = {}
        for n in sorted(self.ratios):
            a = np.asarray(self.ratios[n])
            out[n] = {"count": int(a.size), "max": float(a.max()) if a.size else math.nan,
                      "mean": float(a.mean()) if a.size else math.nan}
        return out

    @property
    def resolution_stability(self) -> float | None:
        """(max ratio at finest resolution) / (max ratio at coarsest)."""
        ns = [n for n in sorted(self.ratios) if self.ratios[n]]
        if len(ns) < 1:
            return None
        lo, hi = max(self.ratios[ns[0]]), max(self.ratios[ns[-1]])
        return hi / lo if lo > 0 else (1.0 if hi == 0 else math.inf)

    @property
    def all_finite(self) -> bool:
        return bool(np.all(np.isfinite(self._all())))

    def merge(self, other: "InequalityReport") -> "InequalityReport":
        if other.case_id != self.case_id:
            raise ValueError("cannot merge reports of different cases")
        ratios = {n: list(v) for n, v in self.ratios.items()}
        for n, v in other.ratios.items():
            ratios.setdefault(n, []).extend(v)
        return InequalityReport(self.case_id, ratios, self.degenerate + other.degenerate,
                                self.violations + other.violations, self.bound)

    def summary(self) -> dict:
        return {
            "case": self.case_id,
            "samples": self.samples,
            "degenerate": self.degenerate,
            "max_ratio": self.max_ratio,
            "mean_ratio": self.mean_ratio,
            "quantiles": {str(q): v for q, v in self.quantiles().items()},
            "per_resolution": {str(n): v for n, v in self.per_resolution().items()},
            "resolution_stability": self.resolution_stability,
            "violations": list(self.violations),
            "bound": self.bound,
        }


def _child_seed(seed: int, *path: int) -> int:
    return int(np.random.SeedSequence([seed, *path]).generate_state(1, dtype=np.uint64)[0])


def sample_parameters(case: InequalityCase, seed: int, index: int) -> dict[str, float]:
    d = _case(case.id)
    if case.parameters is not None:
        return dict(case.parameters)
    rng = np.random.Generator(np.random.PCG64(_child_seed(seed, index, 1_000_003)))
    params = d.draw(rng)
    d.validate(params)
    return params


def sample_fields(case: InequalityCase, grid: Grid, seed: int, index: int, params: Mapping[str, float]) -> list[SpectralField]:
    kmax = case.sample.kmax(grid)
    return [
        random_band_limited_field(grid, _child_seed(seed, index, j), kmax, case.sample.profile,
                                  case.sample.decay_rate, policy)
        for j, policy in enumerate(case.field_policies(params))
    ]


def run_campaign(case: InequalityCase | str, samples: int, resolutions: Sequence[int], seed: int = 0) -> InequalityReport:
    """Evaluate ``samples`` random draws at every resolution.

    Parameter draws and field seeds depend only on (seed, sample index), so
    each resolution sees the same parameter sequence.
    """
    if isinstance(case, str):
        case = InequalityCase.default(case)
    resolutions = list(resolutions)
    if resolutions != sorted(resolutions):
        raise ValueError(f"resolutions must be ascending, got {resolutions}")
    bound = EXACT_CASES.get(case.id)
    report = InequalityReport(case.id, {n: [] for n in resolutions}, bound=bound)
    for n in resolutions:
        grid = Grid.square(n)
        for i in range(samples):
            params = sample_parameters(case, seed, i)
            ev = eval_case(case, sample_fields(case, grid, seed, i, params), params)
            if ev.degenerate:
                report.degenerate += 1
                continue
            if ev.hard_violation:
                report.violations.append(f"n={n} sample={i}: RHS = 0 with LHS = {ev.lhs:.3e}")
                continue
            report.ratios[n].append(ev.ratio)
            if bound is not None and ev.ratio > bound:
                report.violations.append(f"n={n} sample={i}: ratio {ev.ratio:.17g} exceeds {bound!r} ({params})")
    return report
