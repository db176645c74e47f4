"""Norms and seminorms of spectral fields on the torus.

Every L² quantity is computed by Parseval from the coefficients and carries
the domain measure (2π)², so ``l2_norm`` agrees with the real-space integral.
Lᵖ and mixed norms are grid quadratures of the real-space samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from .spectral import (
    DOMAIN_MEASURE,
    TWO_PI,
    Grid,
    SpectralField,
    _real_samples_unchecked,
    from_spectral,
)

NormKind = Literal["lebesgue", "sup", "directional-seminorm", "full-sobolev", "mixed", "besov-b0-inf"]


@dataclass(frozen=True)
class NormSpec:
    kind: NormKind
    p: float = 2.0
    q: float = 2.0
    axis: int | None = None
    s: float = 0.0

    def __post_init__(self):
        if self.kind in ("lebesgue", "mixed"):
            for name in ("p", "q") if self.kind == "mixed" else ("p",):
                v = getattr(self, name)
                if not v >= 2.0:
                    raise ValueError(f"{name} must satisfy 2 <= {name} <= inf, got {v}")
        if self.kind in ("directional-seminorm", "full-sobolev") and not 0.0 <= self.s <= 4.0:
            raise ValueError(f"smoothness index s must lie in [0, 4], got {self.s}")
        if self.kind == "directional-seminorm" and self.axis not in (1, 2):
            raise ValueError(f"directional seminorm needs axis 1 or 2, got {self.axis!r}")

    @classmethod
    def lebesgue(cls, p: float) -> "NormSpec":
        return cls("sup") if math.isinf(p) else cls("lebesgue", p=float(p))

    @classmethod
    def sup(cls) -> "NormSpec":
        return cls("sup")

    @classmethod
    def directional(cls, axis: int, s: float) -> "NormSpec":
        return cls("directional-seminorm", axis=axis, s=float(s))

    @classmethod
    def sobolev(cls, s: float) -> "NormSpec":
        return cls("full-sobolev", s=float(s))

    @classmethod
    def mixed(cls, p: float, q: float) -> "NormSpec":
        return cls("mixed", p=float(p), q=float(q))

    @classmethod
    def besov(cls) -> "NormSpec":
        return cls("besov-b0-inf")


def norm(f: SpectralField, spec: NormSpec) -> float:
    if spec.kind == "lebesgue":
        return lp_norm(f, spec.p)
    if spec.kind == "sup":
        return sup_norm(f)
    if spec.kind == "directional-seminorm":
        return directional_seminorm(f, spec.axis, spec.s)
    if spec.kind == "full-sobolev":
        return sobolev_seminorm(f, spec.s)
    if spec.kind == "mixed":
        return mixed_norm(f, spec.p, spec.q)
    if spec.kind == "besov-b0-inf":
        return besov_b0_inf(f)
    raise ValueError(f"unknown norm kind {spec.kind!r}")


def _weighted_l2(f: SpectralField, weight: np.ndarray | None = None) -> float:
    power = np.abs(f.coeffs) ** 2
    if weight is not None:
        power = power * weight
    return math.sqrt(DOMAIN_MEASURE * float(np.sum(power)))


def l2_norm(f: SpectralField) -> float:
    return _weighted_l2(f)


def lp_norm(f: SpectralField, p: float) -> float:
    """(∫|f|ᵖ)^(1/p) by grid quadrature; p = inf gives the sup norm."""
    if math.isinf(p):
        return sup_norm(f)
    if p < 2:
        raise ValueError(f"p must satisfy 2 <= p <= inf, got {p}")
    return lp_of_samples(from_spectral(f), p)


def lp_of_samples(values: np.ndarray, p: float) -> float:
    if math.isinf(p):
        return float(np.max(np.abs(values), initial=0.0))
    m = float(np.max(np.abs(values), initial=0.0))
    if m == 0.0:
        return 0.0
    # factor out the max so |f/m|^p cannot overflow for large p
    return m * (DOMAIN_MEASURE * float(np.mean((np.abs(values) / m) ** p))) ** (1.0 / p)


def sup_norm(f: SpectralField) -> float:
    return float(np.max(np.abs(from_spectral(f)), initial=0.0))


@lru_cache(maxsize=128)
def _directional_weight(grid: Grid, axis: int, s: float) -> np.ndarray:
    K = grid.K1 if axis == 1 else grid.K2
    return np.abs(K) ** (2.0 * s)


@lru_cache(maxsize=128)
def _full_weight(grid: Grid, s: float) -> np.ndarray:
    return grid.kmag ** (2.0 * s)


def directional_seminorm(f: SpectralField, axis: int, s: float) -> float:
    """‖Λ^s_{x_axis} f‖₂."""
    if axis not in (1, 2):
        raise ValueError(f"axis must be 1 or 2, got {axis!r}")
    return _weighted_l2(f, _directional_weight(f.grid, axis, float(s)))


def sobolev_seminorm(f: SpectralField, s: float) -> float:
    """Homogeneous ‖Λ^s f‖₂ with Λ = (-Δ)^(1/2)."""
    return _weighted_l2(f, _full_weight(f.grid, float(s)))


def mixed_norm(f: SpectralField, p: float, q: float) -> float:
    """‖f‖ in L^q_{x₂} L^p_{x₁}: Lᵖ along each x₁ line, then L^q across x₂."""
    if p < 2 or q < 2:
        raise ValueError(f"mixed norm needs p, q >= 2, got p={p}, q={q}")
    return mixed_of_samples(from_spectral(f), p, q)


def mixed_of_samples(values: np.ndarray, p: float, q: float) -> float:
    inner = _line_norms(np.abs(values), p)  # one value per x₂ row
    return _line_norms(inner[None, :], q)[0]


def _line_norms(a: np.ndarray, p: float) -> np.ndarray:
    """1D Lᵖ norm over the last axis of a periodic [0, 2π) sample array."""
    if math.isinf(p):
        return np.max(a, axis=-1)
    m = np.max(a, axis=-1, keepdims=True)
    safe = np.where(m > 0, m, 1.0)
    out = safe[..., 0] * (TWO_PI * np.mean((a / safe) ** p, axis=-1)) ** (1.0 / p)
    return np.where(m[..., 0] > 0, out, 0.0)


@lru_cache(maxsize=32)
def besov_blocks(grid: Grid) -> tuple[np.ndarray, ...]:
    """Sharp Fourier blocks: {|k| <= 1}, then shells 2^j <= |k| < 2^(j+1)."""
    kmag = grid.kmag
    blocks = [kmag <= 1.0]
    j = 0
    while 2.0**j <= kmag.max():
        blocks.append((kmag >= 2.0**j) & (kmag < 2.0 ** (j + 1)))
        j += 1
    return tuple(blocks)


def besov_b0_inf(f: SpectralField) -> float:
    """max over sharp dyadic blocks of the sup norm of the block-filtered field.

    Sharp cutoffs are not bounded on L∞ in the continuum, so this is a
    diagnostic proxy rather than the Littlewood-Paley norm itself.
    """
    blocks = besov_blocks(f.grid)
    stack = np.stack([np.where(b, f.coeffs, 0.0) for b in blocks])
    values = _real_samples_unchecked(stack, f.grid)
    return float(np.max(np.abs(values), initial=0.0))


@dataclass(frozen=True)
class GradNorms:
    """Squared gradient quantities of a field at fixed dissipation exponents.

    ``A = ‖∇θ‖²``; ``B_alpha = ‖Λ^α_{x1}∇θ‖²``; ``B_beta = ‖Λ^β_{x2}∇θ‖²``.
    The per-axis parts feed the dissipation–gradient check.
    """

    A: float
    B_alpha: float
    B_beta: float
    grad1_sq: float
    grad2_sq: float
    diss_grad1: float
    diss_grad2: float

    @property
    def B(self) -> float:
        return self.B_alpha + self.B_beta


def grad_norms(theta: SpectralField, alpha: float, beta: float) -> GradNorms:
    g = theta.grid
    power = DOMAIN_MEASURE * np.abs(theta.coeffs) ** 2
    k1sq, k2sq = g.K1**2, g.K2**2
    w_a = _directional_weight(g, 1, float(alpha))
    w_b = _directional_weight(g, 2, float(beta))
    grad1 = float(np.sum(power * k1sq))
    grad2 = float(np.sum(power * k2sq))
    return GradNorms(
        A=grad1 + grad2,
        B_alpha=float(np.sum(power * w_a * (k1sq + k2sq))),
        B_beta=float(np.sum(power * w_b * (k1sq + k2sq))),
        grad1_sq=grad1,
        grad2_sq=grad2,
        diss_grad1=float(np.sum(power * w_a * k1sq)),
        diss_grad2=float(np.sum(power * w_b * k2sq)),
    )
