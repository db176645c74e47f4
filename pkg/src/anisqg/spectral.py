"""
Fourier representation of scalar fields on the periodic torus [0, 2π)².

Conventions used throughout the package:

- Real-space arrays have shape ``(n2, n1)``: axis 0 runs along x₂ and axis 1
  along x₁ (row-major with x₂ as the outer index).
- The forward transform divides by ``n1 * n2`` so the (0, 0) coefficient is
  the mean of the samples.
- Wavenumbers follow the standard FFT ordering, ``{-n/2, ..., n/2 - 1}``.
- Odd symbols (derivatives, Riesz transforms) vanish on the Nyquist line of
  their axis; otherwise they would break Hermitian symmetry there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Literal

import numpy as np
import scipy.fft as sfft

TWO_PI = 2.0 * np.pi
#: Physical area of the torus; converts coefficient sums into L² integrals.
DOMAIN_MEASURE = TWO_PI**2

HERMITIAN_RTOL = 1e-12

ZeroModePolicy = Literal["keep", "strip-x1", "strip-x2", "strip-both"]


class HermitianSymmetryError(ValueError):
    """A field flagged as real has lost Hermitian symmetry."""


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid with ``n1`` points along x₁ and ``n2`` along x₂."""

    n1: int
    n2: int

    def __post_init__(self):
        for name in ("n1", "n2"):
            n = getattr(self, name)
            if not isinstance(n, (int, np.integer)) or n < 8 or n % 2:
                raise ValueError(f"{name} must be an even integer >= 8, got {n!r}")

    @classmethod
    def square(cls, n: int) -> "Grid":
        return cls(n, n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n2, self.n1)

    @cached_property
    def k1(self) -> np.ndarray:
        return _wavenumbers(self.n1)

    @cached_property
    def k2(self) -> np.ndarray:
        return _wavenumbers(self.n2)

    @cached_property
    def K1(self) -> np.ndarray:
        """x₁ wavenumber broadcast to the full ``(n2, n1)`` mode array."""
        return _frozen(np.broadcast_to(self.k1[None, :], self.shape).astype(float))

    @cached_property
    def K2(self) -> np.ndarray:
        return _frozen(np.broadcast_to(self.k2[:, None], self.shape).astype(float))

    @cached_property
    def kmag(self) -> np.ndarray:
        return _frozen(np.hypot(self.K1, self.K2))

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        # |k| <= n/3 per axis, in integer arithmetic
        keep1 = 3 * np.abs(self.k1) <= self.n1
        keep2 = 3 * np.abs(self.k2) <= self.n2
        return _frozen(keep2[:, None] & keep1[None, :])

    @cached_property
    def neg_index(self) -> tuple[np.ndarray, np.ndarray]:
        """Index arrays mapping each mode k to the storage slot of -k."""
        i2 = (-np.arange(self.n2)) % self.n2
        i1 = (-np.arange(self.n1)) % self.n1
        return i2, i1

    @cached_property
    def x1(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n1) / self.n1

    @cached_property
    def x2(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n2) / self.n2

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Real-space coordinates ``(X1, X2)``, each of shape ``(n2, n1)``."""
        X1, X2 = np.meshgrid(self.x1, self.x2)
        return X1, X2


def _wavenumbers(n: int) -> np.ndarray:
    return _frozen(np.rint(np.fft.fftfreq(n) * n).astype(np.int64))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Fourier coefficients of a scalar field; immutable once constructed."""

    grid: Grid
    coeffs: np.ndarray = field(repr=False)
    real: bool = True

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != self.grid.shape:
            raise ValueError(
                f"coefficient array has shape {c.shape}, grid expects {self.grid.shape}"
            )
        if c is self.coeffs and c.flags.writeable:
            c = c.copy()
        object.__setattr__(self, "coeffs", _frozen(c))

    @classmethod
    def zeros(cls, grid: Grid) -> "SpectralField":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128))

    def with_coeffs(self, coeffs: np.ndarray) -> "SpectralField":
        return SpectralField(self.grid, coeffs, self.real)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        _check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs + other.coeffs, self.real and other.real)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        _check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs - other.coeffs, self.real and other.real)

    def __neg__(self) -> "SpectralField":
        return self.with_coeffs(-self.coeffs)

    def __mul__(self, scalar: float) -> "SpectralField":
        if isinstance(scalar, SpectralField):
            raise TypeError("use product() for pointwise products of fields")
        real = self.real and np.isrealobj(scalar)
        return SpectralField(self.grid, self.coeffs * scalar, real)

    __rmul__ = __mul__

    def hermitian_defect(self) -> float:
        """max |c(k) - conj(c(-k))| over all modes."""
        i2, i1 = self.grid.neg_index
        mirrored = self.coeffs[i2][:, i1]
        return float(np.max(np.abs(self.coeffs - np.conj(mirrored)), initial=0.0))

    def amplitude(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))


def _check_same_grid(a: SpectralField, b: SpectralField) -> None:
    if a.grid != b.grid:
        raise ValueError(f"grid mismatch: {a.grid} vs {b.grid}")


def to_spectral(samples: np.ndarray, grid: Grid | None = None) -> SpectralField:
    """Forward transform of real samples of shape ``(n2, n1)``."""
    samples = np.asarray(samples)
    if samples.ndim != 2:
        raise ValueError(f"expected a 2D array, got {samples.ndim} dimensions")
    if np.iscomplexobj(samples):
        raise ValueError("to_spectral expects real-valued samples")
    if grid is None:
        n2, n1 = samples.shape
        grid = Grid(n1, n2)
    elif samples.shape != grid.shape:
        raise ValueError(
            f"sample array has shape {samples.shape}, grid expects {grid.shape} (n2, n1)"
        )
    coeffs = sfft.fft2(samples.astype(np.float64), norm="forward")
    return SpectralField(grid, coeffs, real=True)


def from_spectral(f: SpectralField) -> np.ndarray:
    """Real-space samples of a real field.

    Raises HermitianSymmetryError if the inverse transform carries an
    imaginary residue above 1e-12 of the field amplitude.
    """
    if not f.real:
        raise ValueError("from_spectral requires a field flagged as real")
    values = sfft.ifft2(f.coeffs, norm="forward")
    scale = max(float(np.max(np.abs(values.real), initial=0.0)), f.amplitude())
    residue = float(np.max(np.abs(values.imag), initial=0.0))
    if residue > HERMITIAN_RTOL * scale:
        raise HermitianSymmetryError(
            f"imaginary residue {residue:.3e} exceeds {HERMITIAN_RTOL:g} x amplitude "
            f"{scale:.3e}; field is corrupted"
        )
    return np.ascontiguousarray(values.real)


def _real_samples_unchecked(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    """Fast inverse for coefficient stacks known to be Hermitian."""
    half = coeffs[..., : grid.n1 // 2 + 1]
    return sfft.irfft2(half, s=grid.shape, norm="forward")


def _spectral_unchecked(samples: np.ndarray, grid: Grid) -> np.ndarray:
    return sfft.fft2(samples, norm="forward")


OperatorKind = Literal["directional-fractional", "full-fractional", "riesz", "partial-derivative"]


@dataclass(frozen=True)
class OperatorSpec:
    """A Fourier multiplier.

    ``directional-fractional`` on axis i with order s has symbol |k_i|^s,
    ``full-fractional`` has |k|^s, ``riesz`` on axis j has i k_j / |k| and
    ``partial-derivative`` on axis j has i k_j.
    """

    kind: OperatorKind
    axis: int | None = None
    order: float = 0.0

    def __post_init__(self):
        if self.kind not in ("directional-fractional", "full-fractional", "riesz", "partial-derivative"):
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.kind != "full-fractional" and self.axis not in (1, 2):
            raise ValueError(f"{self.kind} needs axis 1 or 2, got {self.axis!r}")
        if not 0.0 <= self.order <= 4.0:
            raise ValueError(f"operator order must lie in [0, 4], got {self.order}")

    @classmethod
    def directional(cls, axis: int, order: float) -> "OperatorSpec":
        return cls("directional-fractional", axis, float(order))

    @classmethod
    def full(cls, order: float) -> "OperatorSpec":
        return cls("full-fractional", None, float(order))

    @classmethod
    def riesz(cls, axis: int) -> "OperatorSpec":
        return cls("riesz", axis, 0.0)

    @classmethod
    def partial(cls, axis: int) -> "OperatorSpec":
        return cls("partial-derivative", axis, 1.0)


@lru_cache(maxsize=256)
def symbol(grid: Grid, op: OperatorSpec) -> np.ndarray:
    """Multiplier values for every stored mode, shape ``(n2, n1)``."""
    if op.kind == "full-fractional":
        return _frozen(_power(grid.kmag, op.order))
    K = grid.K1 if op.axis == 1 else grid.K2
    if op.kind == "directional-fractional":
        return _frozen(_power(np.abs(K), op.order))
    n = grid.n1 if op.axis == 1 else grid.n2
    K_odd = np.where(K == -(n // 2), 0.0, K)
    if op.kind == "partial-derivative":
        return _frozen(1j * K_odd)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(grid.kmag > 0, K_odd / grid.kmag, 0.0)
    return _frozen(1j * r)


def _power(base: np.ndarray, s: float) -> np.ndarray:
    # 0**0 == 1 keeps order-0 operators equal to the identity
    return np.power(base, s)


def apply_multiplier(f: SpectralField, op: OperatorSpec) -> SpectralField:
    out = SpectralField(f.grid, f.coeffs * symbol(f.grid, op), f.real)
    if f.real:
        defect = out.hermitian_defect()
        if defect > HERMITIAN_RTOL * max(out.amplitude(), np.finfo(float).tiny):
            raise HermitianSymmetryError(f"multiplier broke Hermitian symmetry (defect {defect:.3e})")
    return out


def apply_symbol(f: SpectralField, sym: np.ndarray) -> SpectralField:
    """Multiply by an arbitrary precomputed symbol; no symmetry check."""
    return SpectralField(f.grid, f.coeffs * sym, f.real)


@lru_cache(maxsize=32)
def _velocity_symbols(grid: Grid, law: str) -> tuple[np.ndarray, np.ndarray]:
    r1 = symbol(grid, OperatorSpec.riesz(1))
    r2 = symbol(grid, OperatorSpec.riesz(2))
    if law == "sqg":
        return _frozen(-r2), r1
    if law == "pm":
        return _frozen(-(r1 * r2)), _frozen(r1 * r1)
    raise ValueError(f"unknown velocity law {law!r}; expected 'sqg' or 'pm'")


def velocity(theta: SpectralField, law: str = "sqg") -> tuple[SpectralField, SpectralField]:
    s1, s2 = _velocity_symbols(theta.grid, law)
    return apply_symbol(theta, s1), apply_symbol(theta, s2)


def velocity_sqg(theta: SpectralField) -> tuple[SpectralField, SpectralField]:
    """u = (-R₂θ, R₁θ)."""
    return velocity(theta, "sqg")


def velocity_pm(theta: SpectralField) -> tuple[SpectralField, SpectralField]:
    """u = (-R₁R₂θ, R₁R₁θ), the porous-medium law."""
    return velocity(theta, "pm")


def spectral_divergence(u1: SpectralField, u2: SpectralField) -> np.ndarray:
    """Per-mode i k₁ û₁ + i k₂ û₂."""
    g = u1.grid
    return u1.coeffs * symbol(g, OperatorSpec.partial(1)) + u2.coeffs * symbol(g, OperatorSpec.partial(2))


def dealias(f: SpectralField) -> SpectralField:
    return f.with_coeffs(np.where(f.grid.dealias_mask, f.coeffs, 0.0))


def is_dealiased(f: SpectralField) -> bool:
    return not np.any(f.coeffs[~f.grid.dealias_mask])


def random_band_limited_field(
    grid: Grid,
    seed: int,
    kmax: int,
    profile: str = "flat",
    decay_rate: float = 1.0,
    policy: ZeroModePolicy = "keep",
) -> SpectralField:
    """Real random field with modes |k₁|, |k₂| <= kmax, unit L² norm.

    Amplitudes are 1 (``profile="flat"``) or (1 + |k|)^(-decay_rate)
    (``profile="decaying"``); phases are uniform on [0, 2π). Draws come from
    numpy's PCG64 generator seeded with ``seed``, so results are reproducible
    across platforms.
    """
    if kmax < 1 or 3 * kmax > min(grid.n1, grid.n2):
        raise ValueError(f"kmax={kmax} must lie in [1, min(n1, n2)/3] for grid {grid}")
    if policy not in ("keep", "strip-x1", "strip-x2", "strip-both"):
        raise ValueError(f"unknown zero-mode policy {policy!r}")
    rng = np.random.Generator(np.random.PCG64(seed))
    phases = rng.uniform(0.0, TWO_PI, size=grid.shape)

    K1, K2 = grid.K1, grid.K2
    if profile == "flat":
        amp = np.ones(grid.shape)
    elif profile == "decaying":
        amp = (1.0 + grid.kmag) ** (-decay_rate)
    else:
        raise ValueError(f"unknown profile {profile!r}; expected 'flat' or 'decaying'")
    band = (np.abs(K1) <= kmax) & (np.abs(K2) <= kmax)
    if policy in ("strip-x1", "strip-both"):
        band &= K1 != 0
    if policy in ("strip-x2", "strip-both"):
        band &= K2 != 0

    upper = (K2 > 0) | ((K2 == 0) & (K1 > 0))
    c = np.where(band & upper, amp * np.exp(1j * phases), 0.0)
    i2, i1 = grid.neg_index
    c = c + np.conj(c[i2][:, i1])
    if band[0, 0]:
        c[0, 0] = amp[0, 0] * np.cos(phases[0, 0])
    norm = np.sqrt(DOMAIN_MEASURE * np.sum(np.abs(c) ** 2))
    if norm == 0.0:
        raise ValueError("zero-mode policy removed every mode in the band")
    return SpectralField(grid, c / norm, real=True)


def plane_wave(grid: Grid, k1: int, k2: int, amplitude: float = 1.0, phase: str = "cos") -> SpectralField:
    """amplitude * cos(k₁x₁ + k₂x₂) (or sin), built directly in Fourier space."""
    c = np.zeros(grid.shape, dtype=np.complex128)
    if k1 == 0 and k2 == 0:
        c[0, 0] = amplitude if phase == "cos" else 0.0
        return SpectralField(grid, c)
    j2, j1 = k2 % grid.n2, k1 % grid.n1
    m2, m1 = (-k2) % grid.n2, (-k1) % grid.n1
    if phase == "cos":
        c[j2, j1] += amplitude / 2
        c[m2, m1] += amplitude / 2
    elif phase == "sin":
        c[j2, j1] += amplitude / 2j
        c[m2, m1] -= amplitude / 2j
    else:
        raise ValueError(f"phase must be 'cos' or 'sin', got {phase!r}")
    return SpectralField(grid, c)


def pointwise_product(a: SpectralField, b: SpectralField) -> SpectralField:
    """Pseudo-spectral product followed by the two-thirds dealiasing rule."""
    _check_same_grid(a, b)
    g = a.grid
    prod = _real_samples_unchecked(a.coeffs, g) * _real_samples_unchecked(b.coeffs, g)
    return dealias(SpectralField(g, _spectral_unchecked(prod, g)))
