"""Traveling-wave residual of the odd-viscosity surface-wave model.

A profile φ moving at speed c solves R[c, φ] = 0 with

    R[c, φ] = 2c φ' + (c α0 + (α0 - β)/ε) H[φ'']
              + (1/ε) (φ' + H[φ])
              + H[(H φ')²] - ⟦H, φ⟧[H φ'] - (α0 - β) ⟦H, φ⟧[H φ'''],

where H is the periodic Hilbert transform and ⟦H, f⟧[g] = H(fg) - f H(g).
Even profiles give odd residuals, so R maps cosine series to sine series.

Linearizing at the flat state diagonalizes in frequency: cos(kx) is sent to
sin(kx) times the bracket

    σ(k, c) = -(2c + 1/ε) k + 1/ε - (c α0 + (α0 - β)/ε) k²,

which is affine in c with slope -2k - α0 k² (never zero for α0 > 0, the
transversality condition).  Its unique root is the critical speed

    c_k = (1/ε) (1 - k - (α0 - β) k²) / (k (2 + α0 k)),

where nontrivial wave branches bifurcate from the flat state.

Constants are trivial solutions, so profiles are projected to zero mean
before evaluation.  Every quadratic term is evaluated with exact dealiasing;
the residual of a degree-N profile is returned exactly, on 2N modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, NumericalError
from .spectral import (
    CosineSeries,
    SineSeries,
    SpectralField,
    commutator_h,
    derivative,
    hilbert,
    multiply,
)

__all__ = [
    "ModelParams",
    "LinearSymbol",
    "OperatorMatrix",
    "residual",
    "gateaux",
    "d_c_residual",
    "symbol_at",
    "linear_symbol",
    "critical_speed",
    "d_c_symbol",
    "assemble_jacobian",
]

PARITY_TOL = 1e-12  # asserted bound on the residual's cosine leakage


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the model.

    epsilon : steepness parameter (wave amplitude over wavelength), > 0.
    alpha0  : odd Reynolds ratio (gravity over odd-viscosity forces), > 0.
    beta    : Bond number (gravity over capillary forces), any real.
    """

    epsilon: float
    alpha0: float
    beta: float

    def __post_init__(self):
        for name in ("epsilon", "alpha0", "beta"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ConfigurationError(f"{name} must be finite, got {v!r}")
        if self.epsilon <= 0:
            raise ConfigurationError(f"epsilon must be > 0, got {self.epsilon}")
        if self.alpha0 <= 0:
            raise ConfigurationError(f"alpha0 must be > 0, got {self.alpha0}")

    @property
    def degenerate(self):
        """True in the alpha0 == beta regime, where the coefficient
        alpha0 - beta vanishes and the third-order commutator term drops out."""
        return self.alpha0 == self.beta


@dataclass(frozen=True)
class LinearSymbol:
    """Fourier multiplier of the linearization at the flat state: mode k's
    cosine amplitude is sent to ``value`` times the matching sine amplitude.
    ``value`` is affine in the speed c for fixed k."""

    k: int
    value: float


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense matrix of the linearized operator on a truncated m-fold basis.

    Entry (i, j) is the sin(m(i+1)x) amplitude of the linearization applied
    to cos(m(j+1)x), for i, j = 0..n-1.
    """

    matrix: np.ndarray
    fold: int
    truncation: int

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        if mat.shape != (self.truncation, self.truncation):
            raise ConfigurationError(
                f"matrix shape {mat.shape} does not match truncation {self.truncation}"
            )
        if not np.isfinite(mat).all():
            raise ConfigurationError("operator matrix has non-finite entries")
        object.__setattr__(self, "matrix", mat)


def symbol_at(k, c, p):
    """The linearization's multiplier at frequency k and speed c."""
    k = _check_mode(k)
    g = p.alpha0 - p.beta
    return (-(2.0 * c + 1.0 / p.epsilon) * k + 1.0 / p.epsilon
            - (c * p.alpha0 + g / p.epsilon) * k * k)


def linear_symbol(k, c, p):
    return LinearSymbol(k=_check_mode(k), value=symbol_at(k, c, p))


def critical_speed(k, p):
    """The unique speed at which the multiplier at frequency k vanishes."""
    k = _check_mode(k)
    g = p.alpha0 - p.beta
    return (1.0 - k - g * k * k) / (k * (2.0 + p.alpha0 * k)) / p.epsilon


def d_c_symbol(k, p):
    """Speed-derivative of the multiplier: -2k - alpha0 k^2, strictly
    negative for alpha0 > 0 (the transversality quantity)."""
    k = _check_mode(k)
    return -2.0 * k - p.alpha0 * k * k


def _check_mode(k):
    if int(k) != k or k < 1:
        raise ConfigurationError(f"mode index must be an integer >= 1, got {k!r}")
    return int(k)


def _even_zero_mean(phi, who):
    if not isinstance(phi, SpectralField):
        raise ConfigurationError(f"{who} must be a SpectralField")
    if not phi.is_even:
        raise ConfigurationError(f"{who} must be even (all sine amplitudes zero)")
    a = phi.a.copy()
    a[0] = 0.0
    return CosineSeries(a, grid_size=phi.grid_size)


def _as_sine(field, who):
    # Outputs are odd by the model's symmetry; anything else is a numerical
    # inconsistency, not a user error.
    scale = max(1.0, float(np.max(np.abs(field.b))))
    leak = float(np.max(np.abs(field.a)))
    if leak > PARITY_TOL * scale:
        raise NumericalError(f"{who} violated odd symmetry: cosine leak {leak:.3e}")
    return SineSeries(field.b, grid_size=field.grid_size)


def residual(c, phi, p):
    """Traveling-wave residual R[c, φ] as a sine series.

    φ must be even; its mean is projected out first (constants solve the
    equation identically).  The result is exact: products carry their full
    degree, so a degree-N input yields the true residual on 2N modes.
    """
    phi = _even_zero_mean(phi, "phi")
    g = p.alpha0 - p.beta
    d1 = derivative(phi, 1)
    d2 = derivative(phi, 2)
    d3 = derivative(phi, 3)
    hp1 = hilbert(d1)

    out = (2.0 * c) * d1 \
        + (c * p.alpha0 + g / p.epsilon) * hilbert(d2) \
        + (1.0 / p.epsilon) * (d1 + hilbert(phi)) \
        + hilbert(multiply(hp1, hp1)) \
        - commutator_h(phi, hp1) \
        - g * commutator_h(phi, hilbert(d3))
    return _as_sine(out, "residual")


def gateaux(c, phi, h, p):
    """Derivative of the residual at (c, φ) in the profile direction h.

    Linear in h; equals the symmetric bilinear expansion of the quadratic
    terms plus the linear part, and matches central finite differences of
    ``residual``.
    """
    phi = _even_zero_mean(phi, "phi")
    h = _even_zero_mean(h, "h")
    terms = _profile_terms(phi)
    return _as_sine(_gateaux_from_terms(c, terms, h, p), "gateaux")


def d_c_residual(phi, p):
    """Speed-derivative of the residual at fixed profile: 2 φ' + α0 H[φ''].

    Exact (the residual is affine in c), so it doubles as the c-column of
    bordered Newton systems.
    """
    phi = _even_zero_mean(phi, "phi")
    return _as_sine(_speed_derivative(_profile_terms(phi), p), "d_c_residual")


def _profile_terms(phi):
    """Quantities of φ reused across directional derivatives."""
    d1 = derivative(phi, 1)
    return {
        "phi": phi,
        "hp1": hilbert(d1),                     # H φ'
        "hp3": hilbert(derivative(phi, 3)),     # H φ'''
        "d1": d1,
        "hd2": hilbert(derivative(phi, 2)),     # H φ''
    }


def _gateaux_from_terms(c, terms, h, p):
    g = p.alpha0 - p.beta
    dh1 = derivative(h, 1)
    hh1 = hilbert(dh1)
    hh3 = hilbert(derivative(h, 3))
    phi, hp1, hp3 = terms["phi"], terms["hp1"], terms["hp3"]
    return (2.0 * c) * dh1 \
        + (c * p.alpha0 + g / p.epsilon) * hilbert(derivative(h, 2)) \
        + (1.0 / p.epsilon) * (dh1 + hilbert(h)) \
        + 2.0 * hilbert(multiply(hp1, hh1)) \
        - commutator_h(h, hp1) \
        - commutator_h(phi, hh1) \
        - g * commutator_h(h, hp3) \
        - g * commutator_h(phi, hh3)


def _speed_derivative(terms, p):
    """d/dc of the residual at fixed φ: 2 φ' + α0 H[φ'']."""
    return 2.0 * terms["d1"] + p.alpha0 * terms["hd2"]


def _mfold_indices(m, n):
    return m * np.arange(1, n + 1)


def require_mfold(field, m, who="field"):
    """Check that a field's support lies on frequencies that are multiples
    of m (exact zero test on the complementary amplitudes)."""
    mask = np.ones(field.n_modes + 1, dtype=bool)
    mask[::m] = False
    mask[0] = False
    if field.a[mask].any() or field.b[mask].any():
        raise ConfigurationError(f"{who} is not supported on the {m}-fold lattice")


def assemble_jacobian(c, phi, p, n, m=1):
    """Matrix of the profile-linearization on the m-fold cosine basis.

    Columns are the images of cos(mjx), j = 1..n, expressed in the sine
    amplitudes at frequencies m, 2m, ..., nm.  At φ = 0 the matrix is
    diagonal with entries σ(mj, c).
    """
    if n < 1 or int(n) != n or m < 1 or int(m) != m:
        raise ConfigurationError("truncation and fold must be positive integers")
    n, m = int(n), int(m)
    if not phi.is_even:
        raise ConfigurationError("phi must be even")
    require_mfold(phi, m, "phi")
    if phi.n_modes > m * n:
        raise ConfigurationError(
            f"phi has {phi.n_modes} modes, exceeding the {m}-fold truncation {m * n}"
        )
    phi = _even_zero_mean(phi, "phi").pad_to(m * n)
    terms = _profile_terms(phi)
    rows = _mfold_indices(m, n)
    mat = np.empty((n, n))
    basis = np.zeros(m * n + 1)
    for j in range(1, n + 1):
        basis[m * j] = 1.0
        col = _gateaux_from_terms(c, terms, CosineSeries(basis), p)
        mat[:, j - 1] = col.b[rows]
        basis[m * j] = 0.0
    return OperatorMatrix(matrix=mat, fold=m, truncation=n)
