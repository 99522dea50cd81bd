"""Exponentially smoothed Dirichlet series and their distance to the originals.

The weights

    v1(m, n)        = exp(-(m / n) ** sigma0_star)
    v2(m, n, alpha) = exp(-((m + alpha) / (n + alpha)) ** sigma0_star)

make ``sum c_m v1(m, n) m**(-s)`` and ``sum b_m v2(m, n, alpha) (m + alpha)**(-s)``
absolutely convergent for ``Re s > 1/2``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma, gammaincc

from . import _lattice
from .errors import ConvergenceError, DomainError
from .special_functions import as_points

DEFAULT_SIGMA0_STAR = 0.7
WEIGHT_EXPONENT_FLOOR = 40.0
MAX_CUTOFF = 10**8
TAIL_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SmoothingParams:
    n: int
    sigma0_star: float = DEFAULT_SIGMA0_STAR

    def __post_init__(self):
        if not self.n >= 1:
            raise DomainError("smoothing level n must be >= 1")
        if not 0.5 < self.sigma0_star < 1:
            raise DomainError("sigma0_star must lie in (1/2, 1)")

    @classmethod
    def from_json(cls, doc):
        if doc is None:
            return None
        return cls(int(doc["n"]), float(doc.get("sigma0_star", DEFAULT_SIGMA0_STAR)))

    def to_json(self):
        return {"n": self.n, "sigma0_star": self.sigma0_star}


def weight_v1(m, params):
    m = np.asarray(m, dtype=float)
    return np.exp(-((m / params.n) ** params.sigma0_star))


def weight_v2(m, alpha, params):
    m = np.asarray(m, dtype=float)
    return np.exp(-(((m + alpha) / (params.n + alpha)) ** params.sigma0_star))


def default_cutoff(params, offset=0.0):
    """Smallest ``M`` with ``((M + offset) / (n + offset)) ** sigma0_star >= 40``."""
    a = params.sigma0_star
    M = math.ceil((params.n + offset) * WEIGHT_EXPONENT_FLOOR ** (1 / a) - offset)
    while ((M + offset) / (params.n + offset)) ** a < WEIGHT_EXPONENT_FLOOR:
        M += 1
    return M


def smoothed_tail_bound(params, sigma, cutoff, coeff_bound=1.0, offset=0.0):
    """Bound on ``sum_{m > cutoff} |c_m| v(m) (m + offset)**(-sigma)`` for ``sigma >= 0``.

    Uses ``(m + offset)**(-sigma) <= (cutoff + offset)**(-sigma)`` and the
    integral of the decreasing weight, which is an incomplete gamma value.
    ``offset = 0`` gives the ``v1`` tail, ``offset = alpha`` the ``v2`` tail.
    """
    if sigma < 0:
        raise DomainError("tail bound requires sigma >= 0")
    a = params.sigma0_star
    scale = params.n + offset
    x = cutoff + offset
    U = (x / scale) ** a
    integral = scale / a * gamma(1 / a) * gammaincc(1 / a, U)
    return float(coeff_bound * x ** (-sigma) * integral)


def _auto_cutoff(params, sigma, coeff_bound, offset):
    cutoff = default_cutoff(params, offset)
    while smoothed_tail_bound(params, sigma, cutoff, coeff_bound, offset) >= TAIL_TOLERANCE:
        cutoff *= 2
        if cutoff > MAX_CUTOFF:
            raise ConvergenceError(
                f"no cutoff below {MAX_CUTOFF} certifies a tail < {TAIL_TOLERANCE} at sigma={sigma}"
            )
    if cutoff > MAX_CUTOFF:
        raise ConvergenceError(f"default cutoff {cutoff} exceeds the cap {MAX_CUTOFF}")
    return cutoff


def weighted_sum(coeffs, bases, s):
    """``sum_j coeffs[j] * bases[j]**(-s)`` for scalar or array ``s``, summed pairwise."""
    s_arr = as_points(s)
    logs = np.log(np.asarray(bases, dtype=float))
    flat = s_arr.reshape(-1)
    # Sum the small end first; see dirichlet_series.
    terms = coeffs[::-1] * np.exp(-flat[:, None] * logs[::-1][None, :])
    out = terms.sum(axis=1).reshape(s_arr.shape)
    return complex(out) if np.ndim(s) == 0 else out


def phi_n_terms(spec, params, cutoff):
    """Coefficients ``c_m v1(m, n)`` and bases ``m`` for ``m = 1..cutoff``."""
    m = np.arange(1, cutoff + 1)
    return spec.coefficients(cutoff) * weight_v1(m, params), m


def zeta_n_terms(spec, params, cutoff):
    """Coefficients ``b_m v2(m, n, alpha)`` and bases ``m + alpha`` for ``m = 0..cutoff``."""
    m = np.arange(cutoff + 1)
    return spec.seq.values(m) * weight_v2(m, spec.alpha, params), m + spec.alpha


def _min_sigma(s):
    sig = float(np.min(as_points(s).real))
    if sig <= 0.5:
        raise DomainError("smoothed series are only certified for Re s > 1/2")
    return sig


def phi_n_with_tail(spec, s, params, cutoff=None):
    """Smoothed Euler-product series and the certified bound on the omitted tail."""
    sig = _min_sigma(s)
    if cutoff is None:
        cutoff = _auto_cutoff(params, sig, spec.coeff_bound, 0.0)
    coeffs, bases = phi_n_terms(spec, params, cutoff)
    tail = smoothed_tail_bound(params, sig, cutoff, spec.coeff_bound)
    return weighted_sum(coeffs, bases, s), tail


def phi_n(spec, s, params, cutoff=None):
    """``sum_{m <= cutoff} c_m v1(m, n) m**(-s)``; cutoff chosen automatically if omitted."""
    return phi_n_with_tail(spec, s, params, cutoff)[0]


def zeta_n_with_tail(spec, s, params, cutoff=None):
    sig = _min_sigma(s)
    bound = max(abs(c) for c in spec.seq.coeffs)
    if cutoff is None:
        cutoff = _auto_cutoff(params, sig, bound, spec.alpha)
    coeffs, bases = zeta_n_terms(spec, params, cutoff)
    tail = smoothed_tail_bound(params, sig, cutoff, bound, spec.alpha)
    return weighted_sum(coeffs, bases, s), tail


def zeta_n(spec, s, params, cutoff=None):
    """``sum_{m=0}^{cutoff} b_m v2(m, n, alpha) (m + alpha)**(-s)``."""
    return zeta_n_with_tail(spec, s, params, cutoff)[0]


def finite_sum_lattice(coeffs, bases, nodes, h, k_start, k_stop):
    """``sum_j coeffs[j] * bases[j]**(-(node + i*k*h))`` over a block of ``k``."""
    nodes = np.atleast_1d(np.asarray(nodes, dtype=complex))
    logs = np.log(np.asarray(bases, dtype=float))
    A = coeffs[None, :] * np.exp(-nodes[:, None] * logs[None, :])
    out = np.empty((len(nodes), k_stop - k_start), dtype=complex)
    ncols = len(logs)
    for k0, k1, part in _lattice.shifted_sums(A, logs, h, k_start, k_stop, lambda a, b: ncols):
        out[:, k0 - k_start : k1 - k_start] = part
    return out


def mean_sup_distance(values_a, values_b):
    """``(1/(N+1)) sum_k max |a - b|`` for per-slot arrays shaped ``(nodes, N+1)``."""
    if len(values_a) != len(values_b):
        raise DomainError("slot counts differ")
    per_k = None
    for a, b in zip(values_a, values_b):
        d = np.max(np.abs(np.asarray(a) - np.asarray(b)), axis=0)
        per_k = d if per_k is None else np.maximum(per_k, d)
    # Ascending-k summation order is fixed for reproducibility.
    return float(math.fsum(per_k.tolist()) / len(per_k))


def approximation_deficit(phi_spec, zeta_specs, region, params, lattice, *, boundary_nodes=32):
    """Discrete mean over ``k <= N`` of the sup-distance between the tuple and its smoothing.

    The sup is taken over the boundary grid of the rectangle ``region``; the
    tuple is ``(phi, zeta_1, ..., zeta_r)`` shifted by ``i*k*h1`` and
    ``i*k*h2_j`` respectively.
    """
    from .geometry import CompactSetSpec, boundary_points

    if not (math.isfinite(region.t_min) and math.isfinite(region.t_max)):
        raise DomainError("the deficit region must be bounded")
    if region.sigma_min <= 0.5:
        raise DomainError("the deficit region must lie in Re s > 1/2")
    rect = CompactSetSpec.rectangle(
        complex(region.sigma_min, region.t_min),
        complex(region.sigma_max, region.t_max),
        boundary_nodes=boundary_nodes,
    )
    nodes = boundary_points(rect)
    if phi_spec.form is None and region.sigma_min <= 1:
        raise DomainError(f"{phi_spec.name} has no continuation into the region")
    N = lattice.N
    exact, smooth = [], []
    sig = region.sigma_min

    if phi_spec.form is not None:
        exact.append(phi_spec.form.on_lattice(nodes, lattice.h1, 0, N + 1)[0])
    else:
        cutoff = math.ceil((phi_spec.coeff_bound / ((sig - 1) * 1e-12)) ** (1 / (sig - 1)))
        if cutoff > MAX_CUTOFF:
            raise ConvergenceError(f"{phi_spec.name}: Dirichlet series needs {cutoff} terms")
        m = np.arange(1, cutoff + 1)
        exact.append(finite_sum_lattice(phi_spec.coefficients(cutoff), m, nodes, lattice.h1, 0, N + 1))
    cutoff = _auto_cutoff(params, sig, phi_spec.coeff_bound, 0.0)
    coeffs, bases = phi_n_terms(phi_spec, params, cutoff)
    smooth.append(finite_sum_lattice(coeffs, bases, nodes, lattice.h1, 0, N + 1))

    for spec, h2 in zip(zeta_specs, lattice.h2):
        exact.append(spec.form.on_lattice(nodes, h2, 0, N + 1)[0])
        bound = max(abs(c) for c in spec.seq.coeffs)
        cutoff = _auto_cutoff(params, sig, bound, spec.alpha)
        coeffs, bases = zeta_n_terms(spec, params, cutoff)
        smooth.append(finite_sum_lattice(coeffs, bases, nodes, h2, 0, N + 1))
    return mean_sup_distance(exact, smooth)
