"""Finite-dimensional checks of the limit theorems.

Values of the shifted tuple at fixed test points along the lattice are
compared with values of the random model under independent Haar draws.
Weak convergence in the function space is only probed through these
point evaluations.
"""

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.stats import ks_2samp

from .errors import ConvergenceError, DomainError
from .random_model import RNG_NAME, haar_samples_phi, haar_samples_zeta
from .smoothing import finite_sum_lattice

KS_CRIT_1PCT = 1.628
MOMENT_SIGMAS = 3.0
# Seed offset between slots, so chunk seeds of different slots never collide.
SLOT_SEED_STRIDE = 2**32
LATTICE_CHUNK = 8192
DIRECT_TOL = 1e-10
MAX_DIRECT_CUTOFF = 10**7


@dataclass
class EmpiricalDistribution:
    """Samples shaped ``(n, slots)``, one column per slot."""

    samples: np.ndarray
    source: str
    test_points: tuple
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.samples = np.atleast_2d(np.asarray(self.samples, dtype=complex))
        if self.samples.shape[0] == 0:
            raise DomainError("an empirical distribution needs at least one sample")
        if self.source not in ("lattice", "haar-monte-carlo"):
            raise DomainError(f"unknown sample source {self.source!r}")
        self.test_points = tuple(complex(s) for s in self.test_points)
        if self.samples.shape[1] != len(self.test_points):
            raise DomainError("one test point per slot is required")

    @property
    def n(self):
        return self.samples.shape[0]


def _direct_cutoff(spec, sigma):
    if sigma <= 1:
        raise DomainError(f"{spec.name} has no continuation at Re s = {sigma}")
    cutoff = math.ceil((spec.coeff_bound / ((sigma - 1) * DIRECT_TOL)) ** (1 / (sigma - 1)))
    if cutoff > MAX_DIRECT_CUTOFF:
        raise ConvergenceError(f"{spec.name}: Dirichlet series at Re s = {sigma} needs {cutoff} terms")
    return cutoff


def _phi_lattice(spec, point, h, k0, k1):
    if spec.form is not None:
        return spec.form.on_lattice([point], h, k0, k1)[0][0]
    cutoff = _direct_cutoff(spec, point.real)
    return finite_sum_lattice(spec.coefficients(cutoff), np.arange(1, cutoff + 1), [point], h, k0, k1)[0]


def collect_lattice_samples(phi_spec, zeta_specs, lattice, test_points):
    """Slot values at ``s_slot + i k h_slot`` for ``k = 0..N``.

    ``test_points`` holds one point for the Euler-product slot followed by
    one per Hurwitz slot.
    """
    test_points = [complex(s) for s in test_points]
    zeta_specs = list(zeta_specs)
    if len(test_points) != 1 + len(zeta_specs) or lattice.r != len(zeta_specs):
        raise DomainError("test points, Hurwitz slots and lattice differences must match")
    N = lattice.N
    out = np.empty((N + 1, len(test_points)), dtype=complex)
    for k0 in range(0, N + 1, LATTICE_CHUNK):
        k1 = min(k0 + LATTICE_CHUNK, N + 1)
        out[k0:k1, 0] = _phi_lattice(phi_spec, test_points[0], lattice.h1, k0, k1)
        for j, (spec, h) in enumerate(zip(zeta_specs, lattice.h2)):
            out[k0:k1, j + 1] = spec.form.on_lattice([test_points[j + 1]], h, k0, k1)[0][0]
    return EmpiricalDistribution(out, "lattice", tuple(test_points), {"lattice": lattice.to_json()})


def collect_model_samples(
    phi_spec, zeta_specs, test_points, n_samples, seed, params=None, cutoff=1000, identity=False
):
    """``n_samples`` independent Haar draws of the random tuple at the test points.

    Slot ``j`` (0 for the Euler product) draws from seeds starting at
    ``seed + j * 2**32``.  ``identity=True`` replaces every phase by 1,
    which reproduces the deterministic truncated series.
    """
    test_points = [complex(s) for s in test_points]
    zeta_specs = list(zeta_specs)
    if len(test_points) != 1 + len(zeta_specs):
        raise DomainError("one test point per slot is required")
    if params is None and min(s.real for s in test_points) <= 1:
        raise DomainError("unsmoothed random series need Re s > 1")
    if n_samples < 1:
        raise DomainError("n_samples must be >= 1")
    out = np.empty((n_samples, len(test_points)), dtype=complex)
    if identity:
        from .smoothing import weighted_sum, phi_n_terms, zeta_n_terms

        if params is None:
            coeffs, bases = phi_spec.coefficients(cutoff), np.arange(1, cutoff + 1)
        else:
            coeffs, bases = phi_n_terms(phi_spec, params, cutoff)
        out[:, 0] = weighted_sum(coeffs, bases, test_points[0])
        for j, spec in enumerate(zeta_specs):
            if params is None:
                m = np.arange(cutoff + 1)
                coeffs, bases = spec.seq.values(m), m + spec.alpha
            else:
                coeffs, bases = zeta_n_terms(spec, params, cutoff)
            out[:, j + 1] = weighted_sum(coeffs, bases, test_points[j + 1])
    else:
        out[:, 0] = haar_samples_phi(phi_spec, [test_points[0]], n_samples, seed, params, cutoff)[:, 0]
        for j, spec in enumerate(zeta_specs):
            slot_seed = seed + (j + 1) * SLOT_SEED_STRIDE
            out[:, j + 1] = haar_samples_zeta(spec, [test_points[j + 1]], n_samples, slot_seed, params, cutoff)[:, 0]
    meta = {"seed": seed, "rng": RNG_NAME, "cutoff": cutoff, "identity": identity}
    if params is not None:
        meta["smoothing"] = params.to_json()
    return EmpiricalDistribution(out, "haar-monte-carlo", tuple(test_points), meta)


def _mean_and_se(x):
    n = len(x)
    m = x.mean()
    var = np.mean(np.abs(x - m) ** 2) if n > 1 else 0.0
    return m, math.sqrt(var / n)


@dataclass
class SlotReport:
    slot: int
    mean: tuple
    mean_gap: float
    mean_se: float
    abs2_mean: tuple
    abs2_gap: float
    abs2_se: float
    ks_re: float
    ks_im: float
    ks_critical: float

    @property
    def moments_agree(self):
        return self.mean_gap <= MOMENT_SIGMAS * self.mean_se and self.abs2_gap <= MOMENT_SIGMAS * self.abs2_se

    @property
    def ecdf_flag(self):
        return max(self.ks_re, self.ks_im) > self.ks_critical

    def to_json(self):
        return {
            "slot": self.slot,
            "mean_a": [self.mean[0].real, self.mean[0].imag],
            "mean_b": [self.mean[1].real, self.mean[1].imag],
            "mean_gap": self.mean_gap,
            "mean_se": self.mean_se,
            "abs2_mean_a": self.abs2_mean[0],
            "abs2_mean_b": self.abs2_mean[1],
            "abs2_gap": self.abs2_gap,
            "abs2_se": self.abs2_se,
            "ks_re": self.ks_re,
            "ks_im": self.ks_im,
            "ks_critical": self.ks_critical,
            "moments_agree": self.moments_agree,
            "ecdf_flag": self.ecdf_flag,
        }


@dataclass
class ComparisonReport:
    slots: list
    ecdf: dict = field(repr=False, default_factory=dict)

    @property
    def flagged(self):
        """True when any slot shows a moment gap beyond 3 standard errors or a significant ECDF gap."""
        return any(s.ecdf_flag or not s.moments_agree for s in self.slots)

    def to_json(self):
        return {"flagged": self.flagged, "slots": [s.to_json() for s in self.slots]}

    def write_ecdf_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["slot", "part", "x", "ecdf_a", "ecdf_b"])
            for (slot, part), (x, fa, fb) in sorted(self.ecdf.items()):
                for row in zip(x.tolist(), fa.tolist(), fb.tolist()):
                    w.writerow([slot, part] + [f"{v:.17g}" for v in row])


def _ecdf(sorted_x, grid):
    return np.searchsorted(sorted_x, grid, side="right") / len(sorted_x)


def compare(dist_a, dist_b, ecdf_nodes=101):
    """Moment gaps and per-marginal two-sample KS statistics, slot by slot.

    Standard errors treat every sample as independent, which is exact for
    Haar draws and a heuristic for lattice samples.  The KS critical value
    is the asymptotic 1% level ``1.628 * sqrt((n + m) / (n m))``.
    """
    if dist_a.test_points != dist_b.test_points:
        raise DomainError("distributions were collected at different test points")
    na, nb = dist_a.n, dist_b.n
    crit = KS_CRIT_1PCT * math.sqrt((na + nb) / (na * nb))
    slots, ecdf = [], {}
    for j in range(dist_a.samples.shape[1]):
        a, b = dist_a.samples[:, j], dist_b.samples[:, j]
        ma, sa = _mean_and_se(a)
        mb, sb = _mean_and_se(b)
        qa, qsa = _mean_and_se(np.abs(a) ** 2)
        qb, qsb = _mean_and_se(np.abs(b) ** 2)
        ks = []
        for part, fa, fb in (("re", a.real, b.real), ("im", a.imag, b.imag)):
            ks.append(float(ks_2samp(fa, fb).statistic) if not np.array_equal(fa, fb) else 0.0)
            pooled = np.concatenate([fa, fb])
            grid = np.quantile(pooled, np.linspace(0, 1, ecdf_nodes))
            ecdf[(j, part)] = (grid, _ecdf(np.sort(fa), grid), _ecdf(np.sort(fb), grid))
        slots.append(
            SlotReport(
                slot=j,
                mean=(complex(ma), complex(mb)),
                mean_gap=float(abs(ma - mb)),
                mean_se=math.hypot(sa, sb),
                abs2_mean=(float(qa.real), float(qb.real)),
                abs2_gap=float(abs(qa - qb)),
                abs2_se=math.hypot(qsa, qsb),
                ks_re=ks[0],
                ks_im=ks[1],
                ks_critical=crit,
            )
        )
    return ComparisonReport(slots, ecdf)


# --------------------------------------------------------------------------
# Mean square on vertical lines
# --------------------------------------------------------------------------

DEFAULT_STEP = 0.05


def _line_values(func, sigma0, T, step):
    K = int(round(T / step))
    if not math.isclose(K * step, T, rel_tol=1e-12):
        raise DomainError("T must be a multiple of the quadrature step")
    if callable(func) and not hasattr(func, "coefficients"):
        t = step * np.arange(K + 1)
        return np.asarray(func(sigma0 + 1j * t), dtype=complex) * np.ones(K + 1)
    return _phi_lattice(func, complex(sigma0), step, 0, K + 1)


def _trapezoid(y, step):
    return step * (math.fsum(y.tolist()) - 0.5 * (y[0] + y[-1]))


def mean_value_diagnostic_with_error(spec, sigma0, T, step=DEFAULT_STEP):
    """``(1/T) int_0^T |phi(sigma0 + i t)|**2 dt`` by the trapezoid rule, with an error estimate.

    ``spec`` is a member or any vectorized callable of ``s``.  The error
    estimate is the change when the step is doubled.
    """
    if not T > 0:
        raise DomainError("T must be positive")
    if not step > 0:
        raise DomainError("step must be positive")
    y = np.abs(_line_values(spec, sigma0, T, step)) ** 2
    fine = _trapezoid(y, step) / T
    if (len(y) - 1) % 2 == 0 and len(y) >= 3:
        coarse = _trapezoid(y[::2], 2 * step) / T
        err = abs(fine - coarse)
    else:
        err = float("nan")
    return float(fine), float(err)


def mean_value_diagnostic(spec, sigma0, T, step=DEFAULT_STEP):
    return mean_value_diagnostic_with_error(spec, sigma0, T, step)[0]
