"""Discrete joint universality experiments.

For a lattice ``k = 0..N`` the experiment counts the shifts for which

    sup_{s in K1}  |phi(s + i k h1) - f1(s)|               < eps   and
    sup_{s in K2j} |zeta(s + i k h2_j, alpha_j; B_j) - f2j(s)| < eps  for every j

hold simultaneously.  Targets are polynomials, exponentials of
polynomials, or samples of the smoothed random model (which lie in the
support of the limit measure by construction).
"""

import concurrent.futures
import csv
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from . import geometry
from .errors import InvariantError, LengthMismatch, NonAdmissibleTarget, DomainError, ZetaLabError
from .geometry import CompactSetSpec
from .random_model import random_phi, random_zeta, sample_haar
from .smoothing import (
    SmoothingParams,
    _auto_cutoff,
    default_cutoff,
    finite_sum_lattice,
    phi_n_terms,
    zeta_n_terms,
)

SCAN_CHUNK = 8192
WINDING_REFINEMENT = 4
TARGET_FORMS = ("polynomial", "exp_polynomial", "sampled")


def grid_points(spec, include_interior=True):
    """Boundary nodes followed by the interior lattice of a compact set."""
    return geometry.grid_points(spec, include_interior)


def sup_distance(f_values, g_values):
    f = np.asarray(f_values, dtype=complex)
    g = np.asarray(g_values, dtype=complex)
    if f.shape != g.shape:
        raise LengthMismatch(f"cannot compare {f.shape} values with {g.shape}")
    if f.size == 0:
        return 0.0
    return float(np.max(np.abs(f - g)))


@dataclass(frozen=True)
class ShiftLattice:
    """Common differences ``h1``, ``h2_1..h2_r`` and the last shift index ``N``.

    ``h2`` may be empty for experiments that only involve the Euler-product slot.
    """

    h1: float
    h2: Tuple[float, ...]
    N: int

    def __post_init__(self):
        h2 = tuple(float(h) for h in self.h2)
        if not self.h1 > 0 or not all(h > 0 for h in h2):
            raise DomainError("common differences must be positive")
        if int(self.N) != self.N or self.N < 0:
            raise DomainError("N must be a non-negative integer")
        object.__setattr__(self, "h1", float(self.h1))
        object.__setattr__(self, "h2", h2)
        object.__setattr__(self, "N", int(self.N))

    @property
    def r(self):
        return len(self.h2)

    @classmethod
    def from_json(cls, doc):
        return cls(float(doc["h1"]), tuple(doc.get("h2", ())), int(doc["N"]))

    def to_json(self):
        return {"h1": self.h1, "h2": list(self.h2), "N": self.N}


def _as_coeffs(raw):
    out = []
    for c in raw:
        out.append(complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c))
    return tuple(out)


@dataclass(frozen=True)
class TargetSpec:
    """A target function on a compact set.

    ``polynomial`` and ``exp_polynomial`` take ``coeffs`` in increasing
    powers of ``s - center`` (``center`` defaults to the set's anchor).
    ``sampled`` draws a Haar point from ``seed`` and evaluates the smoothed
    random model of the slot's function at level ``n``.
    """

    form: str
    set: CompactSetSpec
    coeffs: Tuple[complex, ...] = ()
    center: Optional[complex] = None
    seed: Optional[int] = None
    n: Optional[int] = None
    sigma0_star: float = 0.7

    def __post_init__(self):
        if self.form not in TARGET_FORMS:
            raise DomainError(f"unknown target form {self.form!r}")
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))
        if self.form == "sampled":
            if self.seed is None or self.n is None:
                raise DomainError("sampled targets need a seed and a smoothing level n")
            SmoothingParams(int(self.n), self.sigma0_star)
        elif not self.coeffs:
            raise DomainError(f"{self.form} target needs at least one coefficient")

    @property
    def expansion_center(self):
        return self.set.anchor if self.center is None else complex(self.center)

    @property
    def smoothing(self):
        return SmoothingParams(int(self.n), self.sigma0_star)

    @classmethod
    def from_json(cls, doc):
        center = doc.get("center")
        return cls(
            form=doc["form"],
            set=CompactSetSpec.from_json(doc["set"]),
            coeffs=tuple(doc.get("coeffs", ())),
            center=None if center is None else complex(center[0], center[1]),
            seed=doc.get("seed"),
            n=doc.get("n"),
            sigma0_star=float(doc.get("sigma0_star", 0.7)),
        )

    def to_json(self):
        doc = {"form": self.form, "set": self.set.to_json()}
        if self.form == "sampled":
            doc.update(seed=self.seed, n=self.n, sigma0_star=self.sigma0_star)
        else:
            doc["coeffs"] = [[c.real, c.imag] for c in self.coeffs]
            if self.center is not None:
                doc["center"] = [self.center.real, self.center.imag]
        return doc


def _horner(coeffs, z):
    out = np.zeros_like(z, dtype=complex)
    for c in reversed(coeffs):
        out = out * z + c
    return out


def winding_number(values):
    """Winding number about 0 of the closed polygon through ``values``."""
    v = np.asarray(values, dtype=complex)
    steps = np.angle(np.roll(v, -1) / v)
    return int(round(float(np.sum(steps)) / (2 * math.pi)))


class Target:
    """A built target: callable on points, with its distance grid precomputed."""

    def __init__(self, spec, func, analytic_form):
        self.spec = spec
        self._func = func
        # Analytic targets rely on the maximum principle; sampled ones also use interior nodes.
        self.nodes = grid_points(spec.set, include_interior=not analytic_form)
        self.values = self(self.nodes)

    def __call__(self, s):
        s_arr = np.asarray(s, dtype=complex)
        out = self._func(s_arr)
        return complex(out) if s_arr.ndim == 0 else out


def build_target(spec, slot="phi", member=None):
    """Turn a :class:`TargetSpec` into an evaluable :class:`Target`.

    ``slot`` is ``"phi"`` for the Euler-product slot and ``"zeta"`` for a
    Hurwitz slot; ``member`` is the slot's function and is needed only for
    sampled targets.  Euler-product targets must be non-vanishing on the set
    or identically zero; violations raise :class:`NonAdmissibleTarget`.
    """
    if slot not in ("phi", "zeta"):
        raise DomainError(f"unknown slot {slot!r}")
    K = spec.set
    c0 = spec.expansion_center
    if spec.form == "polynomial":
        coeffs = spec.coeffs
        if slot == "phi" and any(c != 0 for c in coeffs):
            trimmed = np.trim_zeros(np.array(coeffs), "b")
            roots = np.roots(trimmed[::-1]) + c0 if len(trimmed) > 1 else np.array([])
            if np.any(K.contains(roots)):
                raise NonAdmissibleTarget("polynomial target for the Euler-product slot vanishes on the set")
        target = Target(spec, lambda s: _horner(coeffs, s - c0), True)
    elif spec.form == "exp_polynomial":
        coeffs = spec.coeffs
        target = Target(spec, lambda s: np.exp(_horner(coeffs, s - c0)), True)
    else:
        if member is None:
            raise DomainError("sampled targets need the slot's function")
        params = spec.smoothing
        if slot == "phi":
            cutoff = default_cutoff(params)
            point = sample_haar(spec.seed, prime_bound=cutoff, m_bound=1, r=0)

            def func(s):
                return random_phi(member, s.ravel(), point, params, cutoff).reshape(s.shape)

        else:
            cutoff = default_cutoff(params, member.alpha)
            point = sample_haar(spec.seed, prime_bound=2, m_bound=cutoff, r=1)

            def func(s):
                return random_zeta(member, 0, s.ravel(), point, params, cutoff).reshape(s.shape)

        target = Target(spec, func, False)
        if slot == "phi":
            _check_nonvanishing(target, K)
    if slot == "phi":
        vals = target.values
        if np.any(vals != 0) and np.min(np.abs(vals)) <= 1e-12 * np.max(np.abs(vals)):
            raise NonAdmissibleTarget("Euler-product target vanishes at a grid node but is not identically zero")
    return target


def _check_nonvanishing(target, K):
    vals = target.values
    if np.all(vals == 0):
        return
    if np.min(np.abs(vals)) <= 1e-12 * np.max(np.abs(vals)):
        raise NonAdmissibleTarget("sampled Euler-product target vanishes at a grid node")
    ring = geometry.boundary_points(K, WINDING_REFINEMENT * K.boundary_nodes)
    if winding_number(target(ring)) != 0:
        raise NonAdmissibleTarget("sampled Euler-product target has a zero inside the set")


def fit_polynomial(points, values, degree, center=0j):
    """Least-squares coefficients (increasing powers of ``s - center``) and the residual sup-norm."""
    z = np.asarray(points, dtype=complex) - center
    values = np.asarray(values, dtype=complex)
    if len(z) != len(values):
        raise LengthMismatch("points and values differ in length")
    V = np.vander(z, degree + 1, increasing=True)
    coeffs, *_ = np.linalg.lstsq(V, values, rcond=None)
    return coeffs, sup_distance(V @ coeffs, values)


def mergelyan_target(target, degree):
    """Polynomial surrogate of a built target, fitted on its boundary nodes."""
    spec = target.spec
    c0 = spec.expansion_center
    nodes = geometry.boundary_points(spec.set)
    coeffs, resid = fit_polynomial(nodes, target(nodes), degree, c0)
    return TargetSpec("polynomial", spec.set, tuple(coeffs), center=c0), resid


# --------------------------------------------------------------------------
# Experiments
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class _SlotPlan:
    """Everything a worker needs to evaluate one slot along the lattice."""

    nodes: np.ndarray
    target_values: np.ndarray
    h: float
    form: object = None
    coeffs: Optional[np.ndarray] = None
    bases: Optional[np.ndarray] = None

    def values(self, k0, k1):
        if self.form is not None:
            return self.form.on_lattice(self.nodes, self.h, k0, k1)
        return finite_sum_lattice(self.coeffs, self.bases, self.nodes, self.h, k0, k1), 0.0


def _chunk_distances(plans, k0, k1):
    dist = np.empty((k1 - k0, len(plans)))
    worst = 0.0
    for j, plan in enumerate(plans):
        vals, bound = plan.values(k0, k1)
        dist[:, j] = np.max(np.abs(vals - plan.target_values[:, None]), axis=0)
        worst = max(worst, float(bound))
    return dist, worst


@dataclass(frozen=True)
class DensityEstimate:
    """Hit count over ``k = 0..N`` and, optionally, the per-slot distance table."""

    hits: int
    total: int
    epsilon: float
    per_k_distances: Optional[np.ndarray] = field(default=None, repr=False, compare=False)
    error_bound: float = 0.0

    def __post_init__(self):
        if not 0 <= self.hits <= self.total:
            raise InvariantError("hits must lie between 0 and total")

    @property
    def density(self):
        return self.hits / self.total if self.total else 0.0

    def _table(self):
        if self.per_k_distances is None:
            raise DomainError("no per-k table was stored for this run")
        return self.per_k_distances

    def hit_flags(self, epsilon=None):
        eps = self.epsilon if epsilon is None else epsilon
        return np.all(self._table() < eps, axis=1)

    def recount(self, epsilon):
        """The estimate at another threshold, from the stored table."""
        table = self._table()
        return DensityEstimate(int(np.sum(self.hit_flags(epsilon))), self.total, epsilon, table, self.error_bound)

    def prefix(self, n_last):
        """The estimate restricted to ``k <= n_last``."""
        table = self._table()[: n_last + 1]
        hits = int(np.sum(np.all(table < self.epsilon, axis=1)))
        return DensityEstimate(hits, len(table), self.epsilon, table, self.error_bound)

    def marginal_hits(self):
        return [int(n) for n in np.sum(self._table() < self.epsilon, axis=0)]

    def to_json(self):
        doc = {
            "hits": self.hits,
            "total": self.total,
            "density": self.density,
            "epsilon": self.epsilon,
            "error_bound": self.error_bound,
        }
        if self.per_k_distances is not None:
            doc["marginal_hits"] = self.marginal_hits()
            doc["min_distance"] = [float(x) for x in self.per_k_distances.min(axis=0)]
        return doc

    def write_per_k_csv(self, path):
        """``k``, one distance column per slot, and the hit flag; 17 significant digits."""
        table = self._table()
        flags = self.hit_flags()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k"] + [f"dist_{j}" for j in range(table.shape[1])] + ["hit"])
            for k, (row, hit) in enumerate(zip(table.tolist(), flags.tolist())):
                w.writerow([k] + [f"{d:.17g}" for d in row] + [int(hit)])


@dataclass(frozen=True)
class ShiftExperiment:
    """Everything that defines one scan.

    With ``smoothing`` set, every slot is replaced by its smoothed
    approximant; Euler-product members without an analytic continuation
    can only be scanned this way.
    """

    phi_member: object
    zeta_specs: Tuple[object, ...]
    targets: Tuple[TargetSpec, ...]
    epsilon: float
    lattice: ShiftLattice
    smoothing: Optional[SmoothingParams] = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "zeta_specs", tuple(self.zeta_specs))
        object.__setattr__(self, "targets", tuple(self.targets))
        r = len(self.zeta_specs)
        if len(self.targets) != 1 + r:
            raise InvariantError(f"need {1 + r} targets, got {len(self.targets)}")
        if self.lattice.r != r:
            raise InvariantError(f"lattice has {self.lattice.r} h2 values for {r} Hurwitz slots")
        if not self.epsilon >= 0:
            raise InvariantError("epsilon must be non-negative")
        if self.workers < 1:
            raise InvariantError("workers must be >= 1")
        K1 = self.targets[0].set
        if not K1.inside_strip(self.phi_member.sigma_star, 1):
            raise InvariantError(f"K1 must lie in {self.phi_member.sigma_star} < Re s < 1")
        for t in self.targets[1:]:
            if not t.set.inside_strip(0.5, 1):
                raise InvariantError("each K2 must lie in 1/2 < Re s < 1")
        if self.phi_member.form is None and self.smoothing is None:
            raise InvariantError(f"{self.phi_member.name} has no continuation; enable smoothing to scan it")

    def built_targets(self):
        out = [build_target(self.targets[0], "phi", self.phi_member)]
        out += [build_target(t, "zeta", z) for t, z in zip(self.targets[1:], self.zeta_specs)]
        return out

    def plans(self):
        targets = self.built_targets()
        lat = self.lattice
        members = [self.phi_member, *self.zeta_specs]
        hs = [lat.h1, *lat.h2]
        out = []
        for j, (tgt, member, h) in enumerate(zip(targets, members, hs)):
            if self.smoothing is None:
                out.append(_SlotPlan(tgt.nodes, tgt.values, h, form=member.form))
                continue
            sig = float(np.min(tgt.nodes.real))
            if j == 0:
                cutoff = _auto_cutoff(self.smoothing, sig, member.coeff_bound, 0.0)
                coeffs, bases = phi_n_terms(member, self.smoothing, cutoff)
            else:
                bound = max(abs(c) for c in member.seq.coeffs)
                cutoff = _auto_cutoff(self.smoothing, sig, bound, member.alpha)
                coeffs, bases = zeta_n_terms(member, self.smoothing, cutoff)
            out.append(_SlotPlan(tgt.nodes, tgt.values, h, coeffs=coeffs, bases=bases))
        return out


def _chunks(N, chunk):
    return [(k0, min(k0 + chunk, N + 1)) for k0 in range(0, N + 1, chunk)]


def scan(exp, store_table=True, chunk=SCAN_CHUNK):
    """Count the shifts ``k <= N`` that approximate every target within ``epsilon``.

    Distances are computed in chunks of ``k`` whose boundaries are fixed,
    so results do not depend on ``exp.workers``.  An evaluation error
    aborts the scan; the exception gains a ``k`` attribute holding the
    first shift of the failing chunk.
    """
    if chunk % 64:
        raise DomainError("chunk size must be a multiple of 64")
    plans = exp.plans()
    N = exp.lattice.N
    table = np.empty((N + 1, len(plans)))
    worst = 0.0
    chunks = _chunks(N, chunk)

    def store(k0, k1, result):
        nonlocal worst
        dist, bound = result
        table[k0:k1] = dist
        worst = max(worst, bound)

    if exp.workers == 1:
        for k0, k1 in chunks:
            try:
                store(k0, k1, _chunk_distances(plans, k0, k1))
            except ZetaLabError as err:
                err.k = k0
                raise
    else:
        with concurrent.futures.ProcessPoolExecutor(exp.workers) as pool:
            futures = [pool.submit(_chunk_distances, plans, k0, k1) for k0, k1 in chunks]
            for (k0, k1), fut in zip(chunks, futures):
                try:
                    store(k0, k1, fut.result())
                except ZetaLabError as err:
                    err.k = k0
                    raise
    hits = int(np.sum(np.all(table < exp.epsilon, axis=1)))
    return DensityEstimate(hits, N + 1, exp.epsilon, table if store_table else None, worst)


def density_vs_epsilon(exp, epsilons, estimate=None):
    """Densities for ascending thresholds, recounted from one scan's distance table."""
    eps = [float(e) for e in epsilons]
    if any(b < a for a, b in zip(eps, eps[1:])):
        raise DomainError("epsilons must be sorted ascending")
    if estimate is None:
        estimate = scan(exp, store_table=True)
    return [(e, estimate.recount(e).density) for e in eps]


def experiment_from_json(doc):
    """Build a :class:`ShiftExperiment` from a configuration document."""
    from .special_functions import PeriodicHurwitzSpec, member_from_json

    return ShiftExperiment(
        phi_member=member_from_json(doc["phi"]),
        zeta_specs=tuple(PeriodicHurwitzSpec.from_json(z) for z in doc.get("zetas", [])),
        targets=tuple(TargetSpec.from_json(t) for t in doc["targets"]),
        epsilon=float(doc["epsilon"]),
        lattice=ShiftLattice.from_json(doc["lattice"]),
        smoothing=SmoothingParams.from_json(doc.get("smoothing")),
        workers=int(doc.get("workers", 1)),
    )
