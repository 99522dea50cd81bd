"""Finite materializations of the torus, its Haar measure and the random Dirichlet series.

A :class:`TorusPoint` stores unit phases ``omega1(p)`` for primes
``p <= prime_bound`` and, for each of ``r`` components, ``omega2_j(m)`` for
``0 <= m <= m_bound``.  Phases are kept as unit complex numbers, not
angles.  Sampling uses numpy's counter-based Philox generator so a seed
reproduces the same point everywhere.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .arith import factorize, primes_up_to
from .errors import DomainError, OutOfMaterializedRange
from .smoothing import default_cutoff, phi_n_terms, weight_v1, weight_v2, weighted_sum, zeta_n_terms

RNG_NAME = "numpy.random.Philox"
DEFAULT_PRIME_BOUND = 10**4
DEFAULT_M_BOUND = 10**5


def make_rng(seed):
    """The package's reproducible generator: Philox keyed by a 64-bit seed."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise DomainError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(seed))


def _uniform_phases(rng, size):
    # Arguments uniform on (-pi, pi].
    theta = math.pi - 2 * math.pi * rng.random(size)
    return np.exp(1j * theta)


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TorusPoint:
    """One element ``(omega1, omega2_1, ..., omega2_r)`` of the torus, truncated."""

    omega1: np.ndarray
    omega2: tuple
    prime_bound: int
    m_bound: int
    seed: Optional[int] = None
    rng: Optional[str] = None
    primes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        primes = primes_up_to(self.prime_bound)
        omega1 = _frozen(self.omega1)
        if omega1.shape != primes.shape:
            raise DomainError(f"expected {len(primes)} prime phases, got {omega1.shape}")
        omega2 = tuple(_frozen(w) for w in self.omega2)
        for w in omega2:
            if w.shape != (self.m_bound + 1,):
                raise DomainError("each omega2 component needs m_bound + 1 phases")
        for arr in (omega1, *omega2):
            if arr.size and np.max(np.abs(np.abs(arr) - 1)) > 1e-12:
                raise DomainError("torus phases must have unit modulus")
        object.__setattr__(self, "omega1", omega1)
        object.__setattr__(self, "omega2", omega2)
        object.__setattr__(self, "primes", primes)

    @property
    def r(self):
        return len(self.omega2)

    def prime_phase(self, p):
        i = np.searchsorted(self.primes, p)
        if i >= len(self.primes) or self.primes[i] != p:
            raise OutOfMaterializedRange(f"prime {p} exceeds prime_bound {self.prime_bound}")
        return complex(self.omega1[i])

    def multiplicative_phases(self, cutoff):
        """``omega1(m)`` for ``m = 1..cutoff`` (array index ``m - 1``)."""
        if cutoff > self.prime_bound:
            raise OutOfMaterializedRange(
                f"cutoff {cutoff} may involve primes beyond prime_bound {self.prime_bound}"
            )
        return multiplicative_extension(self.omega1[None, :], self.primes, cutoff)[0]

    def component(self, j, cutoff):
        if not 0 <= j < self.r:
            raise DomainError(f"component {j} out of range for r = {self.r}")
        if cutoff > self.m_bound:
            raise OutOfMaterializedRange(f"m = {cutoff} exceeds m_bound {self.m_bound}")
        return self.omega2[j][: cutoff + 1]

    def to_json(self):
        return {
            "prime_bound": self.prime_bound,
            "m_bound": self.m_bound,
            "seed": self.seed,
            "rng": self.rng,
            "omega1": [[z.real, z.imag] for z in self.omega1.tolist()],
            "omega2": [[[z.real, z.imag] for z in w.tolist()] for w in self.omega2],
        }

    @classmethod
    def from_json(cls, doc):
        def arr(pairs):
            a = np.array(pairs, dtype=float).reshape(-1, 2)
            return a[:, 0] + 1j * a[:, 1]

        return cls(
            omega1=arr(doc["omega1"]),
            omega2=tuple(arr(w) for w in doc["omega2"]),
            prime_bound=int(doc["prime_bound"]),
            m_bound=int(doc["m_bound"]),
            seed=doc.get("seed"),
            rng=doc.get("rng"),
        )


def multiplicative_extension(prime_phases, primes, cutoff):
    """Completely multiplicative extension of batched prime phases.

    ``prime_phases`` has shape ``(S, len(primes))``; the result has shape
    ``(S, cutoff)`` with column ``m - 1`` holding ``prod_p omega(p)**g_p``.
    Each entry takes at most ``log2(cutoff)`` factors, far below the
    renormalization interval of 2**10 multiplications, so no
    renormalization pass is needed.
    """
    S = prime_phases.shape[0]
    out = np.ones((S, cutoff + 1), dtype=complex)
    for i, p in enumerate(primes.tolist()):
        if p > cutoff:
            break
        w = prime_phases[:, i : i + 1]
        pk = p
        while pk <= cutoff:
            out[:, pk::pk] *= w
            pk *= p
    return out[:, 1:]


def identity_point(prime_bound=DEFAULT_PRIME_BOUND, m_bound=DEFAULT_M_BOUND, r=1):
    n = len(primes_up_to(prime_bound))
    return TorusPoint(
        np.ones(n, dtype=complex), tuple(np.ones(m_bound + 1, dtype=complex) for _ in range(r)), prime_bound, m_bound
    )


def sample_haar(seed, prime_bound=DEFAULT_PRIME_BOUND, m_bound=DEFAULT_M_BOUND, r=1):
    """Draw a Haar-random torus point; deterministic in ``seed``.

    Draw order: prime phases in increasing ``p``, then each ``omega2``
    component in increasing ``m``.
    """
    if prime_bound < 1 or m_bound < 1 or r < 0:
        raise DomainError("bounds must be >= 1")
    rng = make_rng(seed)
    n = len(primes_up_to(prime_bound))
    omega1 = _uniform_phases(rng, n)
    omega2 = tuple(_uniform_phases(rng, m_bound + 1) for _ in range(r))
    return TorusPoint(omega1, omega2, prime_bound, m_bound, seed=int(seed), rng=RNG_NAME)


def extend_multiplicative(point, m):
    """``omega1(m) = prod_p omega1(p)**g_p`` for a single positive integer ``m``."""
    m = int(m)
    if m < 1:
        raise DomainError("m must be a positive integer")
    value = 1 + 0j
    for p, g in factorize(m).items():
        value *= point.prime_phase(p) ** g
    return value


def random_phi(spec, s, point, params=None, cutoff=None):
    """``sum_{m <= cutoff} c_m omega1(m) [v1(m, n)] m**(-s)`` at the torus point.

    Unsmoothed (``params=None``) the cutoff defaults to ``point.prime_bound``;
    smoothed it defaults to the smoothing rule.
    """
    if cutoff is None:
        cutoff = point.prime_bound if params is None else default_cutoff(params)
    phases = point.multiplicative_phases(cutoff)
    if params is None:
        coeffs, bases = spec.coefficients(cutoff), np.arange(1, cutoff + 1)
    else:
        coeffs, bases = phi_n_terms(spec, params, cutoff)
    return weighted_sum(coeffs * phases, bases, s)


def random_zeta(spec, j, s, point, params=None, cutoff=None):
    """``sum_{m=0}^{cutoff} b_m omega2_j(m) [v2(m, n, alpha)] (m + alpha)**(-s)``."""
    if cutoff is None:
        cutoff = point.m_bound if params is None else default_cutoff(params, spec.alpha)
    phases = point.component(j, cutoff)
    if params is None:
        m = np.arange(cutoff + 1)
        coeffs, bases = spec.seq.values(m), m + spec.alpha
    else:
        coeffs, bases = zeta_n_terms(spec, params, cutoff)
    return weighted_sum(coeffs * phases, bases, s)


@dataclass(frozen=True)
class ErgodicShift:
    """The torus translation by ``((p**(-i h1)), ((m + alpha_j)**(-i h2_j)))``."""

    h1: float
    alphas: tuple
    h2: tuple

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        h2 = tuple(float(h) for h in self.h2)
        if not self.h1 > 0 or not all(h > 0 for h in h2):
            raise DomainError("common differences must be positive")
        if len(alphas) != len(h2) or not alphas:
            raise DomainError("need r >= 1 matching alphas and h2")
        if not all(0 < a < 1 for a in alphas):
            raise DomainError("alphas must lie in (0, 1)")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "h2", h2)

    @property
    def r(self):
        return len(self.alphas)

    @classmethod
    def from_json(cls, doc):
        return cls(float(doc["h1"]), tuple(doc["alphas"]), tuple(doc["h2"]))

    def to_json(self):
        return {"h1": self.h1, "alphas": list(self.alphas), "h2": list(self.h2)}


def ergodic_orbit(shift, k, prime_bound=DEFAULT_PRIME_BOUND, m_bound=DEFAULT_M_BOUND):
    """The point reached from the identity after ``k`` applications of ``shift``."""
    if k < 0:
        raise DomainError("k must be non-negative")
    primes = primes_up_to(prime_bound)
    omega1 = np.exp(-1j * (k * shift.h1) * np.log(primes))
    m = np.arange(m_bound + 1)
    omega2 = tuple(np.exp(-1j * (k * h) * np.log(m + a)) for a, h in zip(shift.alphas, shift.h2))
    return TorusPoint(omega1, omega2, prime_bound, m_bound)


# --------------------------------------------------------------------------
# Batched Monte-Carlo sampling
# --------------------------------------------------------------------------

MC_CHUNK = 512


def _chunks(n_samples, chunk):
    for c, start in enumerate(range(0, n_samples, chunk)):
        yield c, min(chunk, n_samples - start)


def _weights_phi(spec, params, cutoff):
    m = np.arange(1, cutoff + 1)
    c = spec.coefficients(cutoff)
    return c if params is None else c * weight_v1(m, params)


def haar_samples_phi(spec, s_points, n_samples, seed, params=None, cutoff=1000, chunk=MC_CHUNK):
    """Random-model values ``phi(s, omega1)`` for ``n_samples`` independent Haar draws.

    Chunk ``c`` draws from ``make_rng(seed + c)``, so the output does not
    depend on how chunks are distributed.  Returns shape ``(n_samples, len(s_points))``.
    """
    s_points = np.atleast_1d(np.asarray(s_points, dtype=complex))
    primes = primes_up_to(cutoff)
    base = _weights_phi(spec, params, cutoff)
    powers = np.exp(-np.log(np.arange(1, cutoff + 1))[:, None] * s_points[None, :])
    coeff_by_point = base[:, None] * powers
    out = np.empty((n_samples, len(s_points)), dtype=complex)
    row = 0
    for c, size in _chunks(n_samples, chunk):
        rng = make_rng(seed + c)
        phases = _uniform_phases(rng, (size, len(primes)))
        ext = multiplicative_extension(phases, primes, cutoff)
        out[row : row + size] = ext @ coeff_by_point
        row += size
    return out


def haar_samples_zeta(spec, s_points, n_samples, seed, params=None, cutoff=1000, chunk=MC_CHUNK):
    """Random-model values ``zeta(s, alpha, omega2; B)`` for independent Haar draws."""
    s_points = np.atleast_1d(np.asarray(s_points, dtype=complex))
    m = np.arange(cutoff + 1)
    base = spec.seq.values(m)
    if params is not None:
        base = base * weight_v2(m, spec.alpha, params)
    powers = np.exp(-np.log(m + spec.alpha)[:, None] * s_points[None, :])
    coeff_by_point = base[:, None] * powers
    out = np.empty((n_samples, len(s_points)), dtype=complex)
    row = 0
    for c, size in _chunks(n_samples, chunk):
        rng = make_rng(seed + c)
        phases = _uniform_phases(rng, (size, cutoff + 1))
        out[row : row + size] = phases @ coeff_by_point
        row += size
    return out
