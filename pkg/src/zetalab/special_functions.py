"""Hurwitz, periodic and periodic Hurwitz zeta-functions, and Euler-product members.

Every evaluator reduces to finite combinations

    F(s) = q**(-s) * sum_r w_r * zeta(s, a_r),     0 < a_r <= 1,

of classical Hurwitz zeta values, which are computed by Euler-Maclaurin
summation with an explicit remainder bound.  Functions accept a Python
complex number or an array of them and return the same shape.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _lattice
from .arith import divisors, factorize, primes_up_to
from .errors import ConvergenceError, DomainError, PoleError, UnsupportedRegion

EPS = np.finfo(float).eps

DEFAULT_EXTRA_TERMS = 20
DEFAULT_ORDER = 20


def as_points(s):
    """Coerce ``s`` to a complex ndarray, rejecting NaN and infinities."""
    arr = np.asarray(s, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError("evaluation points must be finite")
    return arr


def _restore(result, s):
    return complex(result) if np.ndim(s) == 0 else result


@dataclass(frozen=True)
class StripRegion:
    """Open rectangle ``sigma_min < Re s < sigma_max``, ``t_min < Im s < t_max``."""

    sigma_min: float
    sigma_max: float
    t_min: float = -math.inf
    t_max: float = math.inf

    def __post_init__(self):
        if not self.sigma_min < self.sigma_max:
            raise DomainError("sigma_min must be < sigma_max")
        if not self.t_min < self.t_max:
            raise DomainError("t_min must be < t_max")

    def contains(self, s, margin=0.0):
        s = np.asarray(s, dtype=complex)
        return bool(
            np.all(
                (s.real > self.sigma_min + margin)
                & (s.real < self.sigma_max - margin)
                & (s.imag > self.t_min + margin)
                & (s.imag < self.t_max - margin)
            )
        )


# --------------------------------------------------------------------------
# Periodic coefficient sequences
# --------------------------------------------------------------------------


def _parse_complex(value):
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise DomainError(f"complex entries are [re, im] pairs, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


@dataclass(frozen=True)
class PeriodicSequence:
    """One period of a periodic sequence, indexed by residue ``m mod period``.

    ``coeffs[r]`` is the value at every ``m`` congruent to ``r``.  The
    period must be minimal; non-minimal inputs are rejected.
    """

    coeffs: tuple
    period: int = None
    mean: complex = field(init=False)

    def __post_init__(self):
        coeffs = tuple(_parse_complex(c) for c in self.coeffs)
        if not coeffs:
            raise DomainError("a periodic sequence needs at least one coefficient")
        if not all(np.isfinite(c) for c in coeffs):
            raise DomainError("coefficients must be finite")
        period = len(coeffs) if self.period is None else int(self.period)
        if period != len(coeffs):
            raise DomainError(f"period {period} does not match {len(coeffs)} coefficients")
        for d in divisors(period)[:-1]:
            if all(coeffs[r] == coeffs[r % d] for r in range(period)):
                raise DomainError(f"period {period} is not minimal: {d} is also a period")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "mean", sum(coeffs) / period)

    def __getitem__(self, m):
        return self.coeffs[m % self.period]

    def values(self, m):
        """Vectorized lookup of the sequence at integer array ``m``."""
        table = np.array(self.coeffs, dtype=complex)
        return table[np.asarray(m) % self.period]

    @classmethod
    def from_json(cls, doc):
        return cls(tuple(doc["coeffs"]), doc.get("period"))

    def to_json(self):
        return {"coeffs": [[c.real, c.imag] for c in self.coeffs], "period": self.period}


@dataclass(frozen=True)
class PeriodicHurwitzSpec:
    """``sum_{m >= 0} b_m (m + alpha)**(-s)`` with periodic ``b``."""

    seq: PeriodicSequence
    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")

    @classmethod
    def from_json(cls, doc):
        return cls(PeriodicSequence.from_json(doc), float(doc["alpha"]))

    def to_json(self):
        return {**self.seq.to_json(), "alpha": self.alpha}

    @property
    def form(self):
        l = self.seq.period
        return HurwitzCombination(l, self.seq.coeffs, [(r + self.alpha) / l for r in range(l)])


# --------------------------------------------------------------------------
# Hurwitz zeta and finite combinations
# --------------------------------------------------------------------------


def _direct_and_tail(s, a, terms, order):
    n = np.arange(terms)
    logs = np.log(n + a)
    flat = s.reshape(-1)
    direct = np.exp(-flat[:, None] * logs[None, :]).sum(axis=1).reshape(s.shape)
    magnitude = np.exp(-flat.real[:, None] * logs[None, :]).sum(axis=1).reshape(s.shape)
    pole_part, rest, bound = _lattice.em_tail(s, terms + a, order)
    return direct, pole_part, rest, bound, magnitude


def _default_terms(s):
    return int(math.ceil(float(np.max(np.abs(s), initial=0.0)))) + DEFAULT_EXTRA_TERMS


def hurwitz_zeta_with_error(s, alpha, *, terms=None, order=DEFAULT_ORDER):
    """Hurwitz zeta ``zeta(s, alpha)`` and a bound on its absolute error.

    Parameters
    ----------
    s : complex or array_like
        Evaluation point(s), ``s != 1``.
    alpha : float
        Shift parameter in ``(0, 1]``.
    terms : int, optional
        Euler-Maclaurin truncation point; defaults to ``ceil(max|s|) + 20``.
    order : int
        Number of Bernoulli correction terms.

    Returns
    -------
    value, bound
        The bound covers the Euler-Maclaurin remainder plus a rounding
        allowance proportional to the summed magnitudes.
    """
    s_arr = as_points(s)
    if not 0 < alpha <= 1:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if np.any(s_arr == 1):
        raise PoleError("Hurwitz zeta has a pole at s = 1")
    if np.any(s_arr.real + 2 * order - 1 <= 0):
        raise DomainError("Euler-Maclaurin order too small for this Re(s)")
    terms = _default_terms(s_arr) if terms is None else int(terms)
    direct, pole_part, rest, bound, magnitude = _direct_and_tail(s_arr, alpha, terms, order)
    value = direct + pole_part + rest
    err = bound + 8 * EPS * (magnitude + np.abs(pole_part) + np.abs(rest))
    if np.ndim(s) == 0:
        return complex(value), float(err)
    return value, err


def hurwitz_zeta(s, alpha, **kwargs):
    """Classical Hurwitz zeta-function ``sum_{n >= 0} (n + alpha)**(-s)`` continued."""
    return hurwitz_zeta_with_error(s, alpha, **kwargs)[0]


@dataclass(frozen=True)
class HurwitzCombination:
    """``scale**(-s) * sum_r weights[r] * zeta(s, shifts[r])``."""

    scale: int
    weights: tuple
    shifts: tuple

    def __post_init__(self):
        w = tuple(complex(x) for x in self.weights)
        a = tuple(float(x) for x in self.shifts)
        keep = [(x, y) for x, y in zip(w, a) if x != 0]
        object.__setattr__(self, "weights", tuple(x for x, _ in keep))
        object.__setattr__(self, "shifts", tuple(y for _, y in keep))

    @property
    def residue_weight(self):
        return sum(self.weights)

    @property
    def has_pole(self):
        w = np.abs(np.array(self.weights, dtype=complex))
        return abs(self.residue_weight) > 1e-12 * max(w.sum(), 1e-300)

    def evaluate(self, s, *, terms=None, order=DEFAULT_ORDER):
        """Return ``(value, bound)`` at ``s`` (scalar or array)."""
        s_arr = as_points(s)
        if self.has_pole and np.any(s_arr == 1):
            raise PoleError("pole at s = 1 (nonzero residue)")
        terms = _default_terms(s_arr) if terms is None else int(terms)
        value = np.zeros(s_arr.shape, dtype=complex)
        pole = np.zeros(s_arr.shape, dtype=complex)
        err = np.zeros(s_arr.shape)
        for w, a in zip(self.weights, self.shifts):
            direct, pp, rest, bound, magnitude = _direct_and_tail(s_arr, a, terms, order)
            value += w * (direct + rest)
            pole += w * pp
            err += abs(w) * (bound + 8 * EPS * (magnitude + np.abs(rest)))
        at_one = s_arr == 1
        if np.any(at_one):
            pole[at_one] = -sum(w * math.log(terms + a) for w, a in zip(self.weights, self.shifts))
        err += 8 * EPS * np.abs(pole)
        value += pole
        if self.scale != 1:
            factor = np.exp(-s_arr * math.log(self.scale))
            value *= factor
            err *= np.abs(factor)
        if np.ndim(s) == 0:
            return complex(value), float(err)
        return value, err

    def __call__(self, s, **kwargs):
        return _restore(self.evaluate(s, **kwargs)[0], s)

    def on_lattice(self, nodes, h, k_start, k_stop, **kwargs):
        """Values at ``node + i*k*h`` for ``k_start <= k < k_stop``; see ``_lattice``."""
        return _lattice.hurwitz_combination_lattice(
            nodes, self.scale, self.weights, self.shifts, h, k_start, k_stop, **kwargs
        )


def periodic_hurwitz_zeta(spec, s, **kwargs):
    """``zeta(s, alpha; B) = l**(-s) * sum_{r<l} b_r * zeta(s, (r + alpha)/l)``.

    Entire when the mean of ``B`` vanishes; otherwise ``s = 1`` raises
    :class:`PoleError`.
    """
    return _restore(spec.form.evaluate(s, **kwargs)[0], s)


def periodic_zeta_form(seq):
    k = seq.period
    return HurwitzCombination(k, [seq[r] for r in range(1, k + 1)], [r / k for r in range(1, k + 1)])


def periodic_zeta(seq, s, **kwargs):
    """``zeta(s; A) = sum_{m >= 1} a_m m**(-s)`` via ``k**(-s) sum_{r=1}^{k} a_r zeta(s, r/k)``."""
    return _restore(periodic_zeta_form(seq).evaluate(s, **kwargs)[0], s)


# --------------------------------------------------------------------------
# Euler-product members
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SteudingFunctionSpec:
    """An Euler-product zeta-function ``sum a(m) m**(-s) = prod_p prod_j (1 - a_j(p) p**(-s))**(-1)``.

    ``dirichlet_coeff`` maps an integer array ``m`` to ``a(m)``;
    ``local_coeff`` maps a prime to the ``degree`` local roots ``a_j(p)``.
    ``form`` (when known) gives the continuation as a Hurwitz combination;
    without it, the member can only be evaluated for ``Re s > 1``.
    ``coeff_bound`` bounds ``|a(m)|`` and every ``|a_j(p)|`` and feeds the
    tail certificates.  ``metadata`` carries unverified growth constants.
    """

    name: str
    dirichlet_coeff: Callable
    local_coeff: Callable
    sigma_phi: float = 1.0
    sigma_star: float = 0.5
    kappa: float = 1.0
    poles: tuple = ()
    form: Optional[HurwitzCombination] = None
    coeff_bound: float = 1.0
    metadata: dict = field(default_factory=dict)
    check_euler: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if not 0.5 <= self.sigma_star < 1:
            raise DomainError("sigma_star must satisfy 1/2 <= sigma_star < 1")
        if not self.kappa > 0:
            raise DomainError("kappa must be positive")
        object.__setattr__(self, "poles", tuple(complex(p) for p in self.poles))
        if self.check_euler:
            verify_euler_product(self)

    @property
    def degree(self):
        return len(np.atleast_1d(self.local_coeff(2)))

    def coefficients(self, cutoff):
        """``a(1), ..., a(cutoff)`` as a complex array."""
        return np.asarray(self.dirichlet_coeff(np.arange(1, cutoff + 1)), dtype=complex)


def euler_product(spec, s, prime_bound):
    """Truncated Euler product over ``p <= prime_bound`` and its relative tail bound.

    Requires ``Re s > 1``.  Returns ``(value, abs_bound)``.
    """
    s = complex(s)
    if s.real <= 1:
        raise UnsupportedRegion("the Euler product converges only for Re s > 1")
    primes = primes_up_to(prime_bound)
    log_value = 0j
    for p in primes.tolist():
        for a in np.atleast_1d(spec.local_coeff(p)):
            log_value -= np.log1p(-a * p ** (-s))
    value = complex(np.exp(log_value))
    P = float(prime_bound)
    C = spec.coeff_bound
    x = C * P ** (-s.real)
    if x >= 1:
        return value, math.inf
    tail_log = spec.degree * C / (1 - x) * P ** (1 - s.real) / (s.real - 1)
    return value, abs(value) * math.expm1(tail_log)


def dirichlet_series(spec, s, cutoff):
    """Truncated ``sum_{m <= cutoff} a(m) m**(-s)`` and the bound ``C cutoff**(1-σ)/(σ-1)``."""
    s_arr = as_points(s)
    m = np.arange(1, cutoff + 1)
    c = spec.coefficients(cutoff)
    flat = s_arr.reshape(-1)
    # Pairwise summation from the small end avoids the bias of adding
    # sub-ulp terms to a large running total.
    terms = c[::-1] * np.exp(-flat[:, None] * np.log(m[::-1])[None, :])
    vals = terms.sum(axis=1).reshape(s_arr.shape)
    sig = s_arr.real
    with np.errstate(divide="ignore"):
        tail = np.where(sig > 1, spec.coeff_bound * cutoff ** (1 - sig) / (sig - 1), np.inf)
    return _restore(vals, s), (float(tail) if np.ndim(s) == 0 else tail)


def verify_euler_product(spec, sigma=2.0, prime_bound=1000, cutoff=20000):
    """Check that the local factors and Dirichlet coefficients describe one function."""
    ep, ep_bound = euler_product(spec, sigma, prime_bound)
    ds, ds_bound = dirichlet_series(spec, sigma, cutoff)
    gap = abs(ep - ds)
    tol = ep_bound + ds_bound + 1e-9
    if gap > tol:
        raise DomainError(
            f"{spec.name}: Euler product and Dirichlet series disagree at s={sigma} "
            f"(gap {gap:.3g} > {tol:.3g})"
        )
    return gap


MAX_DIRECT_CUTOFF = 10**7


def steuding_eval(spec, s, **kwargs):
    """Evaluate an Euler-product member at ``s``.

    Uses the member's continuation when it has one; otherwise the
    Dirichlet series, truncated where its tail drops below ``1e-10``,
    which needs ``Re s > 1``.
    """
    s_arr = as_points(s)
    if np.any(s_arr.real <= spec.sigma_phi):
        raise UnsupportedRegion(f"{spec.name} is not continued to Re s <= {spec.sigma_phi}")
    for pole in spec.poles:
        if np.any(s_arr == pole):
            raise PoleError(f"{spec.name} has a pole at {pole}")
    if spec.form is not None:
        return _restore(spec.form.evaluate(s_arr, **kwargs)[0], s)
    sig = float(np.min(s_arr.real))
    if sig <= 1:
        raise UnsupportedRegion(f"{spec.name} has no continuation; need Re s > 1")
    cutoff = math.ceil((spec.coeff_bound / ((sig - 1) * 1e-10)) ** (1 / (sig - 1)))
    if cutoff > MAX_DIRECT_CUTOFF:
        raise ConvergenceError(f"Dirichlet series needs {cutoff} terms at Re s = {sig}")
    return dirichlet_series(spec, s, cutoff)[0]


def prime_mean_square(spec, x):
    """Average of ``|a(p)|**2`` over primes ``p <= x``."""
    if x < 2:
        raise DomainError("x must be at least 2")
    primes = primes_up_to(x)
    a = np.asarray(spec.dirichlet_coeff(primes), dtype=complex)
    return float(np.sum(np.abs(a) ** 2) / len(primes))


# --------------------------------------------------------------------------
# Shipped members: Riemann zeta and Dirichlet L-functions
# --------------------------------------------------------------------------


def riemann():
    """The Riemann zeta-function as an Euler-product member."""
    return SteudingFunctionSpec(
        name="riemann",
        dirichlet_coeff=lambda m: np.ones(np.shape(m), dtype=complex),
        local_coeff=lambda p: np.ones(1, dtype=complex),
        sigma_phi=-math.inf,
        sigma_star=0.5,
        kappa=1.0,
        poles=(1.0,),
        form=HurwitzCombination(1, (1.0,), (1.0,)),
        check_euler=False,
    )


def _primitive_root(p):
    phi = p - 1
    factors = list(factorize(phi))
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in factors):
            return g
    return 1


def _unit_group_generators(q):
    gens = []
    for p, e in factorize(q).items():
        pe = p**e
        rest = q // pe
        if p == 2:
            local = [] if e == 1 else [(pe - 1, 2)]
            if e >= 3:
                local.append((5, 2 ** (e - 2)))
        else:
            g = _primitive_root(p)
            if e > 1 and pow(g, p - 1, p * p) == 1:
                g += p
            local = [(g, (p - 1) * p ** (e - 1))]
        for g, order in local:
            # x = g mod p**e, x = 1 mod rest
            x = g if rest == 1 else (g * rest * pow(rest, -1, pe) + pe * pow(pe, -1, rest)) % q
            gens.append((x, order))
    return gens


_SNAP = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])


def _snap(z):
    def fix(x):
        i = np.argmin(np.abs(_SNAP - x))
        return _SNAP[i] if abs(_SNAP[i] - x) < 1e-14 else x

    return complex(fix(z.real), fix(z.imag))


def dirichlet_characters(q):
    """All Dirichlet characters mod ``q`` as value tables ``chi[0..q-1]``.

    Ordered by exponent vectors over a fixed generating set of the unit
    group; index 0 is the principal character.
    """
    q = int(q)
    if q < 1:
        raise DomainError("modulus must be positive")
    if q == 1:
        return [np.ones(1, dtype=complex)]
    gens = _unit_group_generators(q)
    orders = [o for _, o in gens]
    logs = {}
    for expo in itertools.product(*[range(o) for o in orders]):
        u = 1
        for (g, _), e in zip(gens, expo):
            u = u * pow(g, e, q) % q
        logs[u] = expo
    chars = []
    for c in itertools.product(*[range(o) for o in orders]):
        table = np.zeros(q, dtype=complex)
        for u, expo in logs.items():
            phase = sum(ci * ei / o for ci, ei, o in zip(c, expo, orders))
            table[u] = _snap(np.exp(2j * np.pi * phase))
        chars.append(table)
    return chars


def is_primitive(chi):
    q = len(chi)
    for d in divisors(q)[:-1]:
        if all(
            abs(chi[u] - 1) < 1e-12 for u in range(1, q) if math.gcd(u, q) == 1 and u % d == 1 % d
        ):
            return False
    return True


def dirichlet_l(modulus, index):
    """Dirichlet L-function of the ``index``-th character mod ``modulus`` (must be primitive)."""
    if modulus == 1:
        return riemann()
    chars = dirichlet_characters(modulus)
    if not 0 <= index < len(chars):
        raise DomainError(f"modulus {modulus} has {len(chars)} characters, index {index} invalid")
    chi = chars[index]
    if not is_primitive(chi):
        raise DomainError(f"character {index} mod {modulus} is not primitive")
    chi.setflags(write=False)
    q = modulus
    return SteudingFunctionSpec(
        name=f"dirichlet[{q},{index}]",
        dirichlet_coeff=lambda m: chi[np.asarray(m) % q],
        local_coeff=lambda p: np.array([chi[p % q]]),
        sigma_phi=-math.inf,
        sigma_star=0.5,
        kappa=1.0,
        poles=(),
        form=HurwitzCombination(q, [chi[r % q] for r in range(1, q + 1)], [r / q for r in range(1, q + 1)]),
        metadata={"modulus": q, "index": index},
    )


def member_from_json(doc):
    """Build a shipped member from ``{"member": "riemann" | {"dirichlet": {...}}}``."""
    member = doc["member"] if isinstance(doc, dict) and "member" in doc else doc
    if member == "riemann":
        return riemann()
    if isinstance(member, dict) and "dirichlet" in member:
        d = member["dirichlet"]
        return dirichlet_l(int(d["modulus"]), int(d["index"]))
    raise DomainError(f"unknown member description: {member!r}")


def member_to_json(spec):
    if spec.name == "riemann":
        return {"member": "riemann"}
    if "modulus" in spec.metadata:
        return {"member": {"dirichlet": dict(spec.metadata)}}
    raise DomainError(f"member {spec.name} has no JSON form")
