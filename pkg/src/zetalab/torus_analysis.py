"""Characters of the torus along the discrete orbit, and a search for rational relations.

A character of the torus is indexed by finitely many integers ``k_p`` (on
the prime circles) and ``l_{mj}`` (on the circles of the ``j``-th Hurwitz
component).  Along the orbit of the ergodic shift it takes the values
``exp(-i k theta)`` with

    theta = sum_p h1 k_p log p + sum_j sum_m h2_j l_{mj} log(m + alpha_j).

The frequency set used by :func:`frequency_set` contains ``pi``, following
the discrete-shift normalization; the continuous-shift version of the same
set would contain ``2 pi / h`` instead.
"""

import csv
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Tuple

import numpy as np

from .arith import primes_up_to
from .errors import DegenerateCharacter, DomainError

RELATION_TOL = 1e-9
CONFIRM_TOL = 1e-12
TWO_PI = 2 * math.pi


def _clean(support):
    out = {}
    for key, value in dict(support).items():
        v = int(value)
        if v != 0:
            out[int(key)] = v
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class CharacterIndex:
    """Integer exponents ``k_p`` and ``l_{mj}``; zero entries are dropped."""

    k_primes: Dict[int, int] = field(default_factory=dict)
    l_components: Tuple[Dict[int, int], ...] = ()

    def __post_init__(self):
        k = _clean(self.k_primes)
        primes = set(primes_up_to(max(k, default=1)).tolist())
        bad = [p for p in k if p not in primes]
        if bad:
            raise DomainError(f"k_primes keys must be primes, got {bad}")
        ls = tuple(_clean(l) for l in self.l_components)
        if any(m < 0 for l in ls for m in l):
            raise DomainError("l_components keys must be non-negative integers")
        object.__setattr__(self, "k_primes", k)
        object.__setattr__(self, "l_components", ls)

    @property
    def is_trivial(self):
        return not self.k_primes and not any(self.l_components)

    @classmethod
    def from_json(cls, doc):
        return cls(
            {int(p): v for p, v in doc.get("k_primes", {}).items()},
            tuple({int(m): v for m, v in l.items()} for l in doc.get("l_components", [])),
        )

    def to_json(self):
        return {
            "k_primes": {str(p): v for p, v in self.k_primes.items()},
            "l_components": [{str(m): v for m, v in l.items()} for l in self.l_components],
        }

    def support_label(self):
        parts = [f"p{p}:{v}" for p, v in self.k_primes.items()]
        for j, l in enumerate(self.l_components):
            parts += [f"m{m}/{j}:{v}" for m, v in l.items()]
        return " ".join(parts) or "trivial"


def _phase_terms(index, shift):
    if len(index.l_components) > shift.r:
        raise DomainError("character index has more components than the shift")
    terms = [shift.h1 * k * math.log(p) for p, k in index.k_primes.items()]
    for l, a, h in zip(index.l_components, shift.alphas, shift.h2):
        terms += [h * v * math.log(m + a) for m, v in l.items()]
    return terms


def character_phase(index, shift):
    """The orbit frequency ``theta`` of the character, correctly rounded sum."""
    return math.fsum(_phase_terms(index, shift))


def fourier_gN_direct(index, shift, N):
    """``(1/(N+1)) sum_{k=0}^{N} exp(-i k theta)`` summed term by term.

    ``theta`` is first reduced to ``[-pi, pi]`` through the argument of
    ``exp(-i theta)``, the same reduction the closed form uses, so the two
    agree to rounding even for large ``N``.
    """
    if N < 0:
        raise DomainError("N must be non-negative")
    return _orbit_average(_reduced(character_phase(index, shift)), N)


def _orbit_average(theta, N):
    k = np.arange(N + 1, dtype=float)
    # numpy's pairwise summation keeps the rounding error at O(log N) ulps.
    return complex(np.exp(-1j * theta * k).sum()) / (N + 1)


def birkhoff_character_average(index, shift, N):
    """Time average of the character along the orbit ``a^k(1)``, ``k = 0..N``.

    The character evaluated at the ``k``-th orbit point is ``exp(-i k theta)``,
    so this is the same sum as :func:`fourier_gN_direct`.
    """
    return fourier_gN_direct(index, shift, N)


def _reduced(theta):
    # Argument of exp(-i theta), mapped back; lies in [-pi, pi].
    return -float(np.angle(np.exp(-1j * theta)))


def _exp_minus_i_multiple(n, theta):
    """``exp(-i n theta)`` with ``n * theta`` reduced modulo the double ``2*pi`` exactly."""
    x = Fraction(n) * Fraction(theta)
    period = Fraction(TWO_PI)
    r = float(x - period * math.floor(x / period))
    return complex(math.cos(r), -math.sin(r))


def fourier_gN_closed(index, shift, N):
    """Closed form ``(1 - e^{-i(N+1)theta}) / ((N+1)(1 - e^{-i theta}))``.

    Returns 1 for the trivial index.  Raises :class:`DegenerateCharacter`
    for a nontrivial index whose frequency is a multiple of ``2 pi`` to
    machine precision, which means the linear independence hypothesis fails
    for the shift.
    """
    if N < 0:
        raise DomainError("N must be non-negative")
    if index.is_trivial:
        return 1 + 0j
    theta = character_phase(index, shift)
    r = _reduced(theta)
    denom = 1 - complex(math.cos(r), -math.sin(r))
    if abs(denom) < 1e-12 * (1 + abs(theta)):
        raise DegenerateCharacter(f"theta = {theta!r} is a multiple of 2*pi for {index.support_label()}")
    numer = 1 - _exp_minus_i_multiple(N + 1, r)
    return numer / ((N + 1) * denom)


def decay_envelope(theta, N):
    """``2 / ((N+1) |1 - e^{-i theta}|)``, the bound on ``|g_N|``."""
    return 2 / ((N + 1) * abs(1 - np.exp(-1j * theta)))


# --------------------------------------------------------------------------
# Frequency sets and integer relations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FrequencySet:
    """Labelled real numbers to be tested for rational linear relations."""

    entries: Tuple[Tuple[str, float], ...]

    def __post_init__(self):
        entries = tuple((str(lbl), float(v)) for lbl, v in self.entries)
        if not entries:
            raise DomainError("frequency set is empty")
        if not all(math.isfinite(v) for _, v in entries):
            raise DomainError("frequencies must be finite")
        object.__setattr__(self, "entries", entries)

    @property
    def labels(self):
        return [lbl for lbl, _ in self.entries]

    @property
    def values(self):
        return np.array([v for _, v in self.entries])

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, dict):
            doc = doc["entries"]
        return cls(tuple((e[0], e[1]) for e in doc))

    def to_json(self):
        return {"entries": [[lbl, v] for lbl, v in self.entries]}


def frequency_set(shift, prime_bound, m_bound, include_pi=True):
    """``{h1 log p} U {h2_j log(m + alpha_j)} U {pi}`` for ``p <= prime_bound``, ``m <= m_bound``.

    For ``m = 0`` the entry ``h2_j log(alpha_j)`` is negative since
    ``alpha_j < 1``; it is kept, as the relation search is sign-blind.
    """
    entries = [(f"h1*log({p})", shift.h1 * math.log(p)) for p in primes_up_to(prime_bound).tolist()]
    for j, (a, h) in enumerate(zip(shift.alphas, shift.h2)):
        entries += [(f"h2_{j}*log({m}+a{j})", h * math.log(m + a)) for m in range(m_bound + 1)]
    if include_pi:
        entries.append(("pi", math.pi))
    return FrequencySet(tuple(entries))


@dataclass(frozen=True)
class Relation:
    labels: Tuple[str, ...]
    coefficients: Tuple[int, ...]
    residual: float

    def to_json(self):
        return {"labels": list(self.labels), "coefficients": list(self.coefficients), "residual": self.residual}


def _normalize(coeffs):
    g = 0
    for c in coeffs:
        g = math.gcd(g, c)
    coeffs = tuple(c // g for c in coeffs)
    first = next(c for c in coeffs if c != 0)
    return coeffs if first > 0 else tuple(-c for c in coeffs)


def _confirmed(coeffs, values):
    # Exact products of doubles with small integers, summed with one rounding.
    return abs(math.fsum(c * v for c, v in zip(coeffs, values)))


def _scan_subset(values, max_coeff):
    """Every primitive integer vector with all entries nonzero and ``|c_i| <= max_coeff``."""
    k = len(values)
    scale = max(abs(v) for v in values)
    tol = RELATION_TOL * max(scale, 1.0)
    if k == 1:
        return [((1,), abs(values[0]))] if abs(values[0]) <= tol else []
    # Solve for the entry of largest modulus; enumerate the others.
    pivot = int(np.argmax(np.abs(values)))
    others = [i for i in range(k) if i != pivot]
    vp = values[pivot]
    if vp == 0:
        return []
    rng = np.arange(-max_coeff, max_coeff + 1)
    rng = rng[rng != 0]
    grids = np.meshgrid(*([rng] * (k - 1)), indexing="ij")
    combo = sum(g.astype(float) * values[i] for g, i in zip(grids, others))
    cp = np.rint(-combo / vp)
    ok = (cp != 0) & (np.abs(cp) <= max_coeff)
    resid = np.abs(combo + cp * vp)
    hits = np.nonzero(ok & (resid <= tol))
    found = []
    for idx in zip(*hits):
        coeffs = [0] * k
        for g, i in zip(grids, others):
            coeffs[i] = int(g[idx])
        coeffs[pivot] = int(cp[idx])
        found.append(tuple(coeffs))
    return [(c, _confirmed(c, values)) for c in found]


def _pslq_subset(values, max_coeff):
    import mpmath

    with mpmath.workdps(30):
        rel = mpmath.pslq([mpmath.mpf(v) for v in values], maxcoeff=max_coeff, maxsteps=10**4, tol=mpmath.mpf(RELATION_TOL))
    if rel is None or any(c == 0 for c in rel):
        return []
    return [(tuple(int(c) for c in rel), _confirmed(rel, values))]


def integer_relation_scan(freqs, max_coeff, subset_size):
    """Integer relations ``sum c_i v_i = 0`` over subsets of ``subset_size`` entries.

    Subsets of size up to 3 are searched exhaustively over
    ``0 < |c_i| <= max_coeff``; larger subsets use PSLQ, which returns at
    most one relation per subset.  A candidate must vanish to ``1e-9``
    (relative to the largest entry) and then to ``1e-12`` when recomputed
    with correctly rounded summation.  Relations are returned in primitive
    form with a positive leading coefficient.  An empty result is not a
    proof of independence.
    """
    if max_coeff < 1:
        raise DomainError("max_coeff must be >= 1")
    values = freqs.values
    labels = freqs.labels
    if not 1 <= subset_size <= len(values):
        raise DomainError("subset_size must be between 1 and the number of entries")
    seen = set()
    out = []
    for subset in itertools.combinations(range(len(values)), subset_size):
        vals = values[list(subset)]
        finder = _scan_subset if subset_size <= 3 else _pslq_subset
        scale = max(float(np.max(np.abs(vals))), 1.0)
        for coeffs, resid in finder(vals, max_coeff):
            if resid > CONFIRM_TOL * scale:
                continue
            coeffs = _normalize(coeffs)
            key = (subset, coeffs)
            if key in seen:
                continue
            seen.add(key)
            out.append(Relation(tuple(labels[i] for i in subset), coeffs, _confirmed(coeffs, vals)))
    return out


def write_relations_csv(path, relations):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["labels", "coefficients", "residual"])
        for r in relations:
            w.writerow([";".join(r.labels), ";".join(map(str, r.coefficients)), f"{r.residual:.17g}"])


def gN_table(index, shift, Ns):
    """Rows ``(support, theta, N, |g_N|, envelope)``; degenerate characters get ``nan`` envelopes."""
    theta = character_phase(index, shift)
    rows = []
    for N in Ns:
        try:
            g = fourier_gN_closed(index, shift, N)
            env = 1.0 if index.is_trivial else decay_envelope(theta, N)
        except DegenerateCharacter:
            g, env = fourier_gN_direct(index, shift, N), float("nan")
        rows.append((index.support_label(), theta, int(N), abs(g), env))
    return rows


def write_gN_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["support", "theta", "N", "abs_gN", "envelope"])
        for support, theta, N, mod, env in rows:
            w.writerow([support, f"{theta:.17g}", N, f"{mod:.17g}", f"{env:.17g}"])
