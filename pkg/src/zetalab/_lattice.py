"""Blocked evaluation of Dirichlet-type sums along vertical arithmetic progressions.

For nodes ``s_g`` and shifts ``s_g + i*k*h`` the partial sum
``sum_c A[g, c] * exp(-i*k*h*log_c)`` is computed block by block: one
exponential per column per block and a matrix product against a fixed
table of ``exp(-i*j*h*log_c)`` for ``0 <= j < block``.  Block boundaries
depend only on ``k_start`` and ``block``, so the output is independent of
how blocks are later distributed.
"""

import math

import numpy as np
from scipy.special import bernoulli

DEFAULT_BLOCK = 64


def shifted_sums(A, logs, h, k_start, k_stop, ncols, block=DEFAULT_BLOCK):
    """Yield ``(k0, k1, partial)`` with ``partial[g, k-k0]`` the shifted sum.

    ``ncols(k0, k0 + block)`` gives how many leading columns of ``A`` are
    active for the block starting at ``k0``.  Every block is computed at
    full width and trimmed afterwards, so a value depends only on ``k`` and
    the block alignment, never on ``k_stop``.
    """
    A = np.asarray(A, dtype=complex)
    logs = np.asarray(logs, dtype=float)
    step_table = np.exp(-1j * h * np.outer(logs, np.arange(block)))
    for k0 in range(k_start, k_stop, block):
        k1 = min(k0 + block, k_stop)
        c = ncols(k0, k0 + block)
        anchor = np.exp(-1j * (k0 * h) * logs[:c])
        partial = (A[:, :c] * anchor) @ step_table[:c]
        yield k0, k1, partial[:, : k1 - k0]


_BERNOULLI_CACHE = {}


def bernoulli_ratios(order):
    """``B_{2j} / (2j)!`` for ``j = 1..order`` as floats."""
    if order not in _BERNOULLI_CACHE:
        b = bernoulli(2 * order)
        _BERNOULLI_CACHE[order] = np.array(
            [b[2 * j] / math.factorial(2 * j) for j in range(1, order + 1)]
        )
    return _BERNOULLI_CACHE[order]


def em_tail(s, x, order):
    """Euler-Maclaurin tail of ``sum_{n >= N} (n + a)**(-s)`` with ``x = N + a``.

    Returns ``(pole_part, rest, bound)``: the tail equals
    ``pole_part + rest + R`` with ``|R| <= bound`` and
    ``pole_part = x**(1 - s) / (s - 1)`` (``nan`` where ``s == 1``).
    The remainder bound is the standard one for order ``order``
    and needs ``Re(s) + 2*order - 1 > 0``.
    """
    s = np.asarray(s, dtype=complex)
    logx = math.log(x)
    u = np.exp(-s * logx)
    with np.errstate(divide="ignore", invalid="ignore"):
        pole_part = np.where(s == 1, np.nan, u * x / (s - 1))
    rest = 0.5 * u
    ratios = bernoulli_ratios(order)
    # q_j = (s)_{2j-1} * x**(-s-2j+1), kept as one product to avoid overflow.
    q = s * u / x
    for j in range(1, order + 1):
        rest = rest + ratios[j - 1] * q
        q = q * (s + 2 * j - 1) * (s + 2 * j) / (x * x)
    two_p = 2 * order
    denom = np.abs(s + two_p) * (2 * np.pi) ** two_p * (s.real + two_p - 1)
    bound = 4.0 * np.abs(q) * x * x / denom
    return pole_part, rest, bound


def em_terms_for(smax, order, ratio):
    """Truncation point giving ``|s| / (2 pi N) <= ratio`` and ``N >= 2*order``."""
    return max(int(math.ceil(smax / (2 * math.pi * ratio))), 2 * order) + 10


def hurwitz_combination_lattice(
    nodes,
    scale,
    weights,
    shifts,
    h,
    k_start,
    k_stop,
    *,
    order=30,
    ratio=0.6,
    block=DEFAULT_BLOCK,
):
    """Values of ``scale**(-s) * sum_r w_r * zeta(s, a_r)`` at ``s = node + i*k*h``.

    Returns ``(values, bound)`` where ``values`` has shape
    ``(len(nodes), k_stop - k_start)`` and ``bound`` is the largest
    Euler-Maclaurin remainder bound met (rounding not included).
    """
    nodes = np.atleast_1d(np.asarray(nodes, dtype=complex))
    weights = np.asarray(weights, dtype=complex)
    shifts = np.asarray(shifts, dtype=float)
    R = len(shifts)
    K = k_stop - k_start
    out = np.empty((len(nodes), K), dtype=complex)
    if K <= 0:
        return out, 0.0

    def terms_at(k):
        return em_terms_for(float(np.max(np.abs(nodes + 1j * k * h))), order, ratio)

    def block_terms(k0, k1):
        return max(terms_at(k0), terms_at(k1 - 1))

    # |node + i*k*h| is convex in k, so the endpoints bound every block.
    last = k_start + ((K - 1) // block + 1) * block
    m_max = max(terms_at(k_start), terms_at(last - 1))
    # Columns are n-major so a prefix of length M*R covers n < M for every shift.
    bases = (np.arange(m_max)[:, None] + shifts[None, :]).ravel()
    logs = np.log(bases)
    col_w = np.tile(weights, m_max)
    A = col_w[None, :] * np.exp(-nodes[:, None] * logs[None, :])
    total_with_pole = abs(weights.sum()) > 1e-12 * max(np.abs(weights).sum(), 1e-300)
    log_scale = math.log(scale)
    worst = 0.0

    def ncols(k0, k1):
        return block_terms(k0, k1) * R

    for k0, k1, partial in shifted_sums(A, logs, h, k_start, k_stop, ncols, block):
        M = block_terms(k0, k0 + block)
        s = nodes[:, None] + 1j * h * np.arange(k0, k1)[None, :]
        acc = partial
        pole = np.zeros_like(acc)
        for w, a in zip(weights, shifts):
            if w == 0:
                continue
            pp, rest, bnd = em_tail(s, M + a, order)
            acc = acc + w * rest
            pole = pole + w * pp
            worst = max(worst, float(np.max(np.abs(w) * bnd)))
        at_one = s == 1
        if np.any(at_one) and not total_with_pole:
            pole[at_one] = -sum(w * math.log(M + a) for w, a in zip(weights, shifts))
        acc = acc + pole
        if scale != 1:
            acc = acc * np.exp(-s * log_scale)
        out[:, k0 - k_start : k1 - k_start] = acc
    return out, worst
