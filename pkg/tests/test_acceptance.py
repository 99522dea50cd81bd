"""Acceptance criteria 1-10.

Each test prints one ``criterion N: PASS|FAIL`` line (also collected into the
terminal summary by ``conftest.py``) and then asserts.  Run directly with
``python tests/test_acceptance.py`` to get only the summary lines.
"""

import json
import math
import sys
from pathlib import Path

import mpmath
import numpy as np
import pytest

from zetalab import cli
from zetalab import random_model as rm
from zetalab import smoothing as sm
from zetalab import special_functions as sf
from zetalab import stats
from zetalab import torus_analysis as ta
from zetalab import universality_search as us
from zetalab.errors import DegenerateCharacter, DomainError
from zetalab.geometry import CompactSetSpec

RESULTS = []
GOLDEN = Path(__file__).parent / "golden"


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    return ok


# --------------------------------------------------------------------------
# Oracles
# --------------------------------------------------------------------------


def direct_periodic(s, alpha, coeffs, terms=10**6):
    """``sum_{m >= 0} b_m (m + alpha)**(-s)`` by direct summation plus the first two tail terms.

    ``terms`` must be a multiple of the period.  The tail of residue class
    ``r`` is ``l**(-s) * sum_{j >= terms/l} (j + (r + alpha)/l)**(-s)``,
    replaced by its integral plus half the first term; the omitted part is
    ``O(terms**(-Re s - 1))``.
    """
    l = len(coeffs)
    m = np.arange(terms, dtype=float)
    b = np.asarray(coeffs, dtype=complex)[np.arange(terms) % l]
    head = complex(np.sum((b * np.exp(-s * np.log(m + alpha)))[::-1]))
    tail = 0j
    for r, c in enumerate(coeffs):
        x = terms / l + (r + alpha) / l
        tail += c * l ** (-s) * (x ** (1 - s) / (s - 1) + 0.5 * x ** (-s))
    return head + tail


def random_sequence(rng, max_period=6):
    while True:
        l = int(rng.integers(1, max_period + 1))
        coeffs = tuple(complex(a, b) for a, b in rng.normal(size=(l, 2)))
        try:
            return sf.PeriodicSequence(coeffs)
        except DomainError:
            continue


# --------------------------------------------------------------------------
# Criteria
# --------------------------------------------------------------------------


def test_criterion_1_evaluators():
    rng = np.random.default_rng(1001)
    worst = {"hurwitz": 0.0, "periodic_zeta": 0.0, "periodic_hurwitz": 0.0, "steuding": 0.0}
    members = [sf.riemann(), sf.dirichlet_l(4, 1), sf.dirichlet_l(5, 1), sf.dirichlet_l(7, 2)]
    for _ in range(100):
        s = complex(2.5, rng.uniform(-50, 50))
        alpha = float(rng.uniform(0.05, 1.0))
        worst["hurwitz"] = max(worst["hurwitz"], abs(sf.hurwitz_zeta(s, alpha) - direct_periodic(s, alpha, (1,))))
        seq = random_sequence(rng)
        spec = sf.PeriodicHurwitzSpec(seq, min(alpha, 0.99))
        terms = 60 * 10**4  # multiple of every period up to 6
        ref = direct_periodic(s, spec.alpha, seq.coeffs, terms)
        worst["periodic_hurwitz"] = max(worst["periodic_hurwitz"], abs(sf.periodic_hurwitz_zeta(spec, s) - ref))
        # sum_{m >= 1} a_m m^{-s} is the shifted sequence a_{m+1} at alpha = 1.
        shifted = tuple(seq[r + 1] for r in range(seq.period))
        ref = direct_periodic(s, 1.0, shifted, terms)
        worst["periodic_zeta"] = max(worst["periodic_zeta"], abs(sf.periodic_zeta(seq, s) - ref))
        member = members[int(rng.integers(len(members)))]
        q = member.metadata.get("modulus", 1)
        chi = tuple(complex(member.dirichlet_coeff(np.array([r + 1]))[0]) for r in range(q))
        ref = direct_periodic(s, 1.0, chi, q * (10**6 // q))
        worst["steuding"] = max(worst["steuding"], abs(sf.steuding_eval(member, s) - ref))
    grid = rng.uniform(0.2, 3, 100) + 1j * rng.uniform(-50, 50, 100)
    grid = grid[np.abs(grid - 1) > 1e-6]
    ident = float(np.max(np.abs(sf.hurwitz_zeta(grid, 1.0) - sf.steuding_eval(sf.riemann(), grid))))
    ok = max(worst.values()) < 1e-9 and ident < 1e-10
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f"; zeta(s,1) vs zeta(s) {ident:.1e}"
    report(1, ok, detail)
    assert ok


def test_criterion_2_reduction_identity():
    rng = np.random.default_rng(2002)
    worst = 0.0
    for i in range(50):
        seq = random_sequence(rng, max_period=8)
        spec = sf.PeriodicHurwitzSpec(seq, float(rng.uniform(0.01, 0.99)))
        if i % 2:
            # In the strip: an independent Hurwitz implementation per residue class.
            s = complex(rng.uniform(0.2, 0.99), rng.uniform(-40, 40))
            l = seq.period
            mp_s = mpmath.mpc(s.real, s.imag)
            ref = complex(
                mpmath.power(l, -mp_s)
                * mpmath.fsum(
                    mpmath.mpc(c.real, c.imag) * mpmath.zeta(mp_s, mpmath.mpf(r + spec.alpha) / l)
                    for r, c in enumerate(seq.coeffs)
                )
            )
        else:
            s = complex(rng.uniform(1.5, 3), rng.uniform(-40, 40))
            terms = 840 * 10**3  # multiple of every period up to 8
            ref = direct_periodic(s, spec.alpha, seq.coeffs, terms)
        worst = max(worst, abs(sf.periodic_hurwitz_zeta(spec, s) - ref))
    ok = worst < 1e-9
    report(2, ok, f"max |reduction - independent path| = {worst:.2e} over 50 specs")
    assert ok


def test_criterion_3_kappa():
    R = sf.riemann()
    exact = all(sf.prime_mean_square(R, x) == 1.0 for x in (2, 3, 100, 10**4, 10**5, 123457))
    mod4 = sf.prime_mean_square(sf.dirichlet_l(4, 1), 10**5)
    ok = exact and abs(mod4 - 1) < 1e-3
    report(3, ok, f"riemann exactly 1: {exact}; mod 4 at 1e5: {mod4:.6f}")
    assert ok


def test_criterion_4_smoothing_convergence():
    R = sf.riemann()
    exact = sf.steuding_eval(R, 2)
    gaps = [abs(sm.phi_n(R, 2, sm.SmoothingParams(n)) - exact) for n in (100, 1000, 10**4)]
    monotone = gaps[0] > gaps[1] > gaps[2]
    ok = monotone and gaps[2] < 1e-3
    detail = f"gaps {gaps[0]:.3e} > {gaps[1]:.3e} > {gaps[2]:.3e} monotone={monotone}; bound at n=1e4 is 1e-3"
    report(4, ok, detail)
    assert ok


def test_criterion_5_orbit_identity():
    rng = np.random.default_rng(5005)
    R = sf.riemann()
    shift = rm.ErgodicShift(1.1, (math.sqrt(2) - 1,), (1.3,))
    P = 10**4
    logm = np.log(np.arange(1, P + 1, dtype=float))
    worst = 0.0
    for k in rng.integers(0, 10**6, 1000):
        s = complex(2.0, rng.uniform(-20, 20))
        orbit = rm.ergodic_orbit(shift, int(k), prime_bound=P, m_bound=1)
        direct = complex(np.sum(np.exp(-(s + 1j * float(k) * shift.h1) * logm)[::-1]))
        worst = max(worst, abs(rm.random_phi(R, s, orbit, cutoff=P) - direct))
    ok = worst < 1e-9
    report(5, ok, f"max |random_phi(orbit k) - shifted sum| = {worst:.2e} over 1000 k")
    assert ok


def test_criterion_6_fourier_closed_form():
    rng = np.random.default_rng(6006)
    primes = [2, 3, 5, 7, 11, 13, 17, 19]
    worst = worst_env = 0.0
    checked = degenerate = 0
    for _ in range(1000):
        shift = rm.ErgodicShift(rng.uniform(0.1, 10), (rng.uniform(0.01, 0.99),), (rng.uniform(0.1, 10),))
        k = {int(p): int(rng.integers(-20, 21)) for p in rng.choice(primes, int(rng.integers(0, 3)), replace=False)}
        l = {int(m): int(rng.integers(-20, 21)) for m in rng.integers(0, 100, int(rng.integers(0, 3)))}
        idx = ta.CharacterIndex(k, (l,))
        N = int(rng.integers(0, 10**6 + 1))
        try:
            closed = ta.fourier_gN_closed(idx, shift, N)
        except DegenerateCharacter:
            degenerate += 1
            continue
        direct = ta.fourier_gN_direct(idx, shift, N)
        worst = max(worst, abs(closed - direct))
        if not idx.is_trivial:
            theta = ta.character_phase(idx, shift)
            worst_env = max(worst_env, (N + 1) * abs(closed) * abs(1 - np.exp(-1j * theta)) / 2)
        checked += 1
    trivial_ok = all(
        ta.fourier_gN_closed(ta.CharacterIndex(), shift, N) == 1 and ta.fourier_gN_direct(ta.CharacterIndex(), shift, N) == 1
        for N in (0, 1, 1000, 10**6)
    )
    ok = worst < 1e-12 and trivial_ok and worst_env <= 1 + 1e-9
    detail = f"max |closed - direct| = {worst:.2e} on {checked} samples ({degenerate} degenerate); trivial=1: {trivial_ok}; envelope ratio {worst_env:.3f}"
    report(6, ok, detail)
    assert ok


def test_criterion_7_independence_heuristic():
    rng = np.random.default_rng(7007)
    base = [math.log(2), math.log(3), math.log(5), math.log(7), math.sqrt(2) - 1, math.pi]
    planted = found = 0
    for trial in range(40):
        i, j = rng.choice(len(base), 2, replace=False)
        a, b = (int(x) for x in rng.choice(np.r_[-50:0, 1:51], 2))
        c = int(rng.integers(1, 51))
        v = (a * base[i] + b * base[j]) / c
        f = ta.FrequencySet((("x", base[i]), ("y", base[j]), ("z", v)))
        g = math.gcd(math.gcd(a, b), c)
        target = ta._normalize((a // g, b // g, -c // g))
        planted += 1
        found += target in [r.coefficients for r in ta.integer_relation_scan(f, 50, 3)]
    for trial in range(10):
        coeffs = [int(x) for x in rng.choice(np.r_[-50:0, 1:51], 3)]
        vals = [math.log(2), math.log(3), math.log(7)]
        last = sum(c * v for c, v in zip(coeffs, vals))
        f = ta.FrequencySet(tuple((f"v{i}", v) for i, v in enumerate(vals + [last])))
        g = 0
        for c in coeffs:
            g = math.gcd(g, c)
        target = ta._normalize(tuple(c // g for c in coeffs) + (-1 // 1,)) if g == 1 else None
        if target is None:
            continue
        planted += 1
        found += target in [r.coefficients for r in ta.integer_relation_scan(f, 50, 4)]
    control = ta.FrequencySet((("log2", math.log(2)), ("log3", math.log(3)), ("pi", math.pi)))
    spurious = sum(len(ta.integer_relation_scan(control, 50, k)) for k in (1, 2, 3))
    ok = found == planted and spurious == 0
    report(7, ok, f"found {found}/{planted} planted relations; {spurious} relations among log 2, log 3, pi")
    assert ok


@pytest.mark.slow
def test_criterion_8_limit_theorem_shadow():
    R = sf.riemann()
    zeta4 = float(mpmath.zeta(4))
    model = stats.collect_model_samples(R, [], [2.0], 10**5, seed=8008)
    lat = stats.collect_lattice_samples(R, [], us.ShiftLattice(1.1, (), 10**5), [2.0])
    rep = stats.compare(lat, model).slots[0]
    x = lat.samples[:, 0]
    abs2 = float(np.mean(np.abs(x) ** 2))
    model_mean_gap = abs(complex(np.mean(model.samples[:, 0])) - 1)
    generic_ok = rep.mean_gap < 3 * rep.mean_se and model_mean_gap < 3 * rep.mean_se and abs(abs2 / zeta4 - 1) < 0.01
    bad = stats.collect_lattice_samples(R, [], us.ShiftLattice(2 * math.pi / math.log(2), (), 10**5), [2.0])
    bad_rep = stats.compare(bad, model)
    ok = generic_ok and bad_rep.flagged and bad_rep.slots[0].ecdf_flag
    detail = (
        f"generic: model mean - 1 = {model_mean_gap:.2e}, mean gap {rep.mean_gap:.2e} vs 3 SE {3 * rep.mean_se:.2e}, "
        f"E|zeta|^2 {abs2:.6f} vs zeta(4) {zeta4:.6f}; "
        f"h1=2pi/log2: KS re {bad_rep.slots[0].ks_re:.3f} > {bad_rep.slots[0].ks_critical:.4f} flagged={bad_rep.flagged}"
    )
    report(8, ok, detail)
    assert ok


FIXTURE_HITS = 380  # seeded regression value for N = 1e5


def fixture_experiment(N=10**5):
    K = CompactSetSpec.disc(0.75, 0.1)
    zspec = sf.PeriodicHurwitzSpec(sf.PeriodicSequence((1,)), math.sqrt(2) - 1)
    targets = (us.TargetSpec("sampled", K, seed=1, n=50), us.TargetSpec("sampled", K, seed=2, n=50))
    return us.ShiftExperiment(sf.riemann(), (zspec,), targets, 0.8, us.ShiftLattice(1.1, (1.3,), N))


@pytest.mark.slow
def test_criterion_9_universality_scan():
    exp = fixture_experiment()
    first = us.scan(exp)
    eps = [0.2, 0.4, 0.6, 0.8, 1.0, 1.5, 2.0]
    table = us.density_vs_epsilon(exp, eps, first)
    dens = [d for _, d in table]
    monotone = all(a <= b for a, b in zip(dens, dens[1:]))
    second = us.scan(fixture_experiment())
    identical = np.array_equal(first.per_k_distances, second.per_k_distances) and first.hits == second.hits
    regression = FIXTURE_HITS is None or first.hits == FIXTURE_HITS
    ok = first.density > 0 and monotone and identical and regression
    detail = f"hits {first.hits}/{first.total} density {first.density:.3e}; monotone={monotone}; bit-identical re-run={identical}"
    report(9, ok, detail)
    assert ok


def test_criterion_10_cli_contract(tmp_path):
    checks = {}
    golden_ok = True
    for config, command, files in (
        ("eval_riemann.json", "eval", {"values.csv": "eval_riemann.values.csv"}),
        ("fourier.json", "fourier", {"gN.csv": "fourier.gN.csv"}),
        ("scan.json", "scan", {"per_k.csv": "scan.per_k.csv"}),
        ("limitcheck.json", "limitcheck", {"moments.csv": "limitcheck.moments.csv"}),
    ):
        out = tmp_path / config
        golden_ok &= cli.main([command, str(GOLDEN / config), "--out", str(out)]) == 0
        golden_ok &= all((out / a).read_bytes() == (GOLDEN / b).read_bytes() for a, b in files.items())
    checks["golden 17-digit outputs"] = golden_ok
    replay = tmp_path / "replay"
    checks["replay round-trip"] = (
        cli.main(["replay", str(tmp_path / "scan.json" / "record.json"), "--out", str(replay)]) == 0
        and (replay / "per_k.csv").read_bytes() == (GOLDEN / "scan.per_k.csv").read_bytes()
    )
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    checks["exit 2 on parse error"] = cli.main(["eval", str(bad), "--out", str(tmp_path / "b")]) == 2
    pole = tmp_path / "pole.json"
    pole.write_text(json.dumps({"function": {"kind": "riemann"}, "points": [[1, 0]]}))
    checks["exit 3 on pole"] = cli.main(["eval", str(pole), "--out", str(tmp_path / "p")]) == 3
    cfg = json.loads((GOLDEN / "scan.json").read_text())
    cfg["targets"][0]["set"]["center"] = [0.45, 0]
    outside = tmp_path / "outside.json"
    outside.write_text(json.dumps(cfg))
    checks["exit 3 on set outside strip"] = cli.main(["scan", str(outside), "--out", str(tmp_path / "o")]) == 3
    numeric = tmp_path / "numeric.json"
    numeric.write_text(
        json.dumps(
            {
                "phi": {"member": "riemann"},
                "region": {"sigma_min": 0.6, "sigma_max": 0.9, "t_min": -0.1, "t_max": 0.1},
                "smoothing": {"n": 10**6},
                "lattice": {"h1": 1.0, "h2": [], "N": 2},
            }
        )
    )
    checks["exit 4 on numeric failure"] = cli.main(["deficit", str(numeric), "--out", str(tmp_path / "n")]) == 4
    ok = all(checks.values())
    report(10, ok, "; ".join(f"{k}: {'ok' if v else 'BROKEN'}" for k, v in checks.items()))
    assert ok


if __name__ == "__main__":
    import tempfile

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    tests.sort(key=lambda f: int(f.__name__.split("_")[2]))
    for t in tests:
        try:
            if "tmp_path" in t.__code__.co_varnames[: t.__code__.co_argcount]:
                with tempfile.TemporaryDirectory() as d:
                    t(Path(d))
            else:
                t()
        except AssertionError:
            pass
    sys.exit(0 if all(": PASS" in line for line in RESULTS) else 1)
