"""Command-line interface.

Every subcommand reads one JSON configuration, writes its outputs into an
output directory (``--out``, else ``$ZETALAB_OUTPUT_DIR``, else
``./zetalab-out``) and records the run in ``record.json``.

Exit codes: 0 success, 2 configuration error, 3 domain or invariant
error, 4 numerical failure.
"""

import argparse
import csv
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConvergenceError, ZetaLabError
from .random_model import RNG_NAME

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_NUMERIC = 0, 2, 3, 4
OUTPUT_ENV = "ZETALAB_OUTPUT_DIR"
COMMANDS = ("eval", "scan", "fourier", "indep", "limitcheck", "deficit")


class ConfigError(Exception):
    """Configuration could not be read or is structurally invalid."""


def fmt(x):
    """17 significant digits, enough to round-trip a double."""
    return f"{float(x):.17g}"


def _complex(v):
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _write_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --------------------------------------------------------------------------
# Subcommands: each takes (config, out_dir) and returns (outputs, seeds, summary)
# --------------------------------------------------------------------------


def _function_form(doc):
    from . import special_functions as sf

    kind = doc["kind"]
    if kind == "riemann":
        return sf.riemann().form
    if kind == "hurwitz":
        alpha = float(doc["alpha"])
        if not 0 < alpha <= 1:
            raise sf.DomainError(f"alpha must lie in (0, 1], got {alpha}")
        return sf.HurwitzCombination(1, (1,), (alpha,))
    if kind == "periodic_zeta":
        return sf.periodic_zeta_form(sf.PeriodicSequence.from_json(doc))
    if kind == "periodic_hurwitz":
        return sf.PeriodicHurwitzSpec.from_json(doc).form
    if kind == "dirichlet":
        return sf.dirichlet_l(int(doc["modulus"]), int(doc["index"])).form
    raise ConfigError(f"unknown function kind {kind!r}")


def cmd_eval(cfg, out):
    form = _function_form(cfg["function"])
    points = [_complex(p) for p in cfg["points"]]
    order = int(cfg.get("order", 20))
    rows = []
    for s in points:
        value, bound = form.evaluate(s, order=order)
        rows.append((s, value, bound))
        print(f"s = {fmt(s.real)}{s.imag:+.17g}i  value = {fmt(value.real)}{value.imag:+.17g}i  bound = {bound:.3g}")
    _write_csv(
        out / "values.csv",
        ["s_re", "s_im", "value_re", "value_im", "bound"],
        [[fmt(s.real), fmt(s.imag), fmt(v.real), fmt(v.imag), fmt(b)] for s, v, b in rows],
    )
    return ["values.csv"], [], {"count": len(rows)}


def cmd_scan(cfg, out):
    from .universality_search import density_vs_epsilon, experiment_from_json, scan

    cfg = dict(cfg)
    cfg.setdefault("workers", 1)
    exp = experiment_from_json(cfg)
    est = scan(exp, store_table=True)
    est.write_per_k_csv(out / "per_k.csv")
    results = est.to_json()
    outputs = ["results.json", "per_k.csv"]
    if "epsilons" in cfg:
        table = density_vs_epsilon(exp, cfg["epsilons"], est)
        _write_csv(out / "density_vs_epsilon.csv", ["epsilon", "density"], [[fmt(e), fmt(d)] for e, d in table])
        outputs.append("density_vs_epsilon.csv")
    _write_json(out / "results.json", {"estimate": results, "config": cfg})
    print(f"hits {est.hits} of {est.total}  density {fmt(est.density)}")
    seeds = [t.seed for t in exp.targets if t.seed is not None]
    return outputs, seeds, results


def cmd_fourier(cfg, out):
    from .random_model import ErgodicShift
    from .torus_analysis import CharacterIndex, gN_table, write_gN_csv

    shift = ErgodicShift.from_json(cfg["shift"])
    Ns = [int(n) for n in cfg["N"]]
    rows = []
    for doc in cfg["indices"]:
        rows += gN_table(CharacterIndex.from_json(doc), shift, Ns)
    write_gN_csv(out / "gN.csv", rows)
    for support, theta, N, mod, env in rows:
        print(f"{support}  theta={fmt(theta)}  N={N}  |g_N|={fmt(mod)}")
    return ["gN.csv"], [], {"rows": len(rows)}


def cmd_indep(cfg, out):
    from .random_model import ErgodicShift
    from .torus_analysis import FrequencySet, frequency_set, integer_relation_scan, write_relations_csv

    if "frequencies" in cfg:
        freqs = FrequencySet.from_json(cfg["frequencies"])
    else:
        shift = ErgodicShift.from_json(cfg["shift"])
        freqs = frequency_set(shift, int(cfg["prime_bound"]), int(cfg["m_bound"]), cfg.get("include_pi", True))
    found = []
    for size in cfg.get("subset_sizes", [cfg.get("subset_size", 2)]):
        found += integer_relation_scan(freqs, int(cfg["max_coeff"]), int(size))
    write_relations_csv(out / "relations.csv", found)
    for r in found:
        print("relation", " ".join(f"{c:+d}*{l}" for c, l in zip(r.coefficients, r.labels)))
    if not found:
        print("no relation found at this resolution")
    return ["relations.csv"], [], {"relations": [r.to_json() for r in found]}


def cmd_limitcheck(cfg, out):
    from .smoothing import SmoothingParams
    from .special_functions import PeriodicHurwitzSpec, member_from_json
    from .stats import collect_lattice_samples, collect_model_samples, compare
    from .universality_search import ShiftLattice

    phi = member_from_json(cfg["phi"])
    zetas = [PeriodicHurwitzSpec.from_json(z) for z in cfg.get("zetas", [])]
    lattice = ShiftLattice.from_json(cfg["lattice"])
    points = [_complex(p) for p in cfg["test_points"]]
    seed = int(cfg["seed"])
    lat = collect_lattice_samples(phi, zetas, lattice, points)
    model = collect_model_samples(
        phi,
        zetas,
        points,
        int(cfg["n_samples"]),
        seed,
        SmoothingParams.from_json(cfg.get("smoothing")),
        int(cfg.get("cutoff", 1000)),
    )
    report = compare(lat, model)
    doc = report.to_json()
    _write_json(out / "report.json", doc)
    report.write_ecdf_csv(out / "ecdf.csv")
    keys = ["mean_gap", "mean_se", "abs2_mean_a", "abs2_mean_b", "abs2_gap", "abs2_se", "ks_re", "ks_im", "ks_critical"]
    _write_csv(out / "moments.csv", ["slot"] + keys, [[s["slot"]] + [fmt(s[k]) for k in keys] for s in doc["slots"]])
    print("flagged" if report.flagged else "consistent")
    return ["report.json", "ecdf.csv", "moments.csv"], [seed], doc


def cmd_deficit(cfg, out):
    from .smoothing import SmoothingParams, approximation_deficit
    from .special_functions import PeriodicHurwitzSpec, StripRegion, member_from_json
    from .universality_search import ShiftLattice

    phi = member_from_json(cfg["phi"])
    zetas = [PeriodicHurwitzSpec.from_json(z) for z in cfg.get("zetas", [])]
    region = StripRegion(**cfg["region"])
    params = SmoothingParams.from_json(cfg["smoothing"])
    lattice = ShiftLattice.from_json(cfg["lattice"])
    value = approximation_deficit(phi, zetas, region, params, lattice, boundary_nodes=int(cfg.get("boundary_nodes", 32)))
    _write_json(out / "deficit.json", {"deficit": value})
    print(f"deficit {fmt(value)}")
    return ["deficit.json"], [], {"deficit": value}


HANDLERS = {
    "eval": cmd_eval,
    "scan": cmd_scan,
    "fourier": cmd_fourier,
    "indep": cmd_indep,
    "limitcheck": cmd_limitcheck,
    "deficit": cmd_deficit,
}


# --------------------------------------------------------------------------
# Driver
# --------------------------------------------------------------------------


def _exit_code(err):
    if isinstance(err, ConvergenceError):
        return EXIT_NUMERIC
    if isinstance(err, ZetaLabError):
        return EXIT_NUMERIC if isinstance(err, ArithmeticError) and not isinstance(err, ZeroDivisionError) else EXIT_DOMAIN
    if isinstance(err, (ConfigError, json.JSONDecodeError, KeyError, TypeError, ValueError, OSError)):
        return EXIT_CONFIG
    if isinstance(err, ArithmeticError):
        return EXIT_NUMERIC
    raise err


def _output_dir(arg):
    path = Path(arg or os.environ.get(OUTPUT_ENV) or "zetalab-out")
    path.mkdir(parents=True, exist_ok=True)
    return path


def run(command, cfg, out):
    """Run one subcommand on a parsed config; returns the exit code and writes ``record.json``."""
    record = {
        "command": command,
        "config": cfg,
        "version": __version__,
        "rng": RNG_NAME,
        "seeds": [],
        "outputs": [],
    }
    started = time.time()
    code = EXIT_OK
    try:
        if not isinstance(cfg, dict):
            raise ConfigError("configuration must be a JSON object")
        outputs, seeds, summary = HANDLERS[command](cfg, out)
        record.update(outputs=outputs, seeds=seeds, summary=summary)
    except Exception as err:  # mapped to the exit-code contract
        code = _exit_code(err)
        record["error"] = {"type": type(err).__name__, "message": str(err)}
        if getattr(err, "k", None) is not None:
            record["error"]["k"] = err.k
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
    record["timing"] = {"started": started, "elapsed_s": time.time() - started}
    record["exit_code"] = code
    _write_json(out / "record.json", _jsonable(record))
    return code


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.generic):
        return _jsonable(x.item())
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


def _load_config(path):
    with open(path) as fh:
        return json.load(fh)


def build_parser():
    parser = argparse.ArgumentParser(prog="zetalab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"zetalab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("config", help="JSON configuration file")
        p.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV} or ./zetalab-out)")
    p = sub.add_parser("replay", help="re-run a command from its record.json")
    p.add_argument("record", help="record.json written by an earlier run")
    p.add_argument("--out", help="output directory for the replayed run")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        out = _output_dir(args.out)
    except OSError as err:
        print(f"error: cannot create output directory: {err}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "replay":
            rec = _load_config(args.record)
            command, cfg = rec["command"], rec["config"]
            if command not in HANDLERS:
                raise ConfigError(f"unknown command {command!r} in record")
        else:
            command, cfg = args.command, _load_config(args.config)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ConfigError) as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_CONFIG
    return run(command, cfg, out)


if __name__ == "__main__":
    sys.exit(main())
