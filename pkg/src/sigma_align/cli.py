"""Command line front end.

Subcommands: ``region check``, ``region max-sum``, ``ia run``,
``ia sweep``, ``lemma1``.  Configuration is a JSON document (rationals as
"p/q" strings); command line flags override config fields, and
SIGMA_ALIGN_SEED is the seed fallback.  Exit codes: 0 pass/feasible,
2 domain-negative (infeasible point or failed certification), 1 error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import precoder, region, verify
from .errors import InfeasiblePoint, ParseError, SigmaAlignError
from .numerics import Tolerance
from .region import DofPoint, SigmaConfig

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


def _parse_fraction(s) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad rational {s!r}: {e}") from e


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def load_config(path: str, args) -> dict:
    """Read the JSON config and resolve it against flags and environment."""
    try:
        with open(path) as f:
            raw = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"cannot read config {path}: {e}") from e
    try:
        c = raw["cfg"]
        cfg = SigmaConfig(int(c["n1"]), int(c["n2"]), int(c["la"]),
                          int(c["lb"]), int(c["lc"]))
        dd = raw.get("d", {})
        d = DofPoint(
            tuple(_parse_fraction(x) for x in dd.get("da", [])),
            tuple(_parse_fraction(x) for x in dd.get("db1", [])),
            tuple(_parse_fraction(x) for x in dd.get("db2", [])),
            tuple(_parse_fraction(x) for x in dd.get("dc", [])))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"bad config: {e}") from e
    if not d.matches(cfg):
        raise ParseError("DoF point shape does not match cfg")

    seed = getattr(args, "seed", None)
    if seed is None:
        seed = raw.get("seed")
    if seed is None:
        seed = os.environ.get("SIGMA_ALIGN_SEED")
    seed = int(seed) if seed is not None else 0

    tol_cfg = raw.get("tol", {})
    tol = Tolerance(
        rel_rank_tol=(args.tol_rank if getattr(args, "tol_rank", None)
                      else tol_cfg.get("rank", 1e-9)),
        col_match_tol=(args.tol_match if getattr(args, "tol_match", None)
                       else tol_cfg.get("match", 1e-8)))

    n = getattr(args, "n", None) or raw.get("n", 1)
    n_max = getattr(args, "n_max", None) or raw.get("n_max", n)
    return {
        "cfg": cfg,
        "d": d,
        "n": int(n),
        "n_max": int(n_max),
        "seed": seed,
        "trials": int(getattr(args, "trials", None) or raw.get("trials", 1)),
        "mode": getattr(args, "mode", None) or raw.get("mode", "float"),
        "tol": tol,
        "subset_cap": int(raw.get("subset_cap", region.DEFAULT_SUBSET_CAP)),
        "jobs": int(getattr(args, "jobs", None) or raw.get("jobs", 1)),
    }


def resolved_config_doc(rc: dict) -> dict:
    """Provenance block embedded in every report."""
    cfg, d = rc["cfg"], rc["d"]
    return {
        "cfg": {"n1": cfg.n1, "n2": cfg.n2, "la": cfg.la, "lb": cfg.lb,
                "lc": cfg.lc},
        "d": {"da": [_frac_str(x) for x in d.da],
              "db1": [_frac_str(x) for x in d.db1],
              "db2": [_frac_str(x) for x in d.db2],
              "dc": [_frac_str(x) for x in d.dc]},
        "n": rc["n"], "n_max": rc["n_max"], "seed": rc["seed"],
        "trials": rc["trials"], "mode": rc["mode"],
        "tol": {"rank": rc["tol"].rel_rank_tol,
                "match": rc["tol"].col_match_tol},
        "subset_cap": rc["subset_cap"],
        "distributions": {
            "float": "log-uniform on [1/2, 2]",
            "rational": "k/64, k in {32..128}, no repeats per series",
        },
    }


def _emit(doc, out_path):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_region_check(args) -> int:
    rc = load_config(args.config, args)
    result = region.check_point(rc["cfg"], rc["d"])
    doc = {
        "feasible": result.feasible,
        "violated": [{"label": c.label, "bound": _frac_str(c.bound),
                      "value": _frac_str(c.value(rc["d"].as_vector()))}
                     for c in result.violated],
        "mu0": region.mu0(rc["d"]),
        "config": resolved_config_doc(rc),
    }
    _emit(doc, args.out)
    return EXIT_OK if result.feasible else EXIT_NEGATIVE


def cmd_region_maxsum(args) -> int:
    rc = load_config(args.config, args)
    cfg = rc["cfg"]
    if args.weights:
        weights = [_parse_fraction(w) for w in args.weights.split(",")]
    else:
        weights = [Fraction(1)] * cfg.num_messages
    value, point = region.max_sum_dof(cfg, weights, rc["subset_cap"])
    doc = {
        "optimum": _frac_str(value),
        "optimum_decimal": float(value),
        "optimizer": {"da": [_frac_str(x) for x in point.da],
                      "db1": [_frac_str(x) for x in point.db1],
                      "db2": [_frac_str(x) for x in point.db2],
                      "dc": [_frac_str(x) for x in point.dc]},
        "config": resolved_config_doc(rc),
    }
    _emit(doc, args.out)
    return EXIT_OK


def _run_trials(rc, n):
    """Reports for all trials at one n, fanned out over jobs."""
    def one(t):
        return verify.run_experiment(rc["cfg"], rc["d"], n,
                                     rc["seed"] + 1000 * t,
                                     rc["mode"], rc["tol"])
    trials = range(rc["trials"])
    if rc["jobs"] > 1:
        with ThreadPoolExecutor(max_workers=rc["jobs"]) as pool:
            return list(pool.map(one, trials))
    return [one(t) for t in trials]


def cmd_ia_run(args) -> int:
    rc = load_config(args.config, args)
    reports = _run_trials(rc, rc["n"])
    doc = {
        "trials": [r.to_dict() for r in reports],
        "all_pass": all(r.passed for r in reports),
        "config": resolved_config_doc(rc),
    }
    _emit(doc, args.out)
    return EXIT_OK if doc["all_pass"] else EXIT_NEGATIVE


def cmd_ia_sweep(args) -> int:
    rc = load_config(args.config, args)
    mids = precoder.message_ids(rc["cfg"])
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["n", "trial", "seed", "mu_n", "sum_per_slot",
                     "sum_per_slot_decimal"]
                    + [f"ratio_{m}" for m in mids]
                    + [f"ratio_{m}_decimal" for m in mids] + ["pass"])
    ratio_track = {m: [] for m in mids}
    all_pass = True
    for n in range(rc["n"], rc["n_max"] + 1):
        reports = _run_trials(rc, n)
        for t, r in enumerate(reports):
            ratios = [r.achieved[m]["ratio"] for m in mids]
            writer.writerow([n, t, r.seed, precoder.plan(
                rc["cfg"], rc["d"], n).mu_n, _frac_str(r.sum_per_slot),
                float(r.sum_per_slot)]
                + [_frac_str(x) for x in ratios]
                + [float(x) for x in ratios] + [r.passed])
            all_pass = all_pass and r.passed
        for m in mids:
            ratio_track[m].append(reports[0].achieved[m]["ratio"])
    for m, seq in ratio_track.items():
        strict = any(x != 1 for x in seq)
        for a, b in zip(seq, seq[1:]):
            if strict and not a < b:
                raise SigmaAlignError(
                    f"ratio for {m} not strictly increasing across n")
            if not a <= b:
                raise SigmaAlignError(f"ratio for {m} decreasing across n")
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all_pass else EXIT_NEGATIVE


def cmd_lemma1(args) -> int:
    seed = args.seed if args.seed is not None else \
        int(os.environ.get("SIGMA_ALIGN_SEED", 0))
    mode = args.mode or "float"
    valid_ok = 0
    negative_full = 0
    for t in range(args.trials):
        if verify.lemma1_test(args.m, args.k, verify.random_valid_exponents,
                              seed + t, mode):
            valid_ok += 1
        if verify.lemma1_test(args.m, args.k,
                              verify.duplicate_column_exponents,
                              seed + t, mode, claim_valid=False):
            negative_full += 1
    doc = {
        "m": args.m, "k": args.k, "trials": args.trials, "seed": seed,
        "mode": mode,
        "valid_full_rank": valid_ok,
        "negative_full_rank": negative_full,
    }
    _emit(doc, args.out)
    ok = valid_ok == args.trials and negative_full == 0
    return EXIT_OK if ok else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sigma-align")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--trials", type=int)
        sp.add_argument("--mode", choices=["float", "rational"])
        sp.add_argument("--tol-rank", type=float, dest="tol_rank")
        sp.add_argument("--tol-match", type=float, dest="tol_match")
        sp.add_argument("--jobs", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--n-max", type=int, dest="n_max")
        sp.add_argument("--out")

    reg = sub.add_parser("region").add_subparsers(dest="subcommand",
                                                  required=True)
    sp = reg.add_parser("check")
    common(sp)
    sp.set_defaults(func=cmd_region_check)
    sp = reg.add_parser("max-sum")
    common(sp)
    sp.add_argument("--weights", help="comma-separated rationals")
    sp.set_defaults(func=cmd_region_maxsum)

    ia = sub.add_parser("ia").add_subparsers(dest="subcommand", required=True)
    sp = ia.add_parser("run")
    common(sp)
    sp.set_defaults(func=cmd_ia_run)
    sp = ia.add_parser("sweep")
    common(sp)
    sp.set_defaults(func=cmd_ia_sweep)

    sp = sub.add_parser("lemma1")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--mode", choices=["float", "rational"])
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_lemma1)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasiblePoint as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_NEGATIVE
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except SigmaAlignError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
