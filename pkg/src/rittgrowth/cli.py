"""Command line front end.

Subcommands: validate, profile, indicator, relative, detect, check,
oracle, corpus.  Sources are given either as shorthand
(``expexp:a=2,c=1``) or as a path to a JSON document.  Output is JSON by
default (sorted keys, no timestamps) so identical runs are byte-identical.

Exit codes: 0 success, 1 a non-vacuous theorem check failed, 2 usage
error, 3 numeric/domain error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import corpus as corpus_mod
from . import oracle as oracle_mod
from . import series as series_mod
from . import theorems as theorems_mod
from .errors import NumericError, RittGrowthError, SpecFormatError
from .growth import GridSpec, load_or_sample
from .indicators import (DEFAULT_CONFIG, EstimatorConfig, detect_index_pair,
                         detect_relative_index_pair, order_pair, relative_indicators,
                         type_pair, weak_type_pair)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _load_source_arg(text: str) -> corpus_mod.CorpusEntry:
    """Shorthand like 'expexp:a=1,c=3', or a path to a JSON source document."""
    path = Path(text)
    if path.suffix == ".json" or path.exists():
        with open(path) as fh:
            return corpus_mod.source_from_doc(json.load(fh))
    return corpus_mod.parse_shorthand(text)


def _parse_grid(text: str) -> GridSpec:
    """sigma grid syntax: 'min:max:count' with optional ':log'."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise SpecFormatError(f"grid '{text}' must be min:max:count[:log|:linear]")
    spacing = parts[3] if len(parts) == 4 else "linear"
    try:
        return GridSpec(float(parts[0]), float(parts[1]), int(parts[2]), spacing)
    except ValueError as exc:
        raise SpecFormatError(f"bad grid '{text}': {exc}") from exc


def _emit(doc, args) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if getattr(args, "output", None):
        Path(args.output).write_text(text + "\n")
    else:
        print(text)


def _config_from_args(args) -> EstimatorConfig:
    if getattr(args, "window", None) is not None:
        return replace(DEFAULT_CONFIG, window_fraction=args.window)
    return DEFAULT_CONFIG


def _cache_dir(args):
    if getattr(args, "cache_dir", None):
        return Path(args.cache_dir)
    env = os.environ.get("RITTGROWTH_CACHE_DIR")
    return Path(env) if env else None


def cmd_validate(args) -> int:
    path = Path(args.spec)
    if path.suffix == ".json" or path.exists():
        with open(path) as fh:
            spec = series_mod.spec_from_json(json.load(fh))
    else:
        entry = _load_source_arg(args.spec)
        if entry.family != "expexp":
            raise SpecFormatError("validate applies to series sources; profiles have no coefficients")
        spec = series_mod.expexp_spec(entry.params["a"], entry.params["c"])
    report = series_mod.validate(spec, args.nmax)
    _emit({
        "spec": spec.describe(), "n_checked": report.n_checked,
        "monotone_ok": report.monotone_ok, "d_estimate": report.d_estimate,
        "coeff_decay_trend": report.coeff_decay_trend,
        "verdict": report.verdict, "cause": report.cause,
    }, args)
    return EXIT_OK if report.verdict != "fail" else EXIT_NUMERIC


def cmd_profile(args) -> int:
    entry = _load_source_arg(args.spec)
    bundle = entry.bundle()
    source = bundle.upper if args.surrogate == "upper" else bundle.lower_or_upper
    grid = _parse_grid(args.sigma)
    profile = load_or_sample(source, grid, _cache_dir(args))
    if args.format == "csv":
        lines = ["sigma,level,mantissa"]
        lines += [f"{s!r},{v.level},{v.mantissa!r}" for s, v in zip(profile.sigmas, profile.values)]
        text = "\n".join(lines) + "\n"
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
    else:
        _emit({
            "source": profile.source, "grid": grid.describe(),
            "samples": [
                {"sigma": s, "level": v.level, "mantissa": v.mantissa}
                for s, v in zip(profile.sigmas, profile.values)
            ],
        }, args)
    return EXIT_OK


def cmd_indicator(args) -> int:
    entry = _load_source_arg(args.spec)
    bundle = entry.bundle()
    grid = _parse_grid(args.sigma)
    cfg = _config_from_args(args)
    rho, lam = order_pair(bundle, args.p, args.q, grid, cfg)
    estimates = [rho, lam]
    if args.kind in ("type", "all"):
        d, db = type_pair(bundle, args.p, args.q, rho.value, grid, cfg)
        estimates += [d, db]
    if args.kind in ("weak-type", "all"):
        tb, t = weak_type_pair(bundle, args.p, args.q, lam.value, grid, cfg)
        estimates += [tb, t]
    if args.plot_data:
        from .indicators import ratio_sequence
        from .growth import sample_profile
        prof = sample_profile(bundle.upper, grid)
        seq = ratio_sequence(list(zip(prof.sigmas, prof.values)), "order", args.p, args.q)
        lines = [f"{pt.sigma!r} {pt.ratio!r}" for pt in seq.points]
        Path(args.plot_data).write_text("\n".join(lines) + "\n")
    _emit({
        "source": entry.id,
        "grid": grid.describe(),
        "estimates": [e.to_json(grid) for e in estimates],
    }, args)
    return EXIT_OK


def cmd_relative(args) -> int:
    f_entry = _load_source_arg(args.f_spec)
    g_entry = _load_source_arg(args.g_spec)
    grid = _parse_grid(args.sigma)
    cfg = _config_from_args(args)
    rel = relative_indicators(f_entry.bundle(fast=True), g_entry.bundle(fast=True),
                              args.p, args.q, grid, cfg, form=args.form)
    _emit({
        "f": f_entry.id, "g": g_entry.id, "form": rel.form, "grid": grid.describe(),
        "estimates": {k: e.to_json(grid) for k, e in rel.by_kind().items()},
        "notes": list(rel.notes),
    }, args)
    return EXIT_OK


def cmd_detect(args) -> int:
    entry = _load_source_arg(args.spec)
    grid = _parse_grid(args.sigma) if args.sigma else None
    cfg = _config_from_args(args)
    if args.g_spec:
        g_entry = _load_source_arg(args.g_spec)
        result = detect_relative_index_pair(entry.bundle(fast=True), g_entry.bundle(fast=True),
                                            args.m, args.p_max, args.q_max, grid, cfg)
    else:
        result = detect_index_pair(entry.bundle(), args.p_max, args.q_max, grid, cfg)
    _emit({
        "source": entry.id,
        "pair": {"p": result.pair.p, "q": result.pair.q},
        "order": result.order.to_json(),
        "evidence": [
            {"p": p, "q": q, "order": (v if v == v else "nan")}
            for p, q, v in result.evidence
        ],
    }, args)
    return EXIT_OK


def cmd_check(args) -> int:
    with open(args.batch) as fh:
        doc = json.load(fh)
    instances = theorems_mod.load_batch(doc)
    if args.tol is not None:
        if not args.tol > 0:
            raise SpecFormatError("--tol must be positive")
        instances = [theorems_mod.TheoremInstance(
            i.theorem_id, i.f, i.g, i.h, i.m, i.p, i.q, args.tol, i.grid) for i in instances]
    reports = theorems_mod.run_batch(instances)
    failed = sum(1 for r in reports if r.verdict == "fail")
    vacuous = sum(1 for r in reports if r.verdict == "vacuous")
    _emit({
        "summary": {"instances": len(reports), "pass": len(reports) - failed - vacuous,
                    "vacuous": vacuous, "fail": failed},
        "reports": [r.to_json() for r in reports],
    }, args)
    if not args.quiet:
        for r in reports:
            print(f"{r.theorem_id:4s} f={r.subject['f']} g={r.subject['g']} "
                  f"h={r.subject['h']} -> {r.verdict}", file=sys.stderr)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def cmd_oracle(args) -> int:
    checked, violations = oracle_mod.sweep(args.instances, args.seed)
    _emit({"instances": args.instances, "seed": args.seed,
           "rules_checked": checked, "violations": violations}, args)
    return EXIT_OK if violations == 0 else EXIT_CHECK_FAILED


def cmd_corpus(args) -> int:
    if args.action == "list":
        _emit({"entries": [e.id for e in corpus_mod.default_entries()]}, args)
        return EXIT_OK
    if not args.id:
        raise SpecFormatError("corpus describe needs an entry id")
    entry = corpus_mod.parse_shorthand(args.id)
    _emit(entry.describe(), args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rittgrowth",
        description="Growth indicators of entire Dirichlet series and their inequality checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--output", help="write the JSON report here instead of stdout")
        p.add_argument("--cache-dir", help="profile cache directory (env RITTGROWTH_CACHE_DIR)")

    p = sub.add_parser("validate", help="check series convergence conditions at a truncation")
    p.add_argument("--spec", required=True)
    p.add_argument("--nmax", type=int, default=128)
    add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("profile", help="sample sigma -> log M(sigma)")
    p.add_argument("--spec", required=True)
    p.add_argument("--sigma", required=True, help="min:max:count[:log]")
    p.add_argument("--surrogate", choices=["upper", "lower"], default="upper")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    add_common(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("indicator", help="estimate order/type indicators")
    p.add_argument("--spec", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--kind", choices=["order", "type", "weak-type", "all"], default="order")
    p.add_argument("--window", type=float, help="tail window fraction")
    p.add_argument("--plot-data", help="write (sigma, ratio) columns for external plotting")
    add_common(p)
    p.set_defaults(func=cmd_indicator)

    p = sub.add_parser("relative", help="relative indicators of f with respect to g")
    p.add_argument("--f-spec", required=True)
    p.add_argument("--g-spec", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--form", choices=["direct", "dual"], default="direct")
    p.add_argument("--window", type=float)
    add_common(p)
    p.set_defaults(func=cmd_relative)

    p = sub.add_parser("detect", help="scan for the (relative) index-pair")
    p.add_argument("--spec", required=True)
    p.add_argument("--g-spec", help="detect relative pair against this source")
    p.add_argument("--m", type=int, default=0, help="shared first index for the b-threshold")
    p.add_argument("--p-max", type=int, default=4)
    p.add_argument("--q-max", type=int, default=4)
    p.add_argument("--sigma", help="min:max:count[:log]")
    p.add_argument("--window", type=float)
    add_common(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("check", help="run a theorem-instance batch")
    p.add_argument("--batch", required=True)
    p.add_argument("--tol", type=float, help="override every instance tolerance")
    p.add_argument("--quiet", action="store_true")
    add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", help="exact limsup/liminf difference-rule sweep")
    p.add_argument("--instances", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    add_common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("corpus", help="list or describe built-in families")
    p.add_argument("action", choices=["list", "describe"])
    p.add_argument("id", nargs="?")
    add_common(p)
    p.set_defaults(func=cmd_corpus)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except RittGrowthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
