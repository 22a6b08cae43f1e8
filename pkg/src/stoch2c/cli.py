"""Command line entry point: ``stoch2c <command> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction

from . import experiments as ex
from .complex import ComplexError, f_vector, mu
from .domains import DomainError, domain_space, verify_lemma_01, verify_prop_u
from .embedding import (SearchBudgetExceeded, count_embeddings, embedding_probability_upper_bound,
                        find_embedding, threshold_margin, torus_7, torus_union_bound)
from .minimize import DEFAULT_BUDGET
from .model import ProbabilityTriple, enumerate_distribution, sample_Y
from .s2c import S2CFormatError, dump, dumps, load
from .subdivision import subdivide_k


class CliError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"probability {text} outside [0, 1]")
    return value


def _triple(text: str):
    try:
        return ex.parse_triple(text)
    except ex.ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt_mu(value) -> str:
    return "undefined" if value is None else str(value)


# -- commands --------------------------------------------------------------

def cmd_sample(args) -> None:
    y = sample_Y(args.n, (args.p0, args.p1, args.p2), args.seed)
    if args.out:
        dump(y, args.out)
    else:
        sys.stdout.write(dumps(y))


def cmd_exact_dist(args) -> None:
    if args.n not in (3, 4):
        raise CliError("exact-dist supports n = 3 or 4")
    dist = enumerate_distribution(args.n, ProbabilityTriple(args.p0, args.p1, args.p2))
    lines = sorted(f"{y.canonical_string()}\t{w}" for y, w in dist.items())
    sys.stdout.write("".join(line + "\n" for line in lines))


def cmd_subdivide(args) -> None:
    sub = subdivide_k(load(args.input), args.k)
    dump(sub.complex, args.out)


def cmd_fvector(args) -> None:
    c = load(args.input)
    if args.k:
        c = subdivide_k(c, args.k).complex
    f = f_vector(c)
    sys.stdout.write(f"{f.f0} {f.f1} {f.f2}\nmu1 {_fmt_mu(mu(c, 1))}\nmu2 {_fmt_mu(mu(c, 2))}\n")


def cmd_verify_domains(args) -> None:
    kw = dict(samples=args.samples, seed=args.seed, allow_large=args.allow_large)
    if args.check == "lemma01":
        rep = verify_lemma_01(args.k, args.type, args.mode, **kw)
    else:
        rep = verify_prop_u(args.k, args.type, args.mode, **kw)
    sys.stdout.write(rep.verdict() + "\n")
    if args.dump and rep.examples:
        space = domain_space(args.k, args.type)
        for mask in rep.examples:
            removed = " ".join("{" + ",".join(map(str, s)) + "}"
                               for s in space.removed_simplices(mask))
            sys.stdout.write(f"counterexample removed: {removed}\n")
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "type", "check", "mode", "domains_checked", "counterexamples", "min_mu_found"])
        w.writerow([rep.k, rep.d, rep.check, rep.mode, rep.checked, rep.counterexamples,
                    "" if rep.min_mu is None else rep.min_mu])
        _write(ex.CSV_VERSION + "\n" + buf.getvalue(), None if args.csv == "-" else args.csv)


def cmd_embed(args) -> None:
    source, host = load(args.source), load(args.host)
    try:
        if args.count:
            sys.stdout.write(f"{count_embeddings(source, host, args.budget)}\n")
            return
        emb = find_embedding(source, host, args.budget)
    except SearchBudgetExceeded:
        sys.stdout.write("unknown\n")
        return
    if emb is None:
        sys.stdout.write("none\n")
        return
    sys.stdout.write("embedded\n")
    for v in sorted(emb.assignment):
        sys.stdout.write(f"{v} -> {emb.assignment[v]}\n")


def cmd_torus_bound(args) -> None:
    p = (args.p0, args.p1, args.p2)
    lines = []
    if args.epsilon is None:
        lines.append(f"margin {threshold_margin(args.n, p)!r}")
    else:
        m, m_eps = threshold_margin(args.n, p, args.epsilon)
        lines += [f"margin {m!r}", f"margin_epsilon {m_eps!r}"]
    lines.append(f"triangulation_bound {embedding_probability_upper_bound(torus_7(), args.n, p)!r}")
    u = torus_union_bound(args.n, p, args.c)
    lines.append("union_bound diverged" if u == float("inf") else f"union_bound {u!r}")
    sys.stdout.write("\n".join(lines) + "\n")


_CONFIG_FLAGS = ("n_values", "p_values", "alphas", "source", "k", "trials", "seed",
                 "budget", "count", "verbose", "out", "timing")


def _config(args, **extra) -> ex.ExperimentConfig:
    values = {}
    for name in _CONFIG_FLAGS:
        v = getattr(args, name, None)
        if v not in (None, False, []):
            values[name] = tuple(v) if isinstance(v, list) else v
    values.update({k: v for k, v in extra.items() if v is not None})
    if args.config:
        return ex.load_config(args.config, **values)
    return ex.ExperimentConfig(**values)


def cmd_mc_sweep(args) -> None:
    cfg = _config(args)
    _write(ex.run_mc_sweep(cfg), cfg.out)


def cmd_expect_check(args) -> None:
    cfg = _config(args)
    _write(ex.run_expectation_check(cfg), cfg.out)


def cmd_mu_study(args) -> None:
    cfg_source = args.source
    if cfg_source in ex.BUILTIN_SOURCES:
        source = ex.BUILTIN_SOURCES[cfg_source]()
    else:
        source = load(cfg_source)
    text = ex.run_mu_study(source, args.k, budget=args.budget, samples=args.samples,
                           seed=args.seed, label=cfg_source)
    _write(text, args.out)


def cmd_threshold_table(args) -> None:
    alphas = ex.alpha_grid(args.alpha_grid) if args.alpha_grid else None
    cfg = _config(args, alphas=alphas)
    _write(ex.emit_threshold_table(cfg, mc=args.mc), cfg.out)


# -- parser ----------------------------------------------------------------

def _add_p(sp, conv):
    for name in ("p0", "p1", "p2"):
        sp.add_argument(f"--{name}", type=conv, required=True)


def _add_experiment_flags(sp, schedule: bool = True) -> None:
    sp.add_argument("--config", help="key = value file; flags override it")
    sp.add_argument("--n", dest="n_values", type=int, nargs="+")
    if schedule:
        sp.add_argument("--p", dest="p_values", type=_triple, action="append",
                        help="explicit p0,p1,p2 (repeatable)")
    sp.add_argument("--alpha", dest="alphas", type=_triple, action="append",
                    help="exponents a0,a1,a2 with p_i = n^-a_i (repeatable)")
    sp.add_argument("--source", help="builtin (torus7, triangle, edge, tetrahedron) or .s2c path")
    sp.add_argument("--k", type=int, help="subdivision depth applied to the source")
    sp.add_argument("--trials", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--budget", type=int, help="node budget per search")
    sp.add_argument("--out")
    sp.add_argument("--timing", help="write wall times here (kept out of the CSV)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stoch2c", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="draw one complex from the lower model")
    sp.add_argument("--n", type=int, required=True)
    _add_p(sp, _probability)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("exact-dist", help="exact law of the sample for n = 3, 4")
    sp.add_argument("--n", type=int, required=True)
    _add_p(sp, _fraction)
    sp.set_defaults(func=cmd_exact_dist)

    sp = sub.add_parser("subdivide", help="k-th subdivision of a complex")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_subdivide)

    sp = sub.add_parser("fvector", help="f-vector and exact mu ratios")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--k", type=int, default=0)
    sp.set_defaults(func=cmd_fvector)

    sp = sub.add_parser("verify-domains", help="check mu bounds over domains of V_k")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--type", type=int, choices=(1, 2), required=True)
    sp.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    sp.add_argument("--check", choices=("lemma01", "prop-u"), default="lemma01")
    sp.add_argument("--samples", type=int, default=10**6)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--allow-large", action="store_true")
    sp.add_argument("--dump", action="store_true", help="list removed sets of counterexamples")
    sp.add_argument("--csv", help="CSV summary path ('-' for stdout)")
    sp.set_defaults(func=cmd_verify_domains)

    sp = sub.add_parser("embed", help="search or count simplicial embeddings")
    sp.add_argument("--source", required=True)
    sp.add_argument("--host", required=True)
    sp.add_argument("--count", action="store_true")
    sp.add_argument("--budget", type=int)
    sp.set_defaults(func=cmd_embed)

    sp = sub.add_parser("torus-bound", help="threshold margin and torus union bound")
    sp.add_argument("--n", type=int, required=True)
    _add_p(sp, _probability)
    sp.add_argument("--c", type=float, default=1.0)
    sp.add_argument("--epsilon", type=float)
    sp.set_defaults(func=cmd_torus_bound)

    sp = sub.add_parser("mc-sweep", help="embedding frequency over (n, p) cells")
    _add_experiment_flags(sp)
    sp.add_argument("--count", action="store_true", help="record embedding counts")
    sp.add_argument("--verbose", action="store_true", help="add one row per trial")
    sp.set_defaults(func=cmd_mc_sweep)

    sp = sub.add_parser("expect-check", help="mean embedding count against its expectation")
    _add_experiment_flags(sp)
    sp.set_defaults(func=cmd_expect_check)

    sp = sub.add_parser("mu-study", help="minimum mu ratios over subdivisions")
    sp.add_argument("--source", required=True)
    sp.add_argument("--k", type=int, nargs="+", required=True)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_mu_study)

    sp = sub.add_parser("threshold-table", help="margin over an alpha grid")
    _add_experiment_flags(sp, schedule=False)
    sp.add_argument("--alpha-grid", type=int, help="grid with entries j/STEPS, j = 0..STEPS")
    sp.add_argument("--mc", action="store_true", help="attach Monte Carlo frequencies")
    sp.set_defaults(func=cmd_threshold_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (CliError, ex.ConfigError, ComplexError, S2CFormatError, DomainError, ValueError, OSError) as exc:
        print(f"stoch2c {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
