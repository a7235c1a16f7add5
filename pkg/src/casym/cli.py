"""Command-line front end.

Exit codes: 0 success, 1 assertion/suite failure, 2 parse error,
3 budget exceeded.  All output is deterministic; CA_BUDGET_CELLS overrides
the enumeration budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import analysis, fsquad, render, verify
from .budgets import Budget, BudgetExceeded, DEFAULT_ENUM, DEFAULT_STATES
from .configs import PeriodicConfig, PresentedConfig
from .constructions import add_spreading, build_delta, build_tilde
from .euclid import lift_euclidean
from .fsquad import HistoryDiagram, fs_rule, lattice_presented, simulate
from .recognizer import classify_config, cross_check, recognize_word
from .rules import load_rule, serialize_rule


def make_budget(args) -> Budget:
    cells = getattr(args, "budget_cells", None)
    if cells is None:
        cells = os.environ.get("CA_BUDGET_CELLS")
    states = getattr(args, "budget_states", None)
    return Budget(int(cells) if cells else DEFAULT_ENUM,
                  int(states) if states else DEFAULT_STATES)


def parse_config(rule, args) -> PresentedConfig:
    alph = rule.alphabet
    if args.periodic is not None:
        p = alph.parse_word(args.periodic)
        return PresentedConfig(alph, p, (), p)
    left, center, right = args.presented
    return PresentedConfig.from_text(alph, left, center, right)


def _emit(args, text=None, data=None):
    if data is not None:
        out = sys.stdout.buffer if args.out is None else open(args.out, "wb")
        out.write(data)
        if args.out is not None:
            out.close()
        return
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)


def cmd_simulate(args):
    rule = load_rule(args.rule)
    cfg = parse_config(rule, args)
    orbit, first_k, first_g = simulate(cfg, args.steps, rule)
    span = max(len(cfg.center) + 2 * len(cfg.left), len(cfg.right) * 2, 8)
    lo = cfg.origin - span
    hi = cfg.origin + len(cfg.center) + span
    rows = render.orbit_rows(orbit, lo, hi)
    print(f"steps={args.steps} first_kappa={first_k} first_gamma={first_g}")
    if args.render == "ascii":
        _emit(args, text=render.ascii_rows(rule.alphabet, rows))
    elif args.render == "pgm":
        _emit(args, data=render.pgm_bytes(rule.alphabet, rows))
    return 0


def cmd_build(args):
    if args.kind == "tilde":
        rule = build_tilde(load_rule(args.base))
    elif args.kind == "spread":
        rule = add_spreading(load_rule(args.base), args.symbol)
    else:
        base = load_rule(args.base)
        squad = load_rule(args.squad)
        rule = build_delta(base, args.zero, squad, args.kappa, args.gamma)
    _emit(args, text=serialize_rule(rule))
    return 0


def cmd_trace(args):
    rule = load_rule(args.rule)
    budget = make_budget(args)
    if args.two_approx:
        graph = analysis.two_approx(rule, args.k, budget)
        _emit(args, text=graph.to_text(rule.alphabet))
        return 0
    if args.check_sft2:
        ok, witness = analysis.check_sft_order2(rule, args.k, args.T, budget)
        print(f"check=order2 k={args.k} T={args.T} result={'PASS' if ok else 'FAIL'}")
        if witness is not None:
            print(f"witness={witness}")
        return 0 if ok else 1
    traces = analysis.trace_prefixes(rule, args.k, args.T, budget)
    lines = [f"k={args.k} T={args.T} count={len(traces)}"]
    for col in sorted(traces):
        lines.append(" / ".join(rule.alphabet.format_word(row, sep=" ") for row in col))
    _emit(args, text="\n".join(lines) + "\n")
    return 0


def cmd_limit(args):
    rule = load_rule(args.rule)
    budget = make_budget(args)
    chain, report = analysis.limit_language(rule, args.n, args.t_max, budget)
    print(f"n={args.n} t_max={args.t_max} "
          f"last_strict_decrease={report['last_strict_decrease']} "
          f"stable_steps={report['stable_steps']} final_size={report['final_size']}")
    _emit(args, text=chain[-1].to_text(rule.alphabet))
    return 0


def cmd_fs(args):
    rule = fs_rule()
    if args.action == "rule":
        _emit(args, text=serialize_rule(rule))
        return 0
    cfg = lattice_presented(args.spacing)
    steps = args.steps or (fsquad.fire_time(args.spacing)
                           if (args.spacing + 1) & args.spacing == 0 else 3 * args.spacing)
    orbit, first_k, first_g = simulate(cfg, steps, rule)
    if args.action == "simulate":
        span = 2 * (args.spacing + 1)
        rows = render.orbit_rows(orbit, -span, span + 1)
        print(f"spacing={args.spacing} steps={steps} "
              f"first_kappa={first_k} first_gamma={first_g}")
        if args.render == "pgm":
            _emit(args, data=render.pgm_bytes(rule.alphabet, rows))
        else:
            _emit(args, text=render.ascii_rows(rule.alphabet, rows))
        return 0
    # euclid: lift the clean part of the orbit over one period window
    depth = first_g if first_g is not None else len(orbit) - 1
    span = args.spacing + 1
    rows = render.orbit_rows(orbit[:depth], -span, span + 1)
    diagram = HistoryDiagram.from_orbit(rows)
    euclid = lift_euclidean(diagram)
    _emit(args, text=euclid.to_svg())
    return 0


def cmd_xs_recognize(args):
    rule = fs_rule()
    ok, label = recognize_word(args.word, rule)
    print(f"word={args.word!r} accepted={ok} case={label.value if label else 'none'}")
    return 0 if ok else 1


def cmd_xs_classify(args):
    rule = fs_rule()
    cfg = PresentedConfig.from_text(rule.alphabet, args.left, args.center, args.right)
    ok, label, note = classify_config(cfg, rule)
    print(f"config={cfg} accepted={ok} case={label.value if label else 'none'}"
          + (f" note={note!r}" if note else ""))
    return 0 if ok else 1


def cmd_xs_crosscheck(args):
    rule = fs_rule()
    rep = cross_check(args.max_len, args.depth, rule, make_budget(args))
    for k, v in rep["counts"].items():
        print(f"{k}={v}")
    for w in rep["failures"]:
        print(f"soundness_failure={rule.alphabet.format_word(w, sep=' ')}")
    return 0 if not rep["failures"] else 1


def cmd_verify(args):
    budget = make_budget(args)
    fn = verify.SUITES[args.suite]
    ok, records = fn(budget=budget)
    if args.json:
        print(json.dumps({"suite": args.suite, "ok": ok, "records": records}))
    else:
        for rec in records:
            print(" ".join(f"{k}={v}" for k, v in rec.items()))
        print(f"suite={args.suite} result={'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="casym",
                                description="cellular-automata symbolic dynamics toolkit")
    p.add_argument("--budget-cells", type=int, help="max enumeration count")
    p.add_argument("--budget-states", type=int, help="max automaton states")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("simulate", help="run a rule on a configuration")
    s.add_argument("--rule", required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--periodic", help="period word (glyphs or names)")
    g.add_argument("--presented", nargs=3, metavar=("LEFT", "CENTER", "RIGHT"))
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--render", choices=("ascii", "pgm", "none"), default="ascii")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_simulate)

    s = sub.add_parser("build", help="emit a constructed rule file")
    s.add_argument("kind", choices=("tilde", "delta", "spread"))
    s.add_argument("--base", required=True)
    s.add_argument("--symbol", default="⊥", help="spreading symbol for `spread`")
    s.add_argument("--zero", default="⊥", help="spreading symbol of the base for `delta`")
    s.add_argument("--squad", default="fs")
    s.add_argument("--kappa", default="κ")
    s.add_argument("--gamma", default="γ")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_build)

    s = sub.add_parser("trace", help="column prefixes and 2-approximation")
    s.add_argument("--rule", required=True)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--T", type=int, default=3)
    s.add_argument("--two-approx", action="store_true")
    s.add_argument("--check-sft2", action="store_true")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_trace)

    s = sub.add_parser("limit", help="image-language chain")
    s.add_argument("--rule", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--t-max", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_limit)

    s = sub.add_parser("fs", help="the shipped synchronizer")
    s.add_argument("action", choices=("rule", "simulate", "euclid"))
    s.add_argument("--spacing", type=int, default=3)
    s.add_argument("--steps", type=int)
    s.add_argument("--render", choices=("ascii", "pgm"), default="ascii")
    s.add_argument("--out")
    s.set_defaults(fn=cmd_fs)

    s = sub.add_parser("xs", help="clean-history membership")
    xsub = s.add_subparsers(dest="action", required=True)
    r = xsub.add_parser("recognize")
    r.add_argument("word")
    r.set_defaults(fn=cmd_xs_recognize)
    c = xsub.add_parser("classify")
    c.add_argument("left")
    c.add_argument("center")
    c.add_argument("right")
    c.set_defaults(fn=cmd_xs_classify)
    x = xsub.add_parser("crosscheck")
    x.add_argument("--max-len", type=int, default=2)
    x.add_argument("--depth", type=int, default=4)
    x.set_defaults(fn=cmd_xs_crosscheck)

    s = sub.add_parser("verify", help="run a verification suite")
    s.add_argument("suite", choices=sorted(verify.SUITES))
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceeded as e:
        print(f"error=budget {e}", file=sys.stderr)
        return 3
    except (ValueError, KeyError) as e:
        print(f"error=parse {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
