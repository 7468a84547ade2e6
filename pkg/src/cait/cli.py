"""Command-line interface.

Exit codes: 0 when every check passes (or the networks are related), 1 for a
property failure or a negative verdict, 2 for usage, parse and budget errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .congruence import canon, structural_hash
from .errors import CaitError, IllFormed, ParseError, StateSpaceBudgetExceeded
from .explore import DEFAULT_BUDGET
from .frontend.parser import parse_model
from .frontend.printer import pretty_print, print_network, value_text

OK, FAIL, USAGE = 0, 1, 2


def _load(path: str):
    p = Path(path)
    if not p.exists():
        from .bundled import bundled_names, load_bundled
        if path in bundled_names():
            return load_bundled(path)
        raise FileNotFoundError(path)
    return parse_model(p.read_text())


def _emit(args, data: dict, lines: list):
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True, default=str))
    else:
        for line in lines:
            print(line)


# -- subcommands -------------------------------------------------------------------

def cmd_check(args) -> int:
    from .syntax import check_sanity, check_well_formed
    u, net = _load(args.file)
    problems = check_well_formed(net, u) + check_sanity(net, u)
    data = {"file": args.file, "nodes": len(net.nodes), "well_formed": not problems,
            "violations": [str(v) for v in problems], "hash": structural_hash(net)}
    lines = [f"{args.file}: {len(net.nodes)} node(s), hash {data['hash']}"]
    lines += [f"  {v}" for v in problems] or ["  well-formed"]
    _emit(args, data, lines)
    return FAIL if problems else OK


def _sensor_updates(net, u):
    from .reduction import update_sensor
    out = []
    for n in net.nodes:
        for s, cur in n.iface.sensors:
            for v in u.sensor_domain(s):
                if v != cur:
                    out.append((f"{s}@{n.location}:={value_text(v)}",
                                update_sensor(net, s, n.location, v, u)))
    return out


def cmd_reduce(args) -> int:
    from .reduction import reductions
    u, net = _load(args.file)
    cur = canon(net)
    reductions(cur, u)   # validates
    steps = []
    print(f"start :: {structural_hash(cur)}")
    if args.show:
        print(print_network(cur))
    for _ in range(args.steps):
        options = [(l.render(), m) for l, m in reductions(cur, u, check=False)]
        if args.interactive:
            options += _sensor_updates(cur, u)
            if not options:
                print("no moves")
                break
            for i, (lab, m) in enumerate(options):
                print(f"  [{i}] {lab} :: {structural_hash(m)}")
            choice = input("choice (q to stop): ").strip()
            if choice in ("q", ""):
                break
            try:
                lab, cur = options[int(choice)]
            except (ValueError, IndexError):
                print("not an option")
                continue
        else:
            if not options:
                print("no reductions")
                break
            lab, cur = options[0]
        steps.append(lab)
        if args.trace or args.interactive:
            print(f"{lab} :: {structural_hash(cur)}")
        if args.show:
            print(print_network(cur))
    if not args.trace and not args.interactive:
        print(f"{len(steps)} step(s): {' '.join(steps) or '-'}")
        print(print_network(cur))
    return OK


def cmd_lts(args) -> int:
    from .lts import build_lts
    u, net = _load(args.file)
    ts = build_lts(net, u, args.mode, args.budget, workers=args.workers)
    if args.export == "graph":
        sys.stdout.write(ts.export_graph())
    elif args.export == "dot":
        sys.stdout.write(ts.export_dot(label_states=args.label_states))
    else:
        _emit(args, {"mode": args.mode, "states": ts.n_states, "transitions": ts.n_edges},
              [f"{args.mode} LTS: {ts.n_states} states, {ts.n_edges} transitions"])
    return OK


def cmd_bisim(args) -> int:
    from .equivalence import weak_bisimilar
    ua, a = _load(args.left)
    ub, b = _load(args.right)
    v = weak_bisimilar(a, b, ua, args.budget, u_right=ub)
    data = {"verdict": v.result, "stats": v.stats,
            "witness": [{"side": s, "label": l.render()} for s, l in v.witness]}
    lines = [f"verdict: {v.result}"]
    if v.witness:
        lines.append("distinguishing moves:")
        lines += [f"  {s}: {l.render()}" for s, l in v.witness]
    lines.append("stats: " + ", ".join(f"{k}={val}" for k, val in sorted(v.stats.items())))
    _emit(args, data, lines)
    return OK if v.bisimilar else FAIL


def cmd_expand(args) -> int:
    from .equivalence import expands
    ua, a = _load(args.big)
    ub, b = _load(args.small)
    ok = expands(a, b, ua, args.budget, u_small=ub)
    _emit(args, {"expands": ok}, [f"{args.big} {'expands' if ok else 'does not expand'} {args.small}"])
    return OK if ok else FAIL


def _report_lines(r) -> list:
    lines = [r.summary()]
    for k, val in sorted(r.details.items()):
        lines.append(f"  {k}: {val}")
    for m, why in r.counterexamples[:10]:
        lines.append(f"  counterexample {structural_hash(m)}: {why}")
    if len(r.counterexamples) > 10:
        lines.append(f"  ... {len(r.counterexamples) - 10} more")
    return lines


def _report_data(r) -> dict:
    return {"property": r.property, "ok": r.ok, "states": r.states, "details": r.details,
            "counterexamples": [{"state": structural_hash(m), "why": why}
                                for m, why in r.counterexamples]}


def cmd_props(args) -> int:
    from .meta import check_harmony, check_time_properties, rd_bound
    u, net = _load(args.file)
    pick_all = not (args.harmony or args.time or args.bound)
    reports, lines, data = [], [], {}
    if args.time or pick_all:
        reports.append(check_time_properties(net, u, args.budget))
    if args.harmony or pick_all:
        reports.append(check_harmony(net, u, args.budget))
    for r in reports:
        lines += _report_lines(r)
        data[r.property] = _report_data(r)
    if args.bound or pick_all:
        rd = rd_bound(canon(net))
        lines.append(f"rd bound: {rd}")
        data["rd"] = rd
    _emit(args, data, lines)
    return OK if all(r.ok for r in reports) else FAIL


def cmd_laws(args) -> int:
    from .laws import check_algebraic_laws
    rep = check_algebraic_laws()
    lines = [f"{'law':>3}  {'relation':<12} {'side cond.':<10} {'result':<6} description"]
    for c in rep.checks:
        cond = "holds" if c.expected else "broken"
        lines.append(f"{c.law:>3}  {c.relation:<12} {cond:<10} {'ok' if c.ok else 'FAIL':<6} "
                     f"{c.description}")
    data = {"ok": rep.ok, "checks": [c.__dict__ | {"ok": c.ok} for c in rep.checks]}
    _emit(args, data, lines)
    return OK if rep.ok else FAIL


def cmd_smart_home(args) -> int:
    from .meta import check_harmony, check_time_properties
    from .models import ScenarioConfig, check_runtime_properties, check_system_equality, smart_home
    cfg = ScenarioConfig(variant=args.variant, theta=args.theta, delta=args.delta,
                         temps=tuple(args.temps) if args.temps else ScenarioConfig.temps)
    if args.print:
        u, net = smart_home(cfg)
        sys.stdout.write(pretty_print(net, u))
        return OK
    if args.check == "props":
        u, net = smart_home(cfg)
        reports = [check_runtime_properties(cfg, args.budget),
                   check_time_properties(net, u, args.budget),
                   check_harmony(net, u, args.budget)]
        lines = [f"smart home, {args.variant} variant"]
        for r in reports:
            lines += _report_lines(r)
        _emit(args, {r.property: _report_data(r) for r in reports}, lines)
        return OK if all(r.ok for r in reports) else FAIL
    res = check_system_equality(cfg, args.budget, full=args.full)
    lines = [f"light subsystems: {res.lights.result} ({res.lights.stats['blocks']} blocks)"]
    data = {"lights": {"verdict": res.lights.result, "stats": res.lights.stats}}
    if res.full is not None:
        lines.append(f"full systems: {res.full.result} ({res.full.stats['blocks']} blocks)")
        data["full"] = {"verdict": res.full.result, "stats": res.full.stats}
    lines += res.notes
    _emit(args, data, lines)
    return OK if res.bisimilar else FAIL


# -- argument parsing -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cait", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    def budget(p):
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="state budget")

    p = sub.add_parser("check", parents=[common], help="parse and check well-formedness")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reduce", parents=[common], help="run reductions")
    p.add_argument("file")
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--trace", action="store_true", help="print '<label> :: <hash>' per step")
    p.add_argument("--show", action="store_true", help="pretty-print every state")
    p.add_argument("--interactive", action="store_true", help="choose each step at a prompt")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("lts", parents=[common], help="build the labelled transition system")
    p.add_argument("file")
    p.add_argument("--mode", choices=["intensional", "extensional"], default="extensional")
    p.add_argument("--export", choices=["graph", "dot"])
    p.add_argument("--label-states", action="store_true", help="dot: print states in nodes")
    p.add_argument("--workers", type=int, default=1)
    budget(p)
    p.set_defaults(func=cmd_lts)

    p = sub.add_parser("bisim", parents=[common], help="decide weak bisimilarity")
    p.add_argument("left")
    p.add_argument("right")
    budget(p)
    p.set_defaults(func=cmd_bisim)

    p = sub.add_parser("expand", parents=[common], help="check that BIG expands SMALL")
    p.add_argument("big")
    p.add_argument("small")
    budget(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("props", parents=[common], help="time properties, harmony and the rd bound")
    p.add_argument("file")
    p.add_argument("--harmony", action="store_true")
    p.add_argument("--time", action="store_true")
    p.add_argument("--bound", action="store_true")
    budget(p)
    p.set_defaults(func=cmd_props)

    p = sub.add_parser("laws", parents=[common], help="check the algebraic law instances")
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("smart-home", parents=[common], help="smart-home case study")
    p.add_argument("--variant", choices=["proximity", "gps"], default="proximity")
    p.add_argument("--check", choices=["props", "equiv"], default="props")
    p.add_argument("--theta", type=int, default=20)
    p.add_argument("--temps", type=int, nargs="+")
    p.add_argument("--delta", type=int, default=1)
    p.add_argument("--full", action="store_true", help="equiv: also compare the full systems")
    p.add_argument("--print", action="store_true", help="print the model and exit")
    budget(p)
    p.set_defaults(func=cmd_smart_home)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return USAGE
    except StateSpaceBudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return USAGE
    except IllFormed as e:
        print(f"ill-formed: {e}", file=sys.stderr)
        return FAIL
    except FileNotFoundError as e:
        print(f"no such file or bundled model: {e}", file=sys.stderr)
        return USAGE
    except CaitError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
