"""Command-line front end.

Exit codes: 0 success, 1 argument or battery failure, 2 invalid parameters,
3 size-cap breach.  Every stochastic subcommand requires a seed and derives
per-sample child seeds as ``seed * 0x9E3779B97F4A7C15 + index`` (mod 2**63),
so identical invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import battery as battery_mod
from .dependence import (
    classify_skeleton,
    global_markov_check,
    skeleton,
)
from .estimation import (
    ClassDistribution,
    ErgmSpec,
    FAMILIES,
    degree_collision_classes,
    dissociated_mle,
    ergm_eval,
    ergm_fit,
    ergm_stats,
    exch_mle,
)
from .extendability import dissociated_extendable_check, extendable_check
from .genmodels import (
    BetaSpec,
    Graphon,
    MixingSpec,
    beta_sample,
    er_joint,
    graphon_sample,
    graphon_z,
    marginal_beta_sample,
    parse_graphon_name,
    parse_graphon_text,
)
from .graphs import (
    InvalidNetworkError,
    LabeledNetwork,
    SizeCapError,
    class_from_key,
    degree_distribution,
    dyads,
    format_edge_list,
    parse_edge_list,
)
from .mobius import InvalidParametersError
from .serialize import (
    depgraph_from_json,
    depgraph_to_json,
    dump_json,
    extend_report_to_json,
    fit_report_to_json,
    joint_from_json,
    mobius_from_json,
    mobius_to_json,
)

SEED_MIX = 0x9E3779B97F4A7C15


def child_seed(seed: int, index: int) -> int:
    return (seed * SEED_MIX + index) % (1 << 63)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    p = _Parser(prog="exchnet", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("stats", help="subgraph counts and family statistics")
    sp.add_argument("edgelist", type=Path)
    sp.add_argument("--out", type=Path)

    sp = sub.add_parser("mle", help="exchangeable MLE of the class moments")
    sp.add_argument("edgelist", type=Path)
    sp.add_argument("--float", dest="as_float", action="store_true")
    sp.add_argument("--out", type=Path)

    sp = sub.add_parser("mle-dissociated", help="dissociated MLE")
    sp.add_argument("edgelist", type=Path)
    sp.add_argument("--restarts", type=int, default=32)
    sp.add_argument("--seed", type=int, default=20240)
    sp.add_argument("--out", type=Path)

    sp = sub.add_parser("fit", help="fit a statistic family")
    sp.add_argument("family", choices=sorted(FAMILIES))
    sp.add_argument("edgelist", type=Path)
    sp.add_argument("--out", type=Path)

    sp = sub.add_parser("eval", help="probability under given parameters")
    sp.add_argument("family", choices=sorted(FAMILIES))
    sp.add_argument("nu_json", type=Path)
    sp.add_argument("edgelist", type=Path)
    sp.add_argument("--out", type=Path)

    sp = sub.add_parser("markov", help="global Markov check of a joint table")
    sp.add_argument("joint_json", type=Path)
    sp.add_argument("dep_json", type=Path)
    sp.add_argument("--out", type=Path)

    sp = sub.add_parser("skeleton", help="dependence skeleton of a joint table")
    sp.add_argument("joint_json", type=Path)
    sp.add_argument("--out", type=Path)

    sp = sub.add_parser("extend", help="extendability feasibility")
    sp.add_argument("z_json", type=Path, nargs="?")
    sp.add_argument("--input", type=Path, help="alternative to the positional path")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--dissociated", action="store_true")
    sp.add_argument("--out", type=Path)

    sp = sub.add_parser("sample", help="seeded network samples as edge lists")
    sp.add_argument(
        "model", choices=["er", "beta", "marginal-beta", "graphon"]
    )
    sp.add_argument("--n", type=int)
    sp.add_argument("--p", type=float)
    sp.add_argument("--beta", type=str, help="comma-separated node propensities")
    sp.add_argument(
        "--mixing",
        type=str,
        help="point:b | two-point:ba,bb,w | gaussian:mu,sigma",
    )
    sp.add_argument("--phi", type=str, help="const:eta | product:logistic:mu,sigma | grid file")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--out", type=Path)

    sp = sub.add_parser("graphon-z", help="kernel moment of a class")
    sp.add_argument("phi", type=str)
    sp.add_argument("cls", type=str, help='class key such as "1-2,2-3"')
    sp.add_argument("--method", choices=["quadrature", "mc"], default="quadrature")
    sp.add_argument("--r", type=int, default=64)
    sp.add_argument("--samples", type=int, default=10000)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out", type=Path)

    sp = sub.add_parser("collisions", help="degree-distribution collisions")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out", type=Path)

    sp = sub.add_parser(
        "paper-examples", help="run the golden example battery"
    )
    sp.add_argument("--out", type=Path)

    return p


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _read_network(path: Path) -> LabeledNetwork:
    return parse_edge_list(path.read_text())


def _parse_mixing(spec: str) -> MixingSpec:
    kind, _, rest = spec.partition(":")
    if kind == "point":
        return MixingSpec.point_mass(float(rest))
    if kind == "two-point":
        ba, bb, w = (float(t) for t in rest.split(","))
        return MixingSpec.two_point(ba, bb, w)
    if kind == "gaussian":
        mu, sigma = (float(t) for t in rest.split(","))
        return MixingSpec.gaussian(mu, sigma, 1, 0)
    raise ValueError(f"unknown mixing spec {spec!r}")


def _parse_phi(spec: str) -> Graphon:
    if spec.startswith(("const:", "product:")):
        return parse_graphon_name(spec)
    return parse_graphon_text(Path(spec).read_text())


def _cmd_stats(args) -> int:
    x = _read_network(args.edgelist)
    sigma_map = {}
    from .counting import sigma
    from .graphs import enumerate_classes

    for u in enumerate_classes(x.n, True):
        sigma_map[u.key()] = sigma(u, x)
    families = {}
    for family in sorted(FAMILIES):
        spec = ErgmSpec(family, x.n)
        families[family] = {
            "names": spec.stat_names(),
            "values": list(ergm_stats(spec, x)),
        }
    out = {
        "n": x.n,
        "edges": [list(e) for e in x.sorted_edges()],
        "degree_distribution": list(degree_distribution(x).counts),
        "sigma": sigma_map,
        "families": families,
    }
    _emit(dump_json(out), args.out)
    return 0


def _cmd_mle(args) -> int:
    x = _read_network(args.edgelist)
    mv = exch_mle(x)
    if args.as_float:
        mv = mv.to_float()
    _emit(dump_json(mobius_to_json(mv)), args.out)
    return 0


def _cmd_mle_dissociated(args) -> int:
    x = _read_network(args.edgelist)
    rep = dissociated_mle(x, restarts=args.restarts, seed=args.seed)
    _emit(dump_json(fit_report_to_json(rep)), args.out)
    return 0


def _cmd_fit(args) -> int:
    x = _read_network(args.edgelist)
    rep = ergm_fit(ErgmSpec(args.family, x.n), x)
    _emit(dump_json(fit_report_to_json(rep)), args.out)
    return 0


def _cmd_eval(args) -> int:
    x = _read_network(args.edgelist)
    nu = json.loads(args.nu_json.read_text())["nu"]
    p = ergm_eval(ErgmSpec(args.family, x.n), nu, x)
    _emit(dump_json({"probability": p}), args.out)
    return 0


def _cmd_markov(args) -> int:
    jt = joint_from_json(json.loads(args.joint_json.read_text()))
    dep = depgraph_from_json(json.loads(args.dep_json.read_text()))
    res = global_markov_check(jt, dep)
    ce = None
    if res.counterexample:
        labels = [f"{i}-{j}" for i, j in dyads(jt.n)]

        def names(mask):
            return [labels[k] for k in range(len(labels)) if mask >> k & 1]

        a, b, s = res.counterexample
        ce = {"A": names(a), "B": names(b), "S": names(s)}
    _emit(dump_json({"markov": res.holds, "counterexample": ce}), args.out)
    return 0


def _cmd_skeleton(args) -> int:
    jt = joint_from_json(json.loads(args.joint_json.read_text()))
    sk = skeleton(jt)
    out = depgraph_to_json(sk)
    out["classification"] = classify_skeleton(sk)
    _emit(dump_json(out), args.out)
    return 0


def _cmd_extend(args) -> int:
    source = args.z_json if args.z_json is not None else args.input
    if source is None:
        raise ValueError("extend needs a moment file (positional or --input)")
    mv = mobius_from_json(json.loads(source.read_text()))
    if args.dissociated:
        rep = dissociated_extendable_check(mv, args.m)
    else:
        rep = extendable_check(mv, args.m)
    _emit(dump_json(extend_report_to_json(rep)), args.out)
    return 0


def _cmd_sample(args) -> int:
    blocks = []
    for k in range(args.count):
        seed = child_seed(args.seed, k)
        if args.model == "er":
            if args.n is None or args.p is None:
                raise ValueError("er sampling needs --n and --p")
            g = graphon_sample(Graphon.constant(args.p), args.n, seed)
        elif args.model == "beta":
            if not args.beta:
                raise ValueError("beta sampling needs --beta")
            spec = BetaSpec(tuple(float(t) for t in args.beta.split(",")))
            g = beta_sample(spec, seed)
        elif args.model == "marginal-beta":
            if args.n is None or not args.mixing:
                raise ValueError("marginal-beta sampling needs --n and --mixing")
            g = marginal_beta_sample(args.n, _parse_mixing(args.mixing), seed)
        else:
            if args.n is None or not args.phi:
                raise ValueError("graphon sampling needs --n and --phi")
            g = graphon_sample(_parse_phi(args.phi), args.n, seed)
        blocks.append(f"# sample {k}\n" + format_edge_list(g))
    _emit("\n".join(blocks), args.out)
    return 0


def _cmd_graphon_z(args) -> int:
    phi = _parse_phi(args.phi)
    u = class_from_key(args.cls)
    if args.method == "mc":
        if args.seed is None:
            raise ValueError("Monte Carlo moments need --seed")
        est = graphon_z(
            phi, u, method="mc", samples=args.samples, seed=args.seed
        )
    else:
        est = graphon_z(phi, u, method="quadrature", r=args.r)
    out = {
        "class": u.key(),
        "value": est.value,
        "error": est.error,
        "method": est.method,
    }
    _emit(dump_json(out), args.out)
    return 0


def _cmd_collisions(args) -> int:
    groups = degree_collision_classes(args.n)
    out = {
        "n": args.n,
        "groups": [
            {
                "degree_counts": list(
                    degree_distribution(g[0].padded(args.n)).counts
                ),
                "classes": [u.key() for u in g],
            }
            for g in groups
        ],
    }
    _emit(dump_json(out), args.out)
    return 0


def _cmd_battery(args) -> int:
    items = battery_mod.run_battery()
    lines = []
    failed = 0
    for item in items:
        tag = "PASS" if item.ok else "FAIL"
        suffix = f"  ({item.detail})" if item.detail else ""
        lines.append(f"{tag}  {item.name}{suffix}")
        if not item.ok:
            failed += 1
    lines.append(f"{len(items) - failed}/{len(items)} examples passed")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if failed == 0 else 1


_HANDLERS = {
    "stats": _cmd_stats,
    "mle": _cmd_mle,
    "mle-dissociated": _cmd_mle_dissociated,
    "fit": _cmd_fit,
    "eval": _cmd_eval,
    "markov": _cmd_markov,
    "skeleton": _cmd_skeleton,
    "extend": _cmd_extend,
    "sample": _cmd_sample,
    "graphon-z": _cmd_graphon_z,
    "collisions": _cmd_collisions,
    "paper-examples": _cmd_battery,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except SizeCapError as err:
        sys.stderr.write(f"size cap: {err}\n")
        return 3
    except (InvalidParametersError, InvalidNetworkError, ValueError) as err:
        sys.stderr.write(f"invalid parameters: {err}\n")
        return 2
    except OSError as err:
        sys.stderr.write(f"io error: {err}\n")
        return 1


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
