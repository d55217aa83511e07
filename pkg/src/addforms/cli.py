"""Command-line workbench: parse groups/subsets/systems/polynomials, dispatch
to the library, and emit deterministic JSON reports.

Exit codes: 0 all checks pass, 1 a checked inequality or identity failed
(witness in the report), 2 usage or parse error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import abelian, bounds, fourier, linform, polynomial, reduction
from .abelian import FiniteAbelianGroup, GroupSubset
from .errors import AddformsError, CapExceeded, ParseError
from .report import dump_json, make_report, rational_json

parse_group = abelian.parse_group
parse_subset = abelian.parse_subset
parse_system = linform.parse_system
parse_poly = polynomial.parse_poly

_EXHAUSTIVE_SUBSET_MAX_ORDER = 16
_EXHAUSTIVE_PAIR_MAX_ORDER = 8
_WITNESS_LIMIT = 10


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text!r}") from None


def _load_subset(args, group: FiniteAbelianGroup, name: str) -> GroupSubset:
    literal = getattr(args, name.replace("-", "_"), None)
    file_attr = getattr(args, f"{name}_file".replace("-", "_"), None)
    if literal is not None:
        return parse_subset(literal, group)
    if file_attr is not None:
        return abelian.parse_subset_file(Path(file_attr).read_text(), group)
    raise ParseError(f"missing --{name} or --{name}-file")


def _subset_json(subset: GroupSubset) -> dict:
    return {
        "group": subset.group.literal(),
        "size": subset.size,
        "density": rational_json(subset.density()),
        "elements": subset.residue_lists(),
    }


def _all_subsets(group: FiniteAbelianGroup):
    """All subsets in mask order; only sane for small orders."""
    order = group.order
    for mask in range(1 << order):
        yield GroupSubset.from_indices(
            group, [i for i in range(order) if mask >> i & 1]
        )


def _random_subsets(group: FiniteAbelianGroup, count: int, seed: int):
    gen = np.random.Generator(np.random.Philox(key=int(seed)))
    for _ in range(count):
        yield GroupSubset(group, gen.random(group.order) < 0.5)


# ---------------------------------------------------------------------------
# Verb handlers: each returns (report dict, violated flag).


def _cmd_density(args):
    group = parse_group(args.group)
    subset = _load_subset(args, group, "set")
    system = parse_system(args.system)
    value = linform.eval_density(
        system, subset, budget=args.max_work, threads=args.threads
    )
    report = make_report(
        "density",
        params={"group": args.group, "system": linform.format_system(system)},
        set_size=subset.size,
        value=rational_json(value),
    )
    return report, False


def _cmd_energy(args):
    group = parse_group(args.group)
    subset = _load_subset(args, group, "set")
    raw = abelian.additive_energy_raw(subset)
    report = make_report(
        "energy",
        params={"group": args.group},
        set_size=subset.size,
        raw=raw,
        normalized=rational_json(abelian.additive_energy(subset)),
    )
    if args.fourier:
        report["fourier"] = fourier.energy_fourier(subset)
        report["approximate_fourier"] = True
    return report, False


def _cmd_sumset(args):
    group = parse_group(args.group)
    a = _load_subset(args, group, "set-a")
    b = _load_subset(args, group, "set-b")
    s = abelian.sumset(a, b)
    report = make_report("sumset", params={"group": args.group}, result=_subset_json(s))
    return report, False


def _cmd_doubling(args):
    group = parse_group(args.group)
    subset = _load_subset(args, group, "set")
    value = abelian.doubling_constant(subset)
    report = make_report(
        "doubling",
        params={"group": args.group},
        set_size=subset.size,
        value=rational_json(value),
    )
    return report, False


def _cmd_stabilizer(args):
    group = parse_group(args.group)
    subset = _load_subset(args, group, "set")
    stab = abelian.stabilizer(subset)
    report = make_report(
        "stabilizer", params={"group": args.group}, result=_subset_json(stab)
    )
    return report, False


def _check_single(kind: str, instance: dict, lhs: Fraction, holds: bool):
    report = make_report(
        kind,
        instance=instance,
        lhs=rational_json(lhs),
        holds=holds,
        checked=1,
        violations=0 if holds else 1,
        witnesses=[] if holds else [instance],
    )
    return report, not holds


def _sweep(kind: str, instances, evaluate):
    checked = 0
    witnesses = []
    for instance in instances:
        checked += 1
        lhs, holds = evaluate(instance)
        if not holds:
            if len(witnesses) < _WITNESS_LIMIT:
                witnesses.append(
                    {"instance": _describe_instance(instance), "lhs": rational_json(lhs)}
                )
    report = make_report(
        kind,
        checked=checked,
        violations=len(witnesses),
        witnesses=witnesses,
    )
    return report, bool(witnesses)


def _describe_instance(instance) -> dict:
    if isinstance(instance, tuple):
        return {
            "A": _subset_json(instance[0])["elements"],
            "B": _subset_json(instance[1])["elements"],
        }
    return {"A": _subset_json(instance)["elements"]}


def _cmd_check(args):
    kind = args.kind
    if kind in ("region-graph", "region-energy"):
        x = _parse_fraction(args.x)
        y = _parse_fraction(args.y)
        if kind == "region-graph":
            bound = bounds.bollobas_h(x)
            holds = y >= bound
        else:
            bound = bounds.energy_upper_bound(x)
            holds = y <= bound
        report = make_report(
            f"check-{kind}",
            instance={"x": str(x), "y": str(y)},
            bound=rational_json(bound),
            holds=holds,
            checked=1,
            violations=0 if holds else 1,
            witnesses=[] if holds else [{"x": str(x), "y": str(y)}],
        )
        return report, not holds

    group = parse_group(args.group)
    pairwise = kind in ("kneser", "plunnecke-ruzsa")

    def evaluate(instance):
        # preconditioned checks pass vacuously on empty sets so sweeps count
        # every instance
        if kind == "kneser":
            return bounds.check_kneser(*instance)
        if kind == "plunnecke-ruzsa":
            a, b = instance
            if a.size == 0:
                return Fraction(0), True
            return bounds.check_plunnecke_ruzsa(a, b, args.r, args.s)
        if kind == "energy-doubling":
            return bounds.check_energy_doubling(instance)
        if instance.size == 0:
            return Fraction(0), True
        return bounds.check_energy_bound(instance)

    if args.exhaustive:
        cap = _EXHAUSTIVE_PAIR_MAX_ORDER if pairwise else _EXHAUSTIVE_SUBSET_MAX_ORDER
        if group.order > cap:
            raise CapExceeded(
                f"exhaustive sweep over {group.literal()} exceeds order cap {cap}"
            )
        if pairwise:
            instances = (
                (a, b) for a in _all_subsets(group) for b in _all_subsets(group)
            )
        else:
            instances = _all_subsets(group)
        return _sweep(f"check-{kind}", instances, evaluate)

    if args.random:
        singles = _random_subsets(group, args.random * (2 if pairwise else 1), args.seed)
        if pairwise:
            it = iter(singles)
            instances = [(a, next(it)) for a in it]
        else:
            instances = list(singles)
        return _sweep(f"check-{kind}", instances, evaluate)

    if pairwise:
        a = _load_subset(args, group, "set-a")
        b = _load_subset(args, group, "set-b")
        lhs, holds = evaluate((a, b))
        return _check_single(
            f"check-{kind}", _describe_instance((a, b)), lhs, holds
        )
    a = _load_subset(args, group, "set")
    lhs, holds = evaluate(a)
    return _check_single(f"check-{kind}", _describe_instance(a), lhs, holds)


def _cmd_reduce(args):
    q = parse_poly(args.poly)
    bundle = reduction.build_psi(q, args.k)
    report = make_report("reduce", params={"poly": args.poly, "k": args.k})
    report["bundle"] = bundle.to_dict()
    return report, False


def _cmd_witness(args):
    n = [int(v) for v in args.n.split(",") if v.strip()]
    spec = reduction.build_witness(args.k, n)
    subset_file = None
    if args.subset_file:
        Path(args.subset_file).write_text(abelian.subset_to_lines(spec.subset))
        subset_file = args.subset_file
    report = make_report("witness", params={"k": args.k, "n": n})
    report["witness"] = spec.to_dict(subset_file)
    report["group_order"] = spec.group.order
    if subset_file is None:
        report["subset"] = spec.subset.residue_lists()
    return report, False


def _cmd_verify_pinpoint(args):
    result = reduction.verify_pinpoint(
        args.k, budget=args.max_work, threads=args.threads
    )
    report = make_report("verify-pinpoint", params={"k": args.k})
    report.update(result.to_dict())
    return report, not result.ok


def _cmd_verify_homdensity(args):
    group = parse_group(args.group)
    k = args.k
    m = reduction.build_M(k)
    gen = np.random.Generator(np.random.Philox(key=int(args.seed)))
    pairs = 0
    mismatches = []
    vacuous = 0
    details = []
    while pairs < args.pairs:
        a = GroupSubset(group, gen.random(group.order) < 0.5)
        good = linform.enumerate_satisfying(m, a, budget=args.max_work)
        if not good:
            continue
        g = good[int(gen.integers(0, len(good)))]
        for j in range(1, k + 1):
            rep = reduction.verify_homdensity_identity(
                a, g, j, budget=args.max_work, threads=args.threads
            )
            if rep.vacuous:
                vacuous += 1
            elif not rep.ok:
                mismatches.append(rep.to_dict())
        pairs += 1
        if len(details) < 3:
            details.append(
                reduction.verify_homdensity_identity(
                    a, g, 1, budget=args.max_work
                ).to_dict()
            )
    report = make_report(
        "verify-homdensity",
        params={"group": args.group, "k": k, "pairs": args.pairs, "seed": args.seed},
        pairs_checked=pairs,
        vacuous=vacuous,
        mismatches=mismatches,
        sample=details,
        ok=not mismatches,
    )
    return report, bool(mismatches)


def _cmd_verify_witness(args):
    n = [int(v) for v in args.n.split(",") if v.strip()]
    spec = reduction.build_witness(args.k, n)
    result = reduction.verify_witness(
        spec, budget=args.max_work, threads=args.threads
    )
    report = make_report("verify-witness", params={"k": args.k, "n": n})
    report.update(result.to_dict())
    return report, not result.ok


def _cmd_verify_delta(args):
    result = bounds.verify_delta_derivative_claims(
        _parse_fraction(args.step), args.t_max
    )
    report = make_report(
        "verify-delta-claims", params={"step": args.step, "t_max": args.t_max}
    )
    report.update(result.to_dict())
    return report, not result.ok


def _cmd_verify_bollobas(args):
    violations = []
    checked = 0
    for t in range(1, args.t_max + 1):
        checked += 1
        x = 1 - Fraction(1, t)
        expected = Fraction((t - 1) * (t - 2), t * t)
        if bounds.bollobas_h(x) != expected:
            violations.append(f"value at 1-1/{t}")
        if bounds.bollobas_piecewise.breakpoint_gap(t) != 0:
            violations.append(f"discontinuity between branches {t} and {t + 1}")
    report = make_report(
        "verify-bollobas",
        params={"t_max": args.t_max},
        checked=checked,
        violations=len(violations),
        violation_details=violations,
        ok=not violations,
    )
    return report, bool(violations)


def _cmd_estimate(args):
    group = parse_group(args.group)
    subset = _load_subset(args, group, "set")
    system = parse_system(args.system)
    estimate, radius = linform.estimate_density(
        system, subset, args.samples, args.seed, threads=args.threads
    )
    report = make_report(
        "estimate",
        params={
            "group": args.group,
            "system": linform.format_system(system),
            "samples": args.samples,
            "seed": args.seed,
        },
        approximate=True,
        estimate=estimate,
        radius=radius,
    )
    return report, False


# ---------------------------------------------------------------------------
# Parser assembly.


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the JSON report to this file")
    p.add_argument("--threads", type=int, default=1, help="worker count")
    p.add_argument(
        "--max-work",
        type=int,
        default=None,
        help=f"exact-evaluation work budget (default {linform.DEFAULT_WORK_BUDGET})",
    )


def _add_subset_options(p: argparse.ArgumentParser, name: str = "set") -> None:
    p.add_argument(f"--{name}", help="inline subset literal, e.g. \"{0,2}\"")
    p.add_argument(f"--{name}-file", help="subset file (lines or JSON)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="addforms",
        description="Exact desk-scale computations on subsets of finite "
        "abelian groups: densities of linear-form systems, additive energy, "
        "inequality checks, and the reduction/witness pipeline.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("density", help="exact density of a linear-form system")
    p.add_argument("--group", required=True)
    _add_subset_options(p)
    p.add_argument("--system", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("energy", help="additive energy of a subset")
    p.add_argument("--group", required=True)
    _add_subset_options(p)
    p.add_argument("--fourier", action="store_true", help="include the spectral value")
    _add_common(p)
    p.set_defaults(func=_cmd_energy)

    p = sub.add_parser("sumset", help="exact sumset A + B")
    p.add_argument("--group", required=True)
    _add_subset_options(p, "set-a")
    _add_subset_options(p, "set-b")
    _add_common(p)
    p.set_defaults(func=_cmd_sumset)

    p = sub.add_parser("doubling", help="doubling constant |A+A|/|A|")
    p.add_argument("--group", required=True)
    _add_subset_options(p)
    _add_common(p)
    p.set_defaults(func=_cmd_doubling)

    p = sub.add_parser("stabilizer", help="stabilizer subgroup of a subset")
    p.add_argument("--group", required=True)
    _add_subset_options(p)
    _add_common(p)
    p.set_defaults(func=_cmd_stabilizer)

    p = sub.add_parser("check", help="inequality checks, single or sweeping")
    kinds = p.add_mutually_exclusive_group(required=True)
    for flag, value in [
        ("--kneser", "kneser"),
        ("--plunnecke-ruzsa", "plunnecke-ruzsa"),
        ("--energy-doubling", "energy-doubling"),
        ("--energy-bound", "energy-bound"),
        ("--region-graph", "region-graph"),
        ("--region-energy", "region-energy"),
    ]:
        kinds.add_argument(flag, dest="kind", action="store_const", const=value)
    p.add_argument("--group")
    _add_subset_options(p)
    _add_subset_options(p, "set-a")
    _add_subset_options(p, "set-b")
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--random", type=int, default=0, help="number of random instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--x", help="first coordinate for region checks")
    p.add_argument("--y", help="second coordinate for region checks")
    _add_common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("reduce", help="assemble the reduction bundle for (q, k)")
    p.add_argument("--poly", required=True)
    p.add_argument("--k", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("witness", help="build the explicit product-group witness")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", required=True, help="comma-separated slice moduli, e.g. 3,3")
    p.add_argument("--subset-file", help="write the witness subset here")
    _add_common(p)
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("verify", help="exhaustive verifiers")
    vsub = p.add_subparsers(dest="what", required=True)

    v = vsub.add_parser("pinpoint", help="pin-down property of L and M")
    v.add_argument("--k", type=int, required=True)
    _add_common(v)
    v.set_defaults(func=_cmd_verify_pinpoint)

    v = vsub.add_parser("homdensity", help="graph-vs-forms density identities")
    v.add_argument("--group", required=True)
    v.add_argument("--k", type=int, required=True)
    v.add_argument("--pairs", type=int, default=50)
    v.add_argument("--seed", type=int, default=0)
    _add_common(v)
    v.set_defaults(func=_cmd_verify_homdensity)

    v = vsub.add_parser("witness", help="witness slices, pair and 3-cycle densities")
    v.add_argument("--k", type=int, required=True)
    v.add_argument("--n", required=True)
    _add_common(v)
    v.set_defaults(func=_cmd_verify_witness)

    v = vsub.add_parser("delta-claims", help="derivative sign claims on a grid")
    v.add_argument("--step", default="1/1000")
    v.add_argument("--t-max", type=int, default=20)
    _add_common(v)
    v.set_defaults(func=_cmd_verify_delta)

    v = vsub.add_parser("bollobas", help="breakpoint values and continuity")
    v.add_argument("--t-max", type=int, default=100)
    _add_common(v)
    v.set_defaults(func=_cmd_verify_bollobas)

    p = sub.add_parser("estimate", help="Monte Carlo density estimate")
    p.add_argument("--group", required=True)
    _add_subset_options(p)
    p.add_argument("--system", required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=_cmd_estimate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report, violated = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    except (AddformsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = dump_json(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 1 if violated else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
