"""Command-line front end.

Subcommands: ``closure`` (topology queries on model files), ``pvmd``
(decision verdicts), ``ho`` (the essential-but-not-PvMD construction demo),
``intpoly`` (integer-valued polynomial queries), ``catalog`` (list domains)
and ``verify`` (the batch property suite).

Exit codes: 0 affirmative/success, 1 sound negative verdict, 2 error or
unknown.  Text output is sorted for stable diffs; JSON is the machine
contract.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .catalog import catalog_descriptor, catalog_ids
from .exact import PAdicApprox
from .ho import (
    HOConfig,
    ho_fip_witness,
    ho_in_mi,
    ho_limit_contains,
    ho_nonvaluation_certificate,
)
from .intpoly import (
    IntMembershipDomain,
    int_membership,
    lambda_classify,
    mpalpha_contract_ZX,
    mpalpha_membership,
)
from .pvmd import pvmd_check
from .spectra import (
    enumerate_limits,
    generization,
    load_model,
    load_subset,
    patch_closure,
    zariski_closure,
)
from .verify import run_suite


def _default_seed() -> int:
    return int(os.environ.get("PATCHSPEC_SEED", "0"))


def _subset_json(S) -> dict:
    return {
        "explicit": [str(p) for p in S.sorted_explicit()],
        "cofinite": [{"family": part.family,
                      "excluded": sorted(map(str, part.excluded))}
                     for part in sorted(S.cofinite, key=lambda c: c.family)],
    }


def _emit(payload: dict, text: str, output: str):
    if output == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def cmd_closure(args) -> int:
    with open(args.model) as fh:
        model = load_model(fh.read())
    with open(args.subset) as fh:
        Y = load_subset(fh.read())
    op = {"patch": patch_closure, "zariski": zariski_closure,
          "limits": enumerate_limits, "generization": generization}[args.topology]
    result = op(model, Y)
    _emit({"topology": args.topology, "result": _subset_json(result)},
          str(result), args.output)
    return 0


def cmd_pvmd(args) -> int:
    if args.action != "check":
        raise ValueError(f"unknown pvmd action {args.action!r}")
    desc = catalog_descriptor(args.domain)
    verdict = pvmd_check(desc, args.criterion)
    text = [f"domain: {desc.name}",
            f"criterion: {verdict.criterion}",
            f"is_pvmd: {verdict.is_pvmd}"]
    for k in sorted(verdict.certificate):
        text.append(f"  {k}: {verdict.certificate[k]}")
    _emit(verdict.to_json(), "\n".join(text), args.output)
    return verdict.exit_code


def cmd_ho(args) -> int:
    if args.action != "demo":
        raise ValueError(f"unknown ho action {args.action!r}")
    config = HOConfig(args.level)
    fam = [config.element(tok.strip()) for tok in args.family.split(",") if tok.strip()]
    bound, trace = ho_fip_witness(fam)
    table = {}
    for k, f in enumerate(fam):
        table[f"f{k}"] = {str(i): ho_in_mi(f, i) for i in range(config.n)}
    limit_members = [f"f{k}" for k, f in enumerate(fam) if ho_limit_contains(f)]
    cert = ho_nonvaluation_certificate(config, seed=args.seed)
    payload = {"level": config.n, "fip_bound": bound, "fip_trace": trace,
               "membership_table": table, "limit_members": limit_members,
               "certificate": cert}
    lines = [f"level: {config.n}", f"fip bound: {bound}",
             "membership (f x index):"]
    for name in sorted(table):
        row = " ".join("+" if table[name][str(i)] else "-"
                       for i in range(config.n))
        lines.append(f"  {name}: {row}")
    lines.append(f"limit-ideal members (lower bound): {', '.join(limit_members)}")
    lines.append(f"certificate: {cert['instances_checked']} instances checked; "
                 f"{cert['conclusion']}")
    _emit(payload, "\n".join(lines), args.output)
    return 0


def cmd_intpoly(args) -> int:
    if args.action == "member":
        D = IntMembershipDomain(args.domain)
        ok = int_membership(args.f, D)
        _emit({"domain": args.domain, "f": args.f, "member": ok},
              f"{args.f} in Int({args.domain}): {ok}", args.output)
        return 0 if ok else 1
    if args.action == "prime":
        alpha = PAdicApprox(args.p, args.precision, args.alpha)
        verdict = mpalpha_membership(args.f, args.p, alpha)
        contraction = mpalpha_contract_ZX(args.p, alpha)
        _emit({"f": args.f, "p": args.p, "alpha": args.alpha,
               "precision": args.precision, "verdict": verdict,
               "contraction": str(contraction)},
              f"membership: {verdict}\ncontraction: {contraction}", args.output)
        return {"in": 0, "out": 1, "needs_precision": 2}[verdict]
    if args.action == "classify":
        cls = lambda_classify(args.domain)
        payload = {"domain": args.domain,
                   "lambda0": _subset_json(cls.lambda0),
                   "lambda1": _subset_json(cls.lambda1),
                   "residue_rule": cls.residue_size_rule}
        text = (f"domain: {args.domain}\nlambda0: {cls.lambda0}\n"
                f"lambda1: {cls.lambda1}\nresidues: {cls.residue_size_rule}")
        _emit(payload, text, args.output)
        return 0
    raise ValueError(f"unknown intpoly action {args.action!r}")


def cmd_catalog(args) -> int:
    rows = []
    for cid in catalog_ids():
        desc = catalog_descriptor(cid)
        rows.append({"id": cid, "pruefer": desc.pruefer,
                     "t_finite_character": desc.t_finite_character,
                     "krull_type": desc.krull_type})
    text = "\n".join(
        f"{r['id']}: pruefer={r['pruefer']} "
        f"t_finite_character={r['t_finite_character']} "
        f"krull_type={r['krull_type']}" for r in rows)
    _emit({"domains": rows}, text, args.output)
    return 0


def cmd_verify(args) -> int:
    results = run_suite(args.seed)
    width = max(len(r["name"]) for r in results)
    lines = [f"{'PASS' if r['passed'] else 'FAIL'}  "
             f"{r['name']:<{width}}  {r['detail']}" for r in results]
    ok = all(r["passed"] for r in results)
    lines.append(f"{sum(r['passed'] for r in results)}/{len(results)} checks passed")
    _emit({"results": results, "all_passed": ok}, "\n".join(lines), args.output)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patchspec")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", choices=["text", "json"], default="text")
        p.add_argument("--seed", type=int, default=_default_seed())

    p = sub.add_parser("closure", help="topology queries on a model file")
    p.add_argument("--model", required=True)
    p.add_argument("--subset", required=True)
    p.add_argument("--topology", default="patch",
                   choices=["patch", "zariski", "limits", "generization"])
    common(p)
    p.set_defaults(fn=cmd_closure)

    p = sub.add_parser("pvmd", help="decision verdicts")
    p.add_argument("action", choices=["check"])
    p.add_argument("--domain", required=True)
    p.add_argument("--criterion", default="auto",
                   choices=["auto", "thm24", "cor26", "cor27", "griffin"])
    common(p)
    p.set_defaults(fn=cmd_pvmd)

    p = sub.add_parser("ho", help="essential-not-PvMD construction demo")
    p.add_argument("action", choices=["demo"])
    p.add_argument("--level", type=int, default=4)
    p.add_argument("--family", default="T,U")
    common(p)
    p.set_defaults(fn=cmd_ho)

    p = sub.add_parser("intpoly", help="integer-valued polynomial queries")
    p.add_argument("action", choices=["member", "prime", "classify"])
    p.add_argument("--f", default="X")
    p.add_argument("--domain", default="Z")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--alpha", type=int, default=0)
    p.add_argument("--precision", type=int, default=3)
    common(p)
    p.set_defaults(fn=cmd_intpoly)

    p = sub.add_parser("catalog", help="list catalog domains")
    common(p)
    p.set_defaults(fn=cmd_catalog)

    p = sub.add_parser("verify", help="run the batch property suite")
    common(p)
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
