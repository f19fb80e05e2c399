"""Command-line front end: twistcartan <subcommand> [file] [options].

Exit codes: 0 when the check passes, 1 when it fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .cartan import check_cartan, check_diag_B, check_diag_S, equivalence_suite
from .cocycle import is_abelian_twist
from .dual import enumerate_dual_fiber, pair_data, raw_dual_search
from .errors import ModulusLimit, ParseError, PreconditionFailed, TwistCartanError
from .groupoid import is_principal as gpd_principal, is_wide_normal
from .instance_io import Instance, emit_instance, json_report, parse_instance, parse_lattice, root_str
from .rotation import (
    ThetaParam,
    check_cartan_rotation,
    check_diag_rotation,
    coboundary_d_theta,
    trivializing_F_rotation,
    weyl_groupoid_rotation,
)
from .weyl import (
    build_weyl_groupoid,
    build_weyl_twist,
    check_iso_characterization,
    cross_check_delta,
    is_free,
    is_principal,
    trivializable_by_search,
    weyl_twist_trivializable,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def builtin_instances() -> list[str]:
    return sorted(p.name for p in resources.files("twistcartan").joinpath("data").iterdir() if p.name.endswith(".gpd"))


def load_instance(path: str) -> Instance:
    p = Path(path)
    if p.exists():
        text = p.read_text()
    else:
        # bare names fall back to the bundled examples
        data = resources.files("twistcartan").joinpath("data")
        cand = data.joinpath(p.name)
        if not cand.is_file():
            cand = data.joinpath(p.name + ".gpd")
        if not cand.is_file():
            raise InputError(f"no such file: {path}")
        text = cand.read_text()
    try:
        return parse_instance(text, name=p.name)
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _limit(args, *moduli):
    lim = args.modulus_limit
    if lim and any(m > lim for m in moduli):
        raise ModulusLimit(f"modulus {max(moduli)} exceeds --modulus-limit {lim}")


def _pair(args):
    inst = load_instance(args.file)
    if inst.cocycle is None:
        raise InputError(f"{args.file}: no GROUPOID section")
    try:
        S = inst.subgroupoid(args.S)
    except ParseError as exc:
        raise InputError(f"{args.file}: {exc}") from exc
    _limit(args, inst.cocycle.modulus)
    name = inst.name + (f"[{args.S}]" if args.S else "")
    return inst, inst.cocycle, S, name


def _emit(args, report: dict, text_lines: list[str]):
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print("\n".join(text_lines))


def cmd_validate(args):
    inst = load_instance(args.file)
    out = [f"{inst.name}: valid"]
    rep = {"instance": inst.name, "valid": True}
    if inst.groupoid is not None:
        G, c = inst.groupoid, inst.cocycle
        out.append(f"groupoid: {G.size} arrows, {G.n_units} units")
        out.append(f"cocycle: modulus {c.modulus}, {len(c.triples())} nonzero entries")
        out.append("subgroupoids: " + (", ".join(f"{k} ({len(v)})" for k, v in inst.subgroupoids.items()) or "none"))
        rep.update(arrows=G.size, units=G.n_units, modulus=c.modulus, subgroupoids=list(inst.subgroupoids))
    if inst.theta is not None:
        out.append(f"rotation: theta={inst.theta}, S={inst.lattice}")
        rep.update(theta=str(inst.theta), lattice=str(inst.lattice))
    _emit(args, rep, out)
    return EXIT_OK


def cmd_info(args):
    inst = load_instance(args.file)
    G, c = inst.groupoid, inst.cocycle
    if G is None:
        raise InputError("info needs a GROUPOID section")
    iso = [len(f) for f in G.isotropy_fibers]
    out = [
        f"{inst.name}: {G.size} arrows, {G.n_units} units, {len(G.orbits)} orbits",
        f"isotropy orders: {iso}",
        f"principal: {gpd_principal(G)}",
        f"cocycle modulus {c.modulus}, trivial: {c.is_trivial()}",
    ]
    subs = {}
    for name, S in inst.subgroupoids.items():
        wn = is_wide_normal(G, S)
        ab = is_abelian_twist(c, S)
        subs[name] = {"size": len(S), "wide": wn.wide, "normal": wn.normal, "abelian": ab}
        out.append(f"  {name}: size {len(S)}, wide {wn.wide}, normal {wn.normal}, abelian twist {ab}")
    rep = {"instance": inst.name, "arrows": G.size, "units": G.n_units, "orbits": len(G.orbits),
           "isotropy_orders": iso, "principal": gpd_principal(G), "modulus": c.modulus, "subgroupoids": subs}
    _emit(args, rep, out)
    return EXIT_OK


def cmd_check_cartan(args):
    if args.theta is not None:
        return cmd_rotation(args)
    inst, c, S, name = _pair(args)
    v = check_cartan(c, S)
    rep = json_report(name, verdict=v)
    lines = [f"{name}: " + ", ".join(f"{k}={val}" for k, val in v.as_dict().items())]
    _emit(args, rep, lines)
    return EXIT_OK if v.cartan else EXIT_FAIL


def cmd_check_diagonal(args):
    if args.theta is not None:
        return cmd_rotation(args)
    inst, c, S, name = _pair(args)
    v = check_cartan(c, S)
    dS, dB = check_diag_S(c, S), check_diag_B(c, S)
    notes = []
    principal = free = None
    if v.wide and v.normal and v.abelian:
        W = build_weyl_groupoid(c, S)
        principal, free = is_principal(W), is_free(W)
    if args.oracle:
        rep_eq = equivalence_suite(c, S, strict=False)
        notes += rep_eq.failures() or ["equivalence suite consistent"]
    rep = json_report(name, v, dS, dB, principal, free, notes=notes)
    lines = [f"{name}: diag={dS} (commutator form {dS}, eigenvector form {dB}), cartan={v.cartan}"]
    if principal is not None:
        lines.append(f"Weyl groupoid principal={principal} free={free}")
    lines += notes
    _emit(args, rep, lines)
    return EXIT_OK if dS and dB else EXIT_FAIL


def cmd_weyl(args):
    inst, c, S, name = _pair(args)
    try:
        W = build_weyl_groupoid(c, S)
    except PreconditionFailed as exc:
        _emit(args, json_report(name, notes=[str(exc)]), [f"{name}: {exc}"])
        return EXIT_FAIL
    T = build_weyl_twist(c, S, W)
    _limit(args, T.modulus)
    if args.emit:
        print(emit_instance(T.cocycle, comment=f"Weyl groupoid of {name} with its derived twist cocycle"), end="")
        return EXIT_OK
    notes = []
    if args.oracle:
        notes.append(f"isotropy characterization: {check_iso_characterization(c, S, W)}")
        notes.append(f"normalizer cross-check: {cross_check_delta(c, S)}")
    points = [str(k) for k in W.points]
    action = [[q, x, W.action[(q, x)]] for (q, x) in sorted(W.action)]
    rep = json_report(name, principal=is_principal(W), free=is_free(W), notes=notes)
    rep["weyl"].update({"points": points, "action": action, "arrows": W.groupoid.size, "phase_modulus": T.modulus})
    lines = [f"{name}: Weyl groupoid with {len(points)} points and {W.groupoid.size} arrows"]
    lines += [f"  point {i}: {p}" for i, p in enumerate(points)]
    lines += [f"  coset {q} . point {x} = point {y}" for q, x, y in action]
    lines.append(f"principal={is_principal(W)} free={is_free(W)} twist phases in mu_{T.modulus}")
    lines += notes
    _emit(args, rep, lines)
    return EXIT_OK


def cmd_weyl_trivial(args):
    if args.theta is not None:
        theta = ThetaParam.parse(args.theta)
        L = parse_lattice(args.S or "")
        name = f"theta={theta} S={L}"
        if not check_cartan_rotation(theta, L):
            _emit(args, json_report(name, notes=["S is not Cartan"]), [f"{name}: not Cartan"])
            return EXIT_FAIL
        if not theta.is_irrational:
            note = "trivializability for rational theta is not decided"
            _emit(args, json_report(name, notes=[note]), [f"{name}: trivializable=unknown ({note})"])
            return EXIT_FAIL
        F = trivializing_F_rotation(theta, L)
        rep = json_report(name, trivializable=F.verified, notes=[str(F), f"bezout a={F.a} b={F.b}"])
        _emit(args, rep, [f"{name}: trivializable={F.verified}", str(F), f"bezout: a={F.a}, b={F.b}"])
        return EXIT_OK if F.verified else EXIT_FAIL
    inst, c, S, name = _pair(args)
    try:
        F = weyl_twist_trivializable(c, S)
    except PreconditionFailed as exc:
        _emit(args, json_report(name, notes=[str(exc)]), [f"{name}: {exc}"])
        return EXIT_FAIL
    notes = []
    if args.oracle:
        T = build_weyl_twist(c, S)
        try:
            found = trivializable_by_search(T, T.modulus) is not None
            notes.append(f"search oracle agrees: {found == (F is not None)}")
        except ValueError as exc:
            notes.append(f"search oracle skipped: {exc}")
    if F is None:
        _emit(args, json_report(name, trivializable=False, notes=notes), [f"{name}: trivializable=False"] + notes)
        return EXIT_FAIL
    W = F.twist.base
    values = {f"{q},{x}": root_str(z) for a, z in F.values.items() for q, x in [W.arrows[a]]}
    rep = json_report(name, trivializable=True, notes=notes)
    rep["weyl"]["F"] = values
    lines = [f"{name}: trivializable=True, F on the section (coset, point) -> value:"]
    lines += [f"  ({k}) -> {v}" for k, v in values.items()] + notes
    _emit(args, rep, lines)
    return EXIT_OK


def cmd_dual(args):
    inst, c, S, name = _pair(args)
    if not pair_data(c, S).abelian:
        _emit(args, json_report(name, notes=["E_S is not abelian"]), [f"{name}: E_S is not abelian"])
        return EXIT_FAIL
    fibers = {}
    lines = [f"{name}: twisted dual"]
    ok = True
    for u in c.groupoid.units:
        D = enumerate_dual_fiber(c, S, u)
        fibers[str(u)] = [[root_str(z) for z in k.values] for k in D.characters]
        lines.append(f"  unit {u} (S(u) = {list(D.characters[0].members)}):")
        lines += [f"    {' '.join(root_str(z) for z in k.values)}" for k in D.characters]
        if args.oracle:
            same = list(D.characters) == raw_dual_search(c, S, u)
            ok = ok and same
            lines.append(f"    brute-force search agrees: {same}")
    rep = {"instance": name, "dual": fibers}
    _emit(args, rep, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_rotation(args):
    if args.theta is None:
        if not args.file:
            raise InputError("rotation needs --theta and --S, or a file with a ROTATION section")
        inst = load_instance(args.file)
        if inst.theta is None:
            raise InputError(f"{args.file}: no ROTATION section")
        theta, L = inst.theta, inst.lattice
    else:
        theta = ThetaParam.parse(args.theta)
        L = parse_lattice(args.S or "")
    name = f"theta={theta} S={L}"
    cartan = check_cartan_rotation(theta, L)
    notes = []
    d = coboundary_d_theta(theta, L)
    notes.append(f"d(l(k,0)+r(m,n)) = lambda^({d.exponent}), coboundary identity {'verified' if d.verified else 'unverified'}")
    diag = principal = free = None
    lines = [f"{name}: cartan={cartan}"]
    if cartan:
        diag = check_diag_rotation(theta, L)
        W = weyl_groupoid_rotation(theta, L)
        free = bool(W.certificate.get("free"))
        principal = free
        lines += [f"diag={diag}", f"Weyl groupoid: {W}", f"free={free}"]
        notes.append(f"Weyl groupoid: {W}")
    lines += notes
    rep = {
        "instance": name,
        "checks": {"max": cartan, "ricc": True, "cartan": cartan, "diag_S": diag, "diag_B": diag},
        "weyl": {"principal": principal, "free": free, "trivializable": None},
        "notes": notes,
    }
    _emit(args, rep, lines)
    return EXIT_OK if cartan else EXIT_FAIL


def _catalog_entries(where):
    if where == "builtin":
        from .catalog import catalog

        for e in catalog():
            yield e.name, e.cocycle, e.S
        return
    p = Path(where)
    if not p.is_dir():
        raise InputError(f"catalog directory not found: {where}")
    for f in sorted(p.glob("*.gpd")):
        inst = load_instance(str(f))
        for sname, S in inst.subgroupoids.items():
            yield f"{f.name}[{sname}]", inst.cocycle, S


def cmd_equivalence_suite(args):
    if args.catalog:
        entries = _catalog_entries(args.catalog)
    else:
        inst = load_instance(args.file)
        entries = ((f"{inst.name}[{n}]", inst.cocycle, S) for n, S in inst.subgroupoids.items())
    reports, failures = [], 0
    for name, c, S in entries:
        rep = equivalence_suite(c, S, strict=False)
        notes = rep.failures()
        if args.oracle and rep.principal is not None:
            if not check_iso_characterization(c, S):
                notes.append("isotropy characterization failed")
            if not cross_check_delta(c, S):
                notes.append("normalizer cross-check failed")
        failures += bool(notes)
        reports.append(json_report(name, rep.verdict, rep.diag_S, rep.diag_B, rep.principal, rep.free, notes=notes))
    lines = [
        f"{r['instance']}: cartan={r['checks']['cartan']} diag={r['checks']['diag_S']} "
        f"principal={r['weyl']['principal']}" + ("  MISMATCH " + "; ".join(r["notes"]) if r["notes"] else "")
        for r in reports
    ]
    lines.append(f"{len(reports)} instances, {failures} failures")
    _emit(args, {"instances": reports, "failures": failures}, lines)
    return EXIT_OK if failures == 0 else EXIT_FAIL


COMMANDS = {
    "validate": (cmd_validate, "parse and validate an instance file"),
    "info": (cmd_info, "summarize a groupoid and its subgroupoids"),
    "check-cartan": (cmd_check_cartan, "decide the Cartan conditions"),
    "check-diagonal": (cmd_check_diagonal, "decide the C*-diagonal conditions"),
    "weyl": (cmd_weyl, "build the Weyl groupoid and twist"),
    "weyl-trivial": (cmd_weyl_trivial, "decide whether the Weyl twist is trivializable"),
    "dual": (cmd_dual, "list the twisted dual"),
    "rotation": (cmd_rotation, "rotation algebra checks for Z^2 with c_theta"),
    "equivalence-suite": (cmd_equivalence_suite, "cross-check every criterion on instances"),
}


def build_parser():
    ap = argparse.ArgumentParser(prog="twistcartan", description="Exact Cartan and diagonal checks for finite twisted groupoids.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", nargs="?", help="instance file (.gpd) or the name of a bundled example")
        p.add_argument("--S", help="subgroupoid name; with --theta, lattice generators like '2 0; 4 0'")
        p.add_argument("--theta", help="rotation parameter p/q or 'irrational'")
        p.add_argument("--json", action="store_true", help="machine-readable report")
        p.add_argument("--modulus-limit", type=int, default=None, help="refuse phase moduli above this")
        p.add_argument("--oracle", action="store_true", help="also run brute-force cross-checks")
        if name == "equivalence-suite":
            p.add_argument("--catalog", help="directory of .gpd files, or 'builtin'")
        if name == "weyl":
            p.add_argument("--emit", action="store_true", help="print the Weyl groupoid as an instance file")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    func = COMMANDS[args.command][0]
    needs_file = args.command not in ("rotation", "equivalence-suite") and args.theta is None
    if args.command == "equivalence-suite" and not (args.file or args.catalog):
        print("error: equivalence-suite needs a file or --catalog", file=sys.stderr)
        return EXIT_INPUT
    if needs_file and not args.file:
        print(f"error: {args.command} needs an instance file", file=sys.stderr)
        return EXIT_INPUT
    if args.theta is not None and args.command not in ("rotation", "weyl-trivial", "check-cartan", "check-diagonal"):
        print(f"error: --theta is not supported by {args.command}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return func(args)
    except (InputError, ParseError, ModulusLimit) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TwistCartanError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
