"""Line-oriented instance files and JSON reports.

An instance file has sections introduced by a header line:

    GROUPOID <n_elements> <n_units>
    element <id> <range> <source> <inverse> [label]
    compose <g> <h> <gh>
    COCYCLE <modulus>
    <g> <h> <exponent>
    SUBGROUPOID <name>
    <id> <id> ...
    ROTATION
    theta <p/q | irrational>
    S <a b; c d>

Element ids are 0..n-1 with the units first.  Blank lines and text after
'#' are ignored.  Cocycle entries not listed are 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cocycle import Cocycle
from .errors import GroupoidError, InvalidCocycle, ParseError
from .groupoid import FiniteGroupoid, Subgroupoid, subgroupoid, validate_groupoid
from .rotation import LatticeSubgroup, ThetaParam, hermite_form

SECTIONS = ("GROUPOID", "COCYCLE", "SUBGROUPOID", "ROTATION")


@dataclass
class Instance:
    groupoid: FiniteGroupoid | None = None
    cocycle: Cocycle | None = None
    subgroupoids: dict = field(default_factory=dict)  # name -> Subgroupoid
    theta: ThetaParam | None = None
    lattice: LatticeSubgroup | None = None
    name: str = ""

    def subgroupoid(self, name=None) -> Subgroupoid:
        if not self.subgroupoids:
            raise ParseError("instance has no SUBGROUPOID section", None)
        if name is None:
            return next(iter(self.subgroupoids.values()))
        try:
            return self.subgroupoids[name]
        except KeyError:
            raise ParseError(f"no subgroupoid named {name!r}", None) from None


def parse_lattice(text: str) -> LatticeSubgroup:
    """'a b; c d' -> span of (a, b) and (c, d)."""
    gens = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        nums = part.replace(",", " ").split()
        if len(nums) != 2:
            raise ParseError(f"lattice generator {part!r} needs two integers", None)
        try:
            gens.append((int(nums[0]), int(nums[1])))
        except ValueError:
            raise ParseError(f"lattice generator {part!r} is not integral", None) from None
    return hermite_form(gens)


def _ints(words, lineno, count=None):
    try:
        vals = [int(w) for w in words]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(words)!r}", lineno) from None
    if count is not None and len(vals) != count:
        raise ParseError(f"expected {count} integers, got {len(vals)}", lineno)
    return vals


def parse_instance(text: str, name: str = "") -> Instance:
    inst = Instance(name=name)
    section = None
    header_line = {}
    n_elem = n_units = None
    elements = {}
    labels = {}
    compose = {}
    modulus = None
    triples = []
    sub_name = None
    subs = {}
    rot = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        if head in SECTIONS:
            section = head
            header_line[head] = lineno
            if head == "GROUPOID":
                n_elem, n_units = _ints(words[1:], lineno, 2)
            elif head == "COCYCLE":
                (modulus,) = _ints(words[1:], lineno, 1)
                if modulus < 1:
                    raise ParseError("cocycle modulus must be positive", lineno)
            elif head == "SUBGROUPOID":
                if len(words) != 2:
                    raise ParseError("SUBGROUPOID needs one name", lineno)
                sub_name = words[1]
                if sub_name in subs:
                    raise ParseError(f"duplicate subgroupoid {sub_name!r}", lineno)
                subs[sub_name] = (lineno, [])
            elif len(words) > 1:
                raise ParseError("ROTATION takes no arguments", lineno)
            continue
        if section is None:
            raise ParseError(f"content before any section header: {head!r}", lineno)
        if section == "GROUPOID":
            if head == "element":
                if len(words) < 5:
                    raise ParseError("element needs id range source inverse", lineno)
                i, r, s, v = _ints(words[1:5], lineno)
                if i in elements:
                    raise ParseError(f"element {i} listed twice", lineno)
                elements[i] = (r, s, v, lineno)
                labels[i] = " ".join(words[5:]) or str(i)
            elif head == "compose":
                g, h, gh = _ints(words[1:], lineno, 3)
                compose[(g, h)] = gh
            else:
                raise ParseError(f"unknown GROUPOID line {head!r}", lineno)
        elif section == "COCYCLE":
            triples.append((lineno, _ints(words, lineno, 3)))
        elif section == "SUBGROUPOID":
            subs[sub_name][1].extend(_ints(words, lineno))
        elif section == "ROTATION":
            if head == "theta" and len(words) == 2:
                rot["theta"] = (lineno, words[1])
            elif head == "S":
                rot["S"] = (lineno, line[1:].strip())
            else:
                raise ParseError(f"unknown ROTATION line {line!r}", lineno)

    if "GROUPOID" in header_line:
        gl = header_line["GROUPOID"]
        if n_elem < 1:
            raise ParseError("empty groupoid", gl)
        if sorted(elements) != list(range(n_elem)):
            raise ParseError(f"elements must be 0..{n_elem - 1} exactly once", gl)
        if not 1 <= n_units <= n_elem:
            raise ParseError("unit count out of range", gl)
        try:
            G = validate_groupoid(
                list(range(n_elem)),
                list(range(n_units)),
                {i: e[0] for i, e in elements.items()},
                {i: e[1] for i, e in elements.items()},
                compose,
                {i: e[2] for i, e in elements.items()},
            )
        except GroupoidError as exc:
            where = exc.where
            line = elements[where][3] if isinstance(where, int) and where in elements else gl
            err = ParseError(f"{exc.axiom}: {exc}", line)
            raise err from exc
        G.labels = tuple(labels[i] for i in G.labels)
        inst.groupoid = G
    elif triples or subs:
        raise ParseError("COCYCLE and SUBGROUPOID need a GROUPOID section", None)

    G = inst.groupoid
    if G is not None:
        table = {}
        for lineno, (g, h, e) in triples:
            if not (0 <= g < G.size and 0 <= h < G.size):
                raise ParseError(f"cocycle entry uses unknown element ({g},{h})", lineno)
            if G.table[g][h] < 0:
                raise ParseError(f"cocycle entry on non-composable pair ({g},{h})", lineno)
            table[(g, h)] = e
        try:
            inst.cocycle = Cocycle(G, modulus or 1, table)
        except InvalidCocycle as exc:
            raise ParseError(str(exc), header_line.get("COCYCLE")) from exc
        for sname, (lineno, ids) in subs.items():
            try:
                inst.subgroupoids[sname] = subgroupoid(G, ids)
            except Exception as exc:  # NotSubgroupoid or bad ids
                raise ParseError(f"subgroupoid {sname}: {exc}", lineno) from exc

    if rot:
        if "theta" not in rot or "S" not in rot:
            raise ParseError("ROTATION needs theta and S", header_line["ROTATION"])
        lineno, t = rot["theta"]
        try:
            inst.theta = ThetaParam.parse(t)
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
        lineno, s = rot["S"]
        try:
            inst.lattice = parse_lattice(s)
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
    if inst.groupoid is None and inst.theta is None:
        raise ParseError("no GROUPOID or ROTATION section", None)
    return inst


def _label(G, g):
    return str(G.labels[g]).replace(" ", "")


def emit_instance(c: Cocycle | None = None, subgroupoids=None, theta=None, lattice=None, comment="") -> str:
    lines = []
    if comment:
        lines += [f"# {ln}" for ln in comment.splitlines()]
    if c is not None:
        G = c.groupoid
        lines.append(f"GROUPOID {G.size} {G.n_units}")
        for g in G.elements:
            lines.append(f"element {g} {G.range[g]} {G.source[g]} {G.inverse[g]} {_label(G, g)}")
        for g in G.elements:
            for h in G.elements:
                if G.table[g][h] >= 0:
                    lines.append(f"compose {g} {h} {G.table[g][h]}")
        lines.append(f"COCYCLE {c.modulus}")
        for g, h, e in c.triples():
            lines.append(f"{g} {h} {e}")
        for name, S in (subgroupoids or {}).items():
            lines.append(f"SUBGROUPOID {name}")
            lines.append(" ".join(str(g) for g in S.sorted()))
    if theta is not None:
        lines.append("ROTATION")
        lines.append(f"theta {theta}")
        lines.append("S " + "; ".join(f"{a} {b}" for a, b in lattice.basis) if lattice.basis else "S 0 0")
    return "\n".join(lines) + "\n"


def root_str(z) -> str:
    return f"{z.exponent}/{z.modulus}"


def json_report(instance: str, verdict=None, diag_S=None, diag_B=None, principal=None, free=None, trivializable=None, notes=None) -> dict:
    """The stable report schema; unknown values are null."""
    v = verdict
    return {
        "instance": instance,
        "checks": {
            "max": None if v is None else v.max,
            "ricc": None if v is None else v.ricc,
            "cartan": None if v is None else v.cartan,
            "diag_S": diag_S,
            "diag_B": diag_B,
        },
        "weyl": {
            "principal": principal,
            "free": free,
            "trivializable": trivializable,
        },
        "notes": list(notes or []),
    }
