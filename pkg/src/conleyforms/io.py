"""JSON schemas and DOT export.

Everything written here is deterministic: JSON is dumped with sorted keys,
rationals are ``"p/q"`` strings and DOT node ids are canonical set notation.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

from .dynamics import MorseRepresentation, Relation
from .errors import ParseError, ValidationError
from .forms import FormAxioms, LatticeForm, MeetSemilattice
from .order_core import (
    FiniteDistributiveLattice,
    FinitePoset,
    downset_lattice,
    iter_bits,
    label_key,
    lattice_from_masks,
    poset_from_cover_pairs,
    set_notation,
)
from .pipeline import FixedPointOracle, MorseTessellation, PiecewiseMonotoneMap1D
from .regular_closed import GridAlgebra1D


def parse_rational(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise ParseError(f"rational must be an integer or a 'p/q' string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"cannot parse rational {s!r}") from None


def fmt_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def load_json(path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _require(d, key, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise ParseError(f"missing field {key!r}")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise ParseError(f"field {key!r} has the wrong type")
    return v


def _labels(seq) -> list:
    if not isinstance(seq, list) or not all(isinstance(x, (str, int)) for x in seq):
        raise ParseError("labels must be a list of strings")
    return [str(x) for x in seq]


def _pairs(seq) -> list:
    if not isinstance(seq, list) or not all(isinstance(p, list) and len(p) == 2 for p in seq):
        raise ParseError("expected a list of [x, y] pairs")
    return [(str(a), str(b)) for a, b in seq]


# posets and lattices -------------------------------------------------------

def poset_from_json(d) -> FinitePoset:
    return poset_from_cover_pairs(_labels(_require(d, "elements")), _pairs(_require(d, "covers")))


def poset_to_json(P: FinitePoset) -> dict:
    return {"elements": [label_key(x) for x in P.elements],
            "covers": [[label_key(P.elements[i]), label_key(P.elements[j])] for i, j in P.covers()]}


def element_name(L: FiniteDistributiveLattice, a: int) -> str:
    return label_key(L.label(a))


def lattice_to_json(L: FiniteDistributiveLattice, name=None) -> dict:
    """``{"join_irreducibles", "order", "elements"}`` with ``order`` the J(L) matrix."""
    name = name or (lambda a: element_name(L, a))
    P = L.ji_poset
    ji = [label_key(x) for x in P.elements]
    order = [[int(P.leq(i, j)) for j in range(len(P))] for i in range(len(P))]
    elements = [{"label": name(a), "mask": [ji[i] for i in iter_bits(a)]} for a in L.elements]
    return {"join_irreducibles": ji, "order": order, "elements": elements}


def lattice_from_json(d) -> FiniteDistributiveLattice:
    """Accepts a poset (its down-set lattice) or a lattice dump."""
    if isinstance(d, dict) and "covers" in d:
        return downset_lattice(poset_from_json(d))
    ji = _labels(_require(d, "join_irreducibles"))
    order = _require(d, "order", list)
    n = len(ji)
    if len(order) != n or any(not isinstance(r, list) or len(r) != n for r in order):
        raise ParseError("order must be a square matrix over the join-irreducibles")
    P = FinitePoset.from_leq(ji, [[bool(x) for x in row] for row in order])
    pos = {x: i for i, x in enumerate(ji)}
    masks, labels = [], []
    for e in _require(d, "elements", list):
        labels.append(str(_require(e, "label")))
        try:
            masks.append(sum(1 << pos[str(x)] for x in _require(e, "mask", list)))
        except KeyError as k:
            raise ParseError(f"unknown join-irreducible {k.args[0]!r}") from None
    if not masks:
        masks = list(downset_lattice(P).elements)
        labels = None
    return lattice_from_masks(P, masks, labels)


def lattice_dot(L: FiniteDistributiveLattice, name=None, graph: str = "lattice") -> str:
    name = name or (lambda a: element_name(L, a))
    nodes = [name(a) for a in L.elements]
    edges = [(name(a), name(b)) for a, b in L.covers()]
    return hasse_dot(graph, nodes, edges)


def hasse_dot(graph: str, nodes: Iterable[str], edges: Iterable[tuple]) -> str:
    """Covers only, drawn bottom to top; nodes and edges in sorted order."""
    lines = [f"digraph {_q(graph)} {{", "  rankdir=BT;", "  node [shape=box];"]
    for n in sorted(set(nodes)):
        lines.append(f"  {_q(n)};")
    for lo, hi in sorted(set(edges)):
        lines.append(f"  {_q(lo)} -> {_q(hi)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _q(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


# forms ------------------------------------------------------------------

def form_from_json(L: FiniteDistributiveLattice, d) -> LatticeForm:
    """Read ``{"target": ..., "table": [[a, b, value], ...]}`` against ``L``.

    Targets are ``{"kind": "sets", "atoms": [...]}`` (values are atom lists) or
    ``{"kind": "table", "elements": [...], "meet": [[x, y, x∧y], ...]}``.  An
    optional ``"embedding"`` maps element labels to values (sets only).
    """
    target = _require(d, "target", dict)
    kind = _require(target, "kind")
    names = {element_name(L, a): a for a in L.elements}

    def elem(x):
        try:
            return names[str(x)]
        except KeyError:
            raise ParseError(f"unknown lattice element {x!r}") from None

    if kind == "sets":
        atoms = _labels(_require(target, "atoms"))
        pos = {x: i for i, x in enumerate(atoms)}

        def value(v):
            if not isinstance(v, list):
                raise ParseError("set values must be lists of atoms")
            try:
                return sum(1 << pos[str(x)] for x in v)
            except KeyError as k:
                raise ParseError(f"unknown atom {k.args[0]!r}") from None

        sl = MeetSemilattice.powerset(len(atoms))
    elif kind == "table":
        els = _labels(_require(target, "elements"))
        meet = {}
        for row in _require(target, "meet", list):
            if not isinstance(row, list) or len(row) != 3:
                raise ParseError("meet rows must be [x, y, x∧y]")
            meet[(str(row[0]), str(row[1]))] = str(row[2])
        sl = MeetSemilattice.from_table(els, meet)

        def value(v):
            if str(v) not in els:
                raise ParseError(f"value {v!r} is not a semilattice element")
            return str(v)
    else:
        raise ParseError(f"unknown target kind {kind!r}")

    table = {}
    for row in _require(d, "table", list):
        if not isinstance(row, list) or len(row) != 3:
            raise ParseError("table rows must be [a, b, value]")
        table[(elem(row[0]), elem(row[1]))] = value(row[2])
    embed = None
    if "embedding" in d:
        if kind != "sets":
            raise ParseError("an embedding needs a set-valued target")
        emb = {elem(k): value(v) for k, v in _require(d, "embedding", dict).items()}
        embed = emb.__getitem__
    return LatticeForm(L, sl, table, embed, enforce_absorption=False)


def form_to_json(f: LatticeForm, axioms: FormAxioms | None = None, atoms=None) -> dict:
    L = f.source

    def val(v):
        if atoms is not None and isinstance(v, int):
            return [atoms[i] for i in iter_bits(v)]
        return v

    table = [[element_name(L, a), element_name(L, b), val(f.table[(a, b)])]
             for a in L.elements for b in L.elements]
    out = {"lattice": lattice_to_json(L), "target": f.target.name, "table": table}
    if axioms is not None:
        out["axioms"] = axioms.as_dict()
    return out


# relations and Morse data ---------------------------------------------------

def relation_from_json(d) -> Relation:
    return Relation.from_edges(_labels(_require(d, "atoms")), _pairs(_require(d, "edges")))


def relation_to_json(F: Relation) -> dict:
    return {"atoms": list(F.atoms), "edges": [list(e) for e in F.edges()]}


def family_from_json(F: Relation, d) -> list:
    """``{"sets": [[atom, ...], ...]}`` as atom masks."""
    sets = _require(d, "sets", list)
    out = []
    for s in sets:
        try:
            out.append(F.subset(_labels(s)))
        except ValidationError as e:
            raise ParseError(str(e)) from None
    return out


def subset_name(F: Relation, mask: int) -> str:
    return set_notation(F.labels(mask))


def morse_to_json(M: MorseRepresentation) -> dict:
    F = M.relation
    return {
        "sets": sorted([sorted(F.labels(s), key=label_key) for s in M.sets], key=str),
        "covers": sorted([[subset_name(F, a), subset_name(F, b)] for a, b in M.covers()]),
    }


def morse_dot(M: MorseRepresentation) -> str:
    F = M.relation
    return hasse_dot("morse_graph", [subset_name(F, s) for s in M.sets],
                     [(subset_name(F, a), subset_name(F, b)) for a, b in M.covers()])


def tessellation_to_json(T: MorseTessellation) -> dict:
    F = T.relation
    return {
        "tiles": sorted([sorted(F.labels(t), key=label_key) for t in T.tiles], key=str),
        "covers": sorted([[subset_name(F, a), subset_name(F, b)] for a, b in T.covers()]),
        "blocks": sorted([sorted(F.labels(T.lattice.label(a)), key=label_key)
                          for a in T.lattice.elements], key=lambda s: (len(s), str(s))),
    }


def tessellation_dot(T: MorseTessellation) -> str:
    F = T.relation
    return hasse_dot("tessellation", [subset_name(F, t) for t in T.tiles],
                     [(subset_name(F, a), subset_name(F, b)) for a, b in T.covers()])


# maps, grids, oracles -------------------------------------------------------

def grid_from_json(d) -> GridAlgebra1D:
    bp = _require(d, "breakpoints", list)
    return GridAlgebra1D(tuple(parse_rational(x) for x in bp))


def grid_to_json(g: GridAlgebra1D) -> dict:
    return {"breakpoints": [fmt_rational(x) for x in g.breakpoints]}


def map_from_json(d) -> PiecewiseMonotoneMap1D:
    bp = tuple(parse_rational(x) for x in _require(d, "breakpoints", list))
    pieces = tuple((parse_rational(_require(p, "slope")), parse_rational(_require(p, "intercept")))
                   for p in _require(d, "pieces", list))
    return PiecewiseMonotoneMap1D(bp, pieces)


def map_to_json(f: PiecewiseMonotoneMap1D) -> dict:
    return {"breakpoints": [fmt_rational(x) for x in f.breakpoints],
            "pieces": [{"slope": fmt_rational(p.slope), "intercept": fmt_rational(p.intercept)}
                       for p in f.pieces]}


def oracle_from_json(d, space) -> FixedPointOracle:
    """``{"kind": "global_fixed_point", "point": "p/q"}``."""
    kind = _require(d, "kind")
    if kind != "global_fixed_point":
        raise ParseError(f"unknown oracle kind {kind!r}")
    p = parse_rational(_require(d, "point"))
    if not space[0] <= p <= space[1]:
        raise ValidationError("oracle point lies outside the space")
    return FixedPointOracle(p, tuple(space))


def oracle_to_json(o: FixedPointOracle) -> dict:
    return {"kind": "global_fixed_point", "point": fmt_rational(o.point)}
