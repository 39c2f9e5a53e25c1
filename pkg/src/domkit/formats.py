"""Text and JSON formats for posets, maps, ep-pairs, diagrams, presheaves,
and domain equations.

Poset text files leave reflexivity implicit (the checker closes it) but must
list transitive pairs themselves: a missing composite is a validation error
with a witness triple, not silently repaired. The JSON mirror carries the
relation exactly as given, so a missing reflexive pair is reportable there
too. Writers emit relations in element order, which keeps round trips
byte-identical.
"""

from __future__ import annotations

import json
import os

from domkit.errors import ParseError
from domkit.poset import (
    FinPoset,
    MonotoneMap,
    check_poset,
    empty,
    hasse_edges,
    unit,
)
from domkit.ep import EpPair, make_ep
from domkit.lift import BOT, StrictEpPair, StrictMap, lift_poset, support
from domkit.bilimit_total import EpDiagram
from domkit.bilimit_partial import PartialEpDiagram
from domkit.presheaf import PresheafPoset
from domkit.solver import parse_expr


# --- posets -------------------------------------------------------------------

def poset_to_dict(P: FinPoset) -> dict:
    """Full relation, reflexive pairs included: the JSON format is exact."""
    return {"name": P.name, "elements": list(P.elements),
            "le": [[x, y] for x, y in P.pairs()]}


def poset_from_dict(d: dict) -> FinPoset:
    return check_poset(d.get("name", "poset"), d["elements"],
                       [tuple(p) for p in d["le"]])


def poset_to_json(P: FinPoset) -> str:
    return json.dumps(poset_to_dict(P), indent=2, sort_keys=True) + "\n"


def poset_from_json(text: str) -> FinPoset:
    return poset_from_dict(json.loads(text))


def poset_to_text(P: FinPoset) -> str:
    lines = [f"poset {P.name}"]
    lines += [f"elem {x}" for x in P.elements]
    lines += [f"le {x} {y}" for x, y in P.pairs() if x != y]
    return "\n".join(lines) + "\n"


def poset_from_text(text: str) -> FinPoset:
    """Reflexivity is implicit; transitive pairs must be listed."""
    name = "poset"
    elements = []
    le = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "poset" and len(parts) == 2:
            name = parts[1]
        elif parts[0] == "elem" and len(parts) == 2:
            elements.append(parts[1])
        elif parts[0] == "le" and len(parts) == 3:
            le.append((parts[1], parts[2]))
        else:
            raise ParseError(f"bad line {line!r}", line=lineno)
    le += [(x, x) for x in elements]
    return check_poset(name, elements, le)


def poset_to_dot(P: FinPoset) -> str:
    """Hasse diagram, edges pointing bottom-to-top."""
    lines = [f'digraph "{P.name}" {{', "  rankdir=BT;"]
    for x in P.elements:
        lines.append(f'  "{x}";')
    for x, y in hasse_edges(P):
        lines.append(f'  "{x}" -> "{y}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- maps and ep-pairs -----------------------------------------------------------

def map_to_dict(f: MonotoneMap) -> dict:
    return {"dom": poset_to_dict(f.dom), "cod": poset_to_dict(f.cod),
            "map": [[x, y] for x, y in f.as_pairs()]}


def map_from_dict(d: dict) -> MonotoneMap:
    dom = poset_from_dict(d["dom"])
    cod = poset_from_dict(d["cod"])
    return MonotoneMap(dom, cod, {x: y for x, y in d["map"]})


def ep_to_dict(pair: EpPair) -> dict:
    return {"emb": map_to_dict(pair.emb), "proj": map_to_dict(pair.proj)}


def ep_from_dict(d: dict) -> EpPair:
    return make_ep(map_from_dict(d["emb"]), map_from_dict(d["proj"]))


def lifted_elem_to_json(u: str):
    """Lifted elements serialize as "bot" or {"eta": <element-id>}."""
    return "bot" if not support(u) else {"eta": u[4:-1]}


def lifted_elem_from_json(v) -> str:
    if v == "bot":
        return BOT
    return f"eta({v['eta']})"


# --- diagrams ----------------------------------------------------------------------

def _read(path):
    with open(path) as fh:
        return fh.read()


def load_poset(path: str) -> FinPoset:
    text = _read(path)
    if text.lstrip().startswith("{"):
        return poset_from_json(text)
    return poset_from_text(text)


def load_ep(path: str) -> EpPair:
    return ep_from_dict(json.loads(_read(path)))


def load_diagram(path: str):
    """Diagram text format: optional `mode total|partial`, then `index`,
    `object`, and `edge` lines referencing files relative to the diagram.

    Identity edges are synthesized and missing composites are filled in by
    composing along the listed edges; explicitly listed edges always win, so
    a file can exhibit a functoriality violation on purpose."""
    here = os.path.dirname(os.path.abspath(path))
    mode = "total"
    index = None
    objects = {}
    listed = {}
    for lineno, raw in enumerate(_read(path).splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "mode" and len(parts) == 2:
            mode = parts[1]
            if mode not in ("total", "partial"):
                raise ParseError(f"unknown mode {mode!r}", line=lineno)
        elif parts[0] == "index" and len(parts) == 2:
            index = load_poset(os.path.join(here, parts[1]))
        elif parts[0] == "object" and len(parts) == 3:
            objects[parts[1]] = load_poset(os.path.join(here, parts[2]))
        elif parts[0] == "edge" and len(parts) == 4:
            listed[(parts[1], parts[2])] = load_ep(os.path.join(here, parts[3]))
        else:
            raise ParseError(f"bad line {line!r}", line=lineno)
    if index is None:
        raise ParseError("diagram has no index line")

    if mode == "partial":
        lifts = {i: lift_poset(P) for i, P in objects.items()}
        edges = {}
        for (i, j), pair in listed.items():
            edges[(i, j)] = StrictEpPair(StrictMap(lifts[i], lifts[j], pair.emb),
                                         StrictMap(lifts[j], lifts[i], pair.proj))
        _fill_edges(index, edges,
                    lambda i: _strict_identity(lifts[i]),
                    lambda f, g: _strict_compose(f, g))
        return PartialEpDiagram(index, objects, edges,
                                name=os.path.basename(path))
    _fill_edges(index, listed,
                lambda i: _total_identity(objects[i]),
                lambda f, g: EpPair(f.emb.then(g.emb), g.proj.then(f.proj)))
    return EpDiagram(index, objects, listed, name=os.path.basename(path))


def _total_identity(P):
    i = MonotoneMap.identity(P)
    return EpPair(i, i)


def _strict_identity(L):
    i = StrictMap.identity(L)
    return StrictEpPair(i, i)


def _strict_compose(f, g):
    return StrictEpPair(f.emb.then(g.emb), g.proj.then(f.proj))


def _fill_edges(index, edges, identity, compose):
    """Add identity edges and compose the remaining relations from what was
    listed; leaves conflicts for the validator to report."""
    for i in index.elements:
        edges.setdefault((i, i), identity(i))
    changed = True
    while changed:
        changed = False
        for i in index.elements:
            for j in index.elements:
                if not index.leq(i, j) or (i, j) in edges:
                    continue
                for m in index.elements:
                    if m != i and m != j and (i, m) in edges and (m, j) in edges:
                        edges[(i, j)] = compose(edges[(i, m)], edges[(m, j)])
                        changed = True
                        break


# --- presheaves ---------------------------------------------------------------------

def load_presheaf(path: str) -> PresheafPoset:
    """Format: `base <posetfile>`, `stage <p> <posetfile>`,
    `restrict <p> <q> <mapfile>` (identity restrictions are synthesized)."""
    here = os.path.dirname(os.path.abspath(path))
    base = None
    stages = {}
    restrictions = {}
    for lineno, raw in enumerate(_read(path).splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "base" and len(parts) == 2:
            base = load_poset(os.path.join(here, parts[1]))
        elif parts[0] == "stage" and len(parts) == 3:
            stages[parts[1]] = load_poset(os.path.join(here, parts[2]))
        elif parts[0] == "restrict" and len(parts) == 4:
            restrictions[(parts[1], parts[2])] = map_from_dict(
                json.loads(_read(os.path.join(here, parts[3]))))
        else:
            raise ParseError(f"bad line {line!r}", line=lineno)
    if base is None:
        raise ParseError("presheaf has no base line")
    for p in base.elements:
        if p in stages:
            restrictions.setdefault((p, p), MonotoneMap.identity(stages[p]))
    return PresheafPoset(base, stages, restrictions,
                         name=os.path.basename(path))


# --- domain equations ------------------------------------------------------------------

class EquationFile:
    __slots__ = ("name", "expr", "base", "mode", "depth")

    def __init__(self, name, expr, base, mode, depth):
        self.name = name
        self.expr = expr
        self.base = base
        self.mode = mode
        self.depth = depth


def load_equation(path: str) -> EquationFile:
    """Format: `domain <name> = <expr>` plus `base`, `mode`, `depth`
    directives. Base may be `0`, `1`, or a poset file path."""
    here = os.path.dirname(os.path.abspath(path))
    name = None
    expr = None
    base = empty("0")
    mode = "partial"
    depth = 4
    for lineno, raw in enumerate(_read(path).splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "domain":
            if len(parts) < 4 or parts[2] != "=":
                raise ParseError("expected `domain <name> = <expr>`", line=lineno)
            name = parts[1]
            expr = parse_expr(" ".join(parts[3:]))
        elif parts[0] == "base" and len(parts) == 2:
            if parts[1] == "0":
                base = empty("0")
            elif parts[1] == "1":
                base = unit()
            else:
                base = load_poset(os.path.join(here, parts[1]))
        elif parts[0] == "mode" and len(parts) == 2:
            if parts[1] not in ("total", "partial"):
                raise ParseError(f"unknown mode {parts[1]!r}", line=lineno)
            mode = parts[1]
        elif parts[0] == "depth" and len(parts) == 2:
            depth = int(parts[1])
        else:
            raise ParseError(f"bad line {line!r}", line=lineno)
    if expr is None:
        raise ParseError("equation file has no domain line")
    return EquationFile(name or "D", expr, base, mode, depth)
