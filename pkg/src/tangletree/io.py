"""Reading input artifacts and serialising results.

JSON inputs carry a "type" tag: "table" for explicit-table universes,
"bipartition" for set bipartitions, "graph" for graphs (which may also
arrive as plain edge-list text, one "u v" per line).  All serialisers
sort their output so equal objects produce equal bytes.
"""

import json

from .core import BipartitionUniverse, SeparationSystem, TablePoset
from .errors import InputError
from .graphsep import Graph, GraphUniverse
from .orient import StarFamily


def parse_input(text):
    """Parse an input artifact: JSON object or edge-list text."""
    stripped = text.strip()
    if not stripped:
        raise InputError("empty input")
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as e:
            raise InputError(f"bad JSON: {e}")
        if not isinstance(obj, dict) or "type" not in obj:
            raise InputError('JSON input needs a "type" field')
        return obj
    edges = []
    for ln, line in enumerate(stripped.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"line {ln}: expected 'u v'")
        edges.append((parts[0], parts[1]))
    return {"type": "graph", "edges": edges}


def load_path(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_input(fh.read())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}")


def load_graph(obj) -> Graph:
    if obj.get("type") != "graph":
        raise InputError("not a graph input")
    edges = [tuple(e) for e in obj.get("edges", [])]
    for e in edges:
        if len(e) != 2:
            raise InputError(f"bad edge {e!r}")
    vertices = set(obj.get("vertices", []))
    return Graph.from_edges(edges, isolated=vertices)


def load_universe(obj):
    kind = obj.get("type")
    if kind == "table":
        names = obj.get("elements")
        if isinstance(names, int):
            n, names = names, None
        else:
            n = len(names)
        return TablePoset(
            n,
            obj["involution"],
            [tuple(p) for p in obj["leq_pairs"]],
            order=obj.get("order"),
            names=names,
        )
    if kind == "bipartition":
        ground = tuple(obj["ground_set"])
        weights = obj.get("order_weights")
        if weights is None:
            return BipartitionUniverse(ground)
        idx = {name: i for i, name in enumerate(ground)}
        w = {}
        for key, val in weights.items():
            u, v = key.split(",")
            w[frozenset((idx[u.strip()], idx[v.strip()]))] = val

        def cut(mask):
            total = 0
            for pair, wij in w.items():
                i, j = tuple(pair)
                if (mask >> i & 1) != (mask >> j & 1):
                    total += wij
            return total

        return BipartitionUniverse(ground, order_fn=cut)
    raise InputError(f"unknown universe type {kind!r}")


def element_from_json(U, item):
    """Decode one oriented separation in the universe's file encoding."""
    if isinstance(U, TablePoset):
        if isinstance(item, str):
            return U.id_of(item)
        return item
    if isinstance(U, BipartitionUniverse):
        return U.mask_of(item)
    if isinstance(U, GraphUniverse):
        a, b = item
        return (U.graph.mask_of(a), U.graph.mask_of(b))
    raise InputError("universe has no file encoding")


def element_to_json(U, x):
    if isinstance(U, TablePoset):
        return U.name_of(x)
    if isinstance(U, BipartitionUniverse):
        return list(U.names_of(x))
    if isinstance(U, GraphUniverse):
        return [list(U.graph.names_of(x[0])), list(U.graph.names_of(x[1]))]
    raise InputError("universe has no file encoding")


def load_system(obj, U) -> SeparationSystem:
    spec = obj.get("separations", "all")
    if spec == "all":
        return SeparationSystem(U, frozenset(U.elements()))
    members = set()
    for item in spec:
        x = element_from_json(U, item)
        U.check_element(x)
        members.add(x)
        members.add(U.invert(x))
    return SeparationSystem(U, frozenset(members))


def load_family(obj, S) -> StarFamily:
    if "stars" not in obj:
        raise InputError('family file needs a "stars" list')
    stars = []
    for raw in obj["stars"]:
        stars.append(frozenset(element_from_json(S.universe, it) for it in raw))
    return StarFamily(S, stars, require_stars=False, name="file")


# -- serialisers --


def orientation_to_json(S, O):
    U = S.universe
    return [element_to_json(U, x) for x in sorted(O, key=U.sort_key)]


def nested_to_json(S, members):
    U = S.universe
    return [
        element_to_json(U, s) for s in sorted(members, key=U.sort_key)
    ]


def stree_to_json(T):
    U = T.system.universe
    return {
        "vertices": T.n,
        "edges": [
            {
                "from": u,
                "to": v,
                "label": element_to_json(U, T.alpha[(u, v)]),
            }
            for u, v in sorted(T.directed_edges())
        ],
    }


def stree_to_dot(T, name="stree"):
    U = T.system.universe
    lines = [f"graph {name} {{"]
    for v in range(T.n):
        lines.append(f'  n{v} [label="{v}"];')
    for u, v in sorted(T.edges):
        lab = U.format_element(T.alpha[(u, v)])
        lines.append(f'  n{u} -- n{v} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines)


def decomposition_to_dot(dec, name="decomposition"):
    lines = [f"graph {name} {{"]
    for v, part in enumerate(dec.parts):
        label = "{" + ",".join(map(str, part)) + "}"
        lines.append(f'  n{v} [label="{label}"];')
    for u, v in sorted(dec.tree.edges):
        lines.append(f"  n{u} -- n{v};")
    lines.append("}")
    return "\n".join(lines)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
