"""Embedded graphs with explicit faces, Kasteleyn-flat decorations,
matching enumeration, polygamy machinery and reflection quotients.

Faces are first-class data (cyclic walks of (edge_id, forward) entries),
never silently recomputed: the cokernel of a Kasteleyn matrix depends on
the embedding, so builders emit faces and operations transform them.
"""

from __future__ import annotations

import json
import random
from functools import cmp_to_key
from itertools import combinations

from kasteleyn.matrices import ExactMatrix
from kasteleyn.rings import DomainError, LaurentPoly, format_laurent, parse_laurent

MONO = "mono"
ODD = "odd"
EVEN = "even"

_KINDS = (MONO, ODD, EVEN)


class GuardExceeded(DomainError):
    pass


class Vertex:
    __slots__ = ("id", "kind", "color", "label")

    def __init__(self, vid, kind=MONO, color=None, label=None):
        if kind not in _KINDS:
            raise DomainError(f"bad vertex kind {kind!r}")
        if color not in (None, "black", "white"):
            raise DomainError(f"bad color {color!r}")
        self.id = vid
        self.kind = kind
        self.color = color
        self.label = label

    def clone(self, **kw):
        out = Vertex(self.id, self.kind, self.color, self.label)
        for k, v in kw.items():
            setattr(out, k, v)
        return out

    def __repr__(self):
        return f"V({self.id},{self.kind},{self.color})"


class Edge:
    __slots__ = ("id", "u", "v", "weight", "sign", "orient")

    def __init__(self, eid, u, v, weight=1, sign=None, orient=None):
        if sign not in (None, 1, -1):
            raise DomainError("sign must be None, 1 or -1")
        if orient not in (None, 1, -1):
            raise DomainError("orient must be None, 1 (u->v) or -1 (v->u)")
        self.id = eid
        self.u = u
        self.v = v
        self.weight = weight
        self.sign = sign
        self.orient = orient

    def other(self, w):
        if w == self.u:
            return self.v
        if w == self.v:
            return self.u
        raise DomainError(f"vertex {w} not on edge {self.id}")

    def is_loop(self):
        return self.u == self.v

    def clone(self, **kw):
        out = Edge(self.id, self.u, self.v, self.weight, self.sign, self.orient)
        for k, v in kw.items():
            setattr(out, k, v)
        return out

    def __repr__(self):
        return f"E({self.id}:{self.u}-{self.v})"


class EmbeddedGraph:
    """Planar (sphere with marked infinite face) or projective-plane graph.

    faces: list of walks, each walk a tuple of (edge_id, forward) entries;
    forward means the walk traverses the edge u -> v.
    """

    def __init__(self, vertices, edges, faces, surface="sphere",
                 infinite_face=None, coords=None, flags=None):
        if surface not in ("sphere", "projective"):
            raise DomainError(f"bad surface {surface!r}")
        self.vertices = list(vertices)
        self.edges = list(edges)
        self.faces = [tuple((int(e), bool(d)) for e, d in walk) for walk in faces]
        self.surface = surface
        self.infinite_face = infinite_face
        self.coords = dict(coords) if coords else {}
        self.flags = dict(flags) if flags else {}
        self._vmap = {v.id: v for v in self.vertices}
        self._emap = {e.id: e for e in self.edges}
        if len(self._vmap) != len(self.vertices):
            raise DomainError("duplicate vertex ids")
        if len(self._emap) != len(self.edges):
            raise DomainError("duplicate edge ids")
        self._adj = {v.id: [] for v in self.vertices}
        for e in self.edges:
            self._adj[e.u].append(e.id)
            if not e.is_loop():
                self._adj[e.v].append(e.id)
        for lst in self._adj.values():
            lst.sort()

    # -- access

    def vertex(self, vid):
        return self._vmap[vid]

    def edge(self, eid):
        return self._emap[eid]

    def incident(self, vid):
        return self._adj[vid]

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_edges(self):
        return len(self.edges)

    def ring(self):
        return "laurent" if any(isinstance(e.weight, LaurentPoly) for e in self.edges) else "z"

    def is_bipartite_colored(self):
        if any(v.color is None for v in self.vertices):
            return False
        for e in self.edges:
            if not e.is_loop() and self.vertex(e.u).color == self.vertex(e.v).color:
                return False
        return True

    def _n_components(self):
        seen = set()
        out = 0
        for start in self._vmap:
            if start in seen:
                continue
            out += 1
            stack = [start]
            seen.add(start)
            while stack:
                v = stack.pop()
                for eid in self._adj[v]:
                    w = self._emap[eid].other(v)
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return out

    def is_bipartite(self):
        """Two-colorability test, ignoring stored colors."""
        color = {}
        for start in sorted(self._vmap):
            if start in color:
                continue
            color[start] = 0
            queue = [start]
            while queue:
                v = queue.pop()
                for eid in self._adj[v]:
                    e = self._emap[eid]
                    if e.is_loop():
                        return False
                    w = e.other(v)
                    if w not in color:
                        color[w] = 1 - color[v]
                        queue.append(w)
                    elif color[w] == color[v]:
                        return False
        return True

    def walk_vertices(self, walk):
        """Vertex sequence visited by a face walk (start vertex of each entry)."""
        out = []
        for eid, fwd in walk:
            e = self._emap[eid]
            out.append(e.u if fwd else e.v)
        return out

    def validate(self):
        seen = {}
        for walk in self.faces:
            prev_head = None
            for eid, fwd in walk:
                e = self._emap[eid]
                seen[eid] = seen.get(eid, 0) + 1
                tail = e.u if fwd else e.v
                head = e.v if fwd else e.u
                if prev_head is not None and tail != prev_head:
                    raise DomainError(f"face walk not connected at edge {eid}")
                prev_head = head
            if walk:
                first = self._emap[walk[0][0]]
                tail0 = first.u if walk[0][1] else first.v
                if prev_head != tail0:
                    raise DomainError("face walk does not close")
        for e in self.edges:
            if seen.get(e.id, 0) != 2:
                raise DomainError(
                    f"edge {e.id} lies on {seen.get(e.id, 0)} face sides, expected 2"
                )
        euler = self.n_vertices - self.n_edges + len(self.faces)
        if self.surface == "sphere":
            # every component carries its own face walks (an isolated vertex
            # contributes one empty walk), so V - E + F = 2 per component
            target = 2 * self._n_components()
        else:
            target = 1
        if euler != target:
            raise DomainError(f"Euler check failed: V-E+F = {euler}, expected {target}")
        if self.surface == "sphere" and self.faces:
            if self.infinite_face is None or not (0 <= self.infinite_face < len(self.faces)):
                raise DomainError("sphere graphs need a designated infinite face")
        if all(v.color is not None for v in self.vertices):
            for e in self.edges:
                if not e.is_loop() and self.vertex(e.u).color == self.vertex(e.v).color:
                    raise DomainError(f"coloring not proper at edge {e.id}")
        return True

    def clone(self):
        return EmbeddedGraph(
            [v.clone() for v in self.vertices],
            [e.clone() for e in self.edges],
            [list(w) for w in self.faces],
            self.surface,
            self.infinite_face,
            self.coords,
            self.flags,
        )

    def __repr__(self):
        return (
            f"<EmbeddedGraph V={self.n_vertices} E={self.n_edges} "
            f"F={len(self.faces)} {self.surface}>"
        )


# ---------------------------------------------------------------------------
# JSON format


def _weight_str(w):
    if isinstance(w, LaurentPoly):
        return format_laurent(w, compact=True)
    return str(w)


def _weight_parse(s):
    try:
        return int(s)
    except ValueError:
        return parse_laurent(s)


def graph_to_json(G):
    data = {
        "surface": G.surface,
        "infinite_face": G.infinite_face,
        "vertices": [
            {"id": v.id, "kind": v.kind, "color": v.color, "label": v.label}
            for v in G.vertices
        ],
        "edges": [
            {
                "id": e.id,
                "u": e.u,
                "v": e.v,
                "weight": _weight_str(e.weight),
                "sign": e.sign,
                "orientation": e.orient,
            }
            for e in G.edges
        ],
        "faces": [[[eid, bool(d)] for eid, d in walk] for walk in G.faces],
    }
    if G.coords:
        data["coords"] = {str(k): list(v) for k, v in G.coords.items()}
    if G.flags:
        data["flags"] = G.flags
    return data


def graph_from_json(data):
    verts = [
        Vertex(v["id"], v.get("kind", MONO), v.get("color"), v.get("label"))
        for v in data["vertices"]
    ]
    edges = [
        Edge(
            e["id"], e["u"], e["v"],
            _weight_parse(e.get("weight", "1")),
            e.get("sign"),
            e.get("orientation"),
        )
        for e in data["edges"]
    ]
    faces = [[(entry[0], bool(entry[1])) for entry in walk] for walk in data["faces"]]
    coords = {int(k): tuple(v) for k, v in data.get("coords", {}).items()}
    return EmbeddedGraph(
        verts, edges, faces, data.get("surface", "sphere"),
        data.get("infinite_face"), coords, data.get("flags"),
    )


def dump_graph(G):
    return json.dumps(graph_to_json(G), indent=1, sort_keys=True)


def load_graph(text):
    return graph_from_json(json.loads(text))


# ---------------------------------------------------------------------------
# face tracing from integer coordinates


def _angle_cmp(a, b):
    """Counterclockwise comparison of nonzero integer vectors."""
    def half(p):
        x, y = p
        return 0 if (y > 0 or (y == 0 and x > 0)) else 1

    ha, hb = half(a), half(b)
    if ha != hb:
        return -1 if ha < hb else 1
    cross = a[0] * b[1] - a[1] * b[0]
    if cross > 0:
        return -1
    if cross < 0:
        return 1
    return 0


def trace_faces(coords, edge_list):
    """Trace all faces of a straight-line plane embedding.

    coords: vertex id -> integer pair (the y coordinate may carry an
    implicit constant scale; only angle comparisons are used).
    edge_list: (edge_id, u, v) triples; parallel directions at a vertex are
    rejected.  Returns (faces, outer_index) with faces as walks of
    (edge_id, forward) entries; the outer face is the clockwise one.
    """
    out_darts = {v: [] for v in coords}
    for eid, u, v in edge_list:
        if u == v:
            raise DomainError("face tracing does not handle self-loops")
        out_darts[u].append((eid, True))
        out_darts[v].append((eid, False))
    ends = {(eid, d): (u if d else v, v if d else u) for eid, u, v in edge_list for d in (True, False)}

    def vec(dart):
        tail, head = ends[dart]
        return (coords[head][0] - coords[tail][0], coords[head][1] - coords[tail][1])

    rotation = {}
    for v, darts in out_darts.items():
        darts.sort(key=cmp_to_key(lambda a, b: _angle_cmp(vec(a), vec(b))))
        for i in range(len(darts)):
            if i + 1 < len(darts) and _angle_cmp(vec(darts[i]), vec(darts[i + 1])) == 0:
                raise DomainError(f"parallel edge directions at vertex {v}")
        rotation[v] = darts

    def next_dart(dart):
        eid, d = dart
        tail, head = ends[dart]
        rev = (eid, not d)
        darts = rotation[head]
        i = darts.index(rev)
        # clockwise-next from the reversed dart keeps the face on the left
        return darts[(i - 1) % len(darts)]

    faces = []
    used = set()
    for start in sorted(ends):
        if start in used:
            continue
        walk = []
        dart = start
        while True:
            walk.append(dart)
            used.add(dart)
            dart = next_dart(dart)
            if dart == start:
                break
        faces.append(walk)

    def signed_area(walk):
        total = 0
        for dart in walk:
            tail, head = ends[dart]
            (x1, y1), (x2, y2) = coords[tail], coords[head]
            total += x1 * y2 - x2 * y1
        return total

    if len(faces) == 1:
        return faces, 0
    # the outer face is the most-clockwise walk (holes and the outer walks of
    # other components are also clockwise but enclose less area)
    outer = min(range(len(faces)), key=lambda i: (signed_area(faces[i]), faces[i][0]))
    return faces, outer


# ---------------------------------------------------------------------------
# Kasteleyn-flat decorations


def _edge_faces(G):
    inc = {e.id: [] for e in G.edges}
    for fi, walk in enumerate(G.faces):
        for eid, _ in walk:
            inc[eid].append(fi)
    return inc


def _dual_tree_order(G, root, tree_seed=0):
    """BFS tree of the dual graph: returns list of (face, parent_face,
    connecting_edge) in visit order, root first with (root, None, None)."""
    inc = _edge_faces(G)
    adj = {fi: [] for fi in range(len(G.faces))}
    for eid, fs in inc.items():
        if len(fs) == 2 and fs[0] != fs[1]:
            adj[fs[0]].append((eid, fs[1]))
            adj[fs[1]].append((eid, fs[0]))
    rng = random.Random(tree_seed)
    order = [(root, None, None)]
    seen = {root}
    frontier = [root]
    while frontier:
        nxt = []
        for f in frontier:
            neigh = sorted(adj[f])
            if tree_seed:
                rng.shuffle(neigh)
            for eid, g in neigh:
                if g not in seen:
                    seen.add(g)
                    order.append((g, f, eid))
                    nxt.append(g)
        frontier = nxt
    if len(seen) != len(G.faces):
        raise DomainError("dual graph is disconnected")
    return order


def _face_minus_count(G, walk):
    c = 0
    for eid, _ in walk:
        if G.edge(eid).sign == -1:
            c += 1
    return c


def _percus_target_odd(walk):
    """Percus rule: odd number of minus signs iff the face has 4k sides."""
    return len(walk) % 4 == 0


def kasteleyn_percus_sign(G, tree_seed=0):
    """Kasteleyn-flat sign decoration of a bipartite monogamous sphere graph
    by dual-spanning-tree propagation, faces fixed leaf-to-root."""
    if G.surface != "sphere":
        raise DomainError("Percus signing is for sphere embeddings")
    if any(v.kind != MONO for v in G.vertices):
        raise DomainError("resolve polygamous vertices before signing")
    if not G.is_bipartite_colored():
        raise DomainError("Percus signing needs a properly 2-colored graph")
    out = G.clone()
    for e in out.edges:
        e.sign = 1
        e.orient = None
    order = _dual_tree_order(out, out.infinite_face, tree_seed)
    for f, parent, eid in reversed(order):
        if parent is None:
            continue
        walk = out.faces[f]
        want_odd = _percus_target_odd(walk)
        if (_face_minus_count(out, walk) % 2 == 1) != want_odd:
            e = out.edge(eid)
            e.sign = -e.sign
    if out.n_vertices % 2 == 1:
        out.flags["odd_vertex_count"] = True
    for fi, walk in enumerate(out.faces):
        if fi == out.infinite_face:
            continue
        if (_face_minus_count(out, walk) % 2 == 1) != _percus_target_odd(walk):
            raise AssertionError("sign propagation failed to flatten a finite face")
    return out


def _agree_count(G, walk):
    agree = 0
    for eid, fwd in walk:
        e = G.edge(eid)
        if (e.orient == 1) == fwd:
            agree += 1
    return agree


def _solve_gf2(rows, rhs, n_cols):
    """Solve a GF(2) system given as bitmask rows; returns a solution bitmask
    or None."""
    rows = list(rows)
    rhs = list(rhs)
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(rows)) if rows[i] >> c & 1), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rhs[r], rhs[piv] = rhs[piv], rhs[r]
        for i in range(len(rows)):
            if i != r and rows[i] >> c & 1:
                rows[i] ^= rows[r]
                rhs[i] ^= rhs[r]
        pivots.append((r, c))
        r += 1
    for i in range(r, len(rows)):
        if rhs[i]:
            return None
    sol = 0
    for i, c in pivots:
        if rhs[i]:
            sol |= 1 << c
    return sol


def kasteleyn_orient(G, tree_seed=0):
    """Kasteleyn-flat orientation.

    Sphere: odd number of walk-agreeing edges on every finite face, by
    dual-tree propagation.  Projective plane: the rule is odd in each
    direction on every face; the input must be locally but not globally
    bipartite (all faces even, graph non-bipartite).
    """
    if any(v.kind != MONO for v in G.vertices):
        raise DomainError("resolve polygamous vertices before orienting")
    out = G.clone()
    for e in out.edges:
        e.orient = 1
        e.sign = None
    if out.surface == "sphere":
        order = _dual_tree_order(out, out.infinite_face, tree_seed)
        for f, parent, eid in reversed(order):
            if parent is None:
                continue
            if _agree_count(out, out.faces[f]) % 2 != 1:
                e = out.edge(eid)
                e.orient = -e.orient
        if out.n_vertices % 2 == 1:
            out.flags["odd_vertex_count"] = True
        for fi, walk in enumerate(out.faces):
            if fi != out.infinite_face and _agree_count(out, walk) % 2 != 1:
                raise AssertionError("orientation propagation failed on a finite face")
        return out

    # projective plane
    for walk in out.faces:
        if len(walk) % 2 == 1:
            raise DomainError("projective rule needs all faces even (a contractible odd cycle exists)")
    if out.is_bipartite():
        raise DomainError("projective rule needs a non-bipartite (locally-only) graph")
    order = _dual_tree_order(out, 0, tree_seed)
    for f, parent, eid in reversed(order):
        if parent is None:
            continue
        if _agree_count(out, out.faces[f]) % 2 != 1:
            e = out.edge(eid)
            e.orient = -e.orient
    bad = [fi for fi, walk in enumerate(out.faces) if _agree_count(out, walk) % 2 != 1]
    if bad:
        # flipping edge e toggles face f's parity once per odd incidence
        eids = sorted(e.id for e in out.edges)
        col = {eid: i for i, eid in enumerate(eids)}
        rows, rhs = [], []
        for fi, walk in enumerate(out.faces):
            mask = 0
            for eid, _ in walk:
                mask ^= 1 << col[eid]
            rows.append(mask)
            rhs.append(1 if fi in bad else 0)
        sol = _solve_gf2(rows, rhs, len(eids))
        if sol is None:
            out.flags["not_flat_faces"] = bad
        else:
            for eid, i in col.items():
                if sol >> i & 1:
                    e = out.edge(eid)
                    e.orient = -e.orient
    if out.n_vertices % 2 == 1:
        out.flags["odd_vertex_count"] = True
    return out


class FaceReport:
    def __init__(self, face, sides, value, ok, rule):
        self.face = face
        self.sides = sides
        self.value = value
        self.ok = ok
        self.rule = rule

    def __repr__(self):
        return f"<Face {self.face}: {self.rule} sides={self.sides} value={self.value} ok={self.ok}>"


def verify_flatness(G):
    """Per-face flatness reports; overall verdict skips the infinite face
    when the vertex count is odd."""
    signed = all(e.sign is not None for e in G.edges)
    oriented = all(e.orient is not None for e in G.edges)
    if not signed and not oriented:
        raise DomainError("no decoration to verify")
    reports = []
    for fi, walk in enumerate(G.faces):
        sides = len(walk)
        if signed:
            minus = _face_minus_count(G, walk)
            ok = (minus % 2 == 1) == _percus_target_odd(walk)
            reports.append(FaceReport(fi, sides, minus, ok, "percus"))
        elif G.surface == "sphere":
            agree = _agree_count(G, walk)
            reports.append(FaceReport(fi, sides, agree, agree % 2 == 1, "kasteleyn"))
        else:
            agree = _agree_count(G, walk)
            disagree = sides - agree
            ok = agree % 2 == 1 and disagree % 2 == 1
            reports.append(FaceReport(fi, sides, agree, ok, "projective"))
    overall = True
    skip_infinite = G.surface == "sphere" and G.n_vertices % 2 == 1
    for rep in reports:
        if skip_infinite and rep.face == G.infinite_face:
            continue
        overall = overall and rep.ok
    return reports, overall


# ---------------------------------------------------------------------------
# adjacency matrices


def adjacency_matrix(G, mode):
    """Signed bipartite (black x white) or alternating adjacency matrix."""
    ring = G.ring()
    zero = LaurentPoly.zero() if ring == "laurent" else 0

    def wt(e):
        return e.weight if ring == "z" else LaurentPoly.coerce(e.weight)

    if mode == "bipartite":
        if not G.is_bipartite_colored():
            raise DomainError("bipartite matrix needs a properly colored graph")
        if any(e.sign is None for e in G.edges):
            raise DomainError("bipartite matrix needs a sign decoration")
        blacks = sorted(v.id for v in G.vertices if v.color == "black")
        whites = sorted(v.id for v in G.vertices if v.color == "white")
        bi = {v: i for i, v in enumerate(blacks)}
        wi = {v: i for i, v in enumerate(whites)}
        grid = [[zero] * len(whites) for _ in blacks]
        for e in G.edges:
            if e.is_loop():
                continue
            b, w = (e.u, e.v) if G.vertex(e.u).color == "black" else (e.v, e.u)
            grid[bi[b]][wi[w]] = grid[bi[b]][wi[w]] + e.sign * wt(e)
        return ExactMatrix.from_rows(grid, ring) if blacks and whites else ExactMatrix(
            len(blacks), len(whites), ring, grid
        )
    if mode == "alternating":
        if any(e.orient is None for e in G.edges):
            raise DomainError("alternating matrix needs an orientation")
        ids = sorted(v.id for v in G.vertices)
        pos = {v: i for i, v in enumerate(ids)}
        n = len(ids)
        grid = [[zero] * n for _ in range(n)]
        for e in G.edges:
            if e.is_loop():
                continue
            i, j = pos[e.u], pos[e.v]
            w = wt(e)
            if e.orient == 1:
                grid[i][j] = grid[i][j] + w
                grid[j][i] = grid[j][i] - w
            else:
                grid[j][i] = grid[j][i] + w
                grid[i][j] = grid[i][j] - w
        return ExactMatrix(n, n, ring, grid)
    raise DomainError(f"unknown adjacency mode {mode!r}")


# ---------------------------------------------------------------------------
# matching enumeration (the ground-truth oracle)


class MatchingSet:
    def __init__(self, count, total_weight, matchings=None, weights=None):
        self.count = count
        self.total_weight = total_weight
        self.matchings = matchings
        self.weights = weights

    def __repr__(self):
        return f"<MatchingSet count={self.count} total={self.total_weight}>"


def enumerate_matchings(G, count_guard=64, list_guard=28):
    """Exhaustive backtracking over edges honoring vertex-kind parity rules.

    Monogamous vertices are covered exactly once, odd-polygamous an odd
    number of times, even-polygamous an even number of times.  Self-loops
    never participate.
    """
    if G.n_vertices > count_guard:
        raise GuardExceeded(
            f"{G.n_vertices} vertices exceed the matching-oracle guard {count_guard}"
        )
    listing = G.n_vertices <= list_guard
    monos = sorted(v.id for v in G.vertices if v.kind == MONO)
    polys = sorted(v.id for v in G.vertices if v.kind != MONO)
    order = monos + polys
    rank = {v: i for i, v in enumerate(order)}
    kind = {v.id: v.kind for v in G.vertices}
    forward = {v: [] for v in order}
    for e in sorted(G.edges, key=lambda e: e.id):
        if e.is_loop():
            continue
        a, b = (e.u, e.v) if rank[e.u] < rank[e.v] else (e.v, e.u)
        forward[a].append(e)
    ring = G.ring()
    one = LaurentPoly.one() if ring == "laurent" else 1

    def wt(e):
        return LaurentPoly.coerce(e.weight) if ring == "laurent" else e.weight

    deg = {v: 0 for v in order}
    chosen = []
    results = {"count": 0, "total": LaurentPoly.zero() if ring == "laurent" else 0,
               "matchings": [] if listing else None,
               "weights": [] if listing else None}

    def admissible_sizes(v):
        d = deg[v]
        fwd = forward[v]
        k = kind[v]
        if k == MONO:
            need = 1 - d
            return [need] if 0 <= need <= len(fwd) else []
        par = (1 - d) % 2 if k == ODD else (0 - d) % 2
        return [s for s in range(len(fwd) + 1) if s % 2 == par]

    def rec(i, weight):
        if i == len(order):
            results["count"] += 1
            results["total"] = results["total"] + weight
            if listing:
                results["matchings"].append(frozenset(e.id for e in chosen))
                results["weights"].append(weight)
            return
        v = order[i]
        fwd = forward[v]
        for size in admissible_sizes(v):
            for combo in combinations(fwd, size):
                ok = True
                for e in combo:
                    w = e.other(v)
                    if kind[w] == MONO and deg[w] >= 1:
                        ok = False
                        break
                if not ok:
                    continue
                total = weight
                for e in combo:
                    deg[e.other(v)] += 1
                    total = total * wt(e)
                    chosen.append(e)
                rec(i + 1, total)
                for e in combo:
                    deg[e.other(v)] -= 1
                    chosen.pop()
        return

    rec(0, one)
    return MatchingSet(results["count"], results["total"],
                       results["matchings"], results["weights"])


def is_valid_matching(G, edge_ids):
    deg = {v.id: 0 for v in G.vertices}
    for eid in edge_ids:
        e = G.edge(eid)
        if e.is_loop():
            return False
        deg[e.u] += 1
        deg[e.v] += 1
    for v in G.vertices:
        d = deg[v.id]
        if v.kind == MONO and d != 1:
            return False
        if v.kind == ODD and d % 2 != 1:
            return False
        if v.kind == EVEN and d % 2 != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# rotation/corner machinery for surgeries


def _corner_map(G):
    """corners[v] = dict arriving-edge-id -> (departing-edge-id, face index,
    position of the departing entry in the face walk)."""
    corners = {v.id: {} for v in G.vertices}
    for fi, walk in enumerate(G.faces):
        L = len(walk)
        for pos in range(L):
            eid, fwd = walk[pos]
            e = G.edge(eid)
            head = e.v if fwd else e.u
            nxt_pos = (pos + 1) % L
            nid, nfwd = walk[nxt_pos]
            ne = G.edge(nid)
            tail = ne.u if nfwd else ne.v
            if tail != head:
                raise DomainError("face walk corner mismatch")
            corners[head][eid] = (nid, fi, nxt_pos)
    return corners


def rotation_at(G, vid, corners=None):
    """Cyclic edge order around a vertex recovered from the face corners."""
    if corners is None:
        corners = _corner_map(G)
    cm = corners[vid]
    if not cm:
        return []
    start = min(cm)
    cycle = [start]
    cur = cm[start][0]
    while cur != start:
        cycle.append(cur)
        cur = cm[cur][0]
    if len(cycle) != len(cm):
        raise DomainError(f"rotation at vertex {vid} is not a single cycle")
    return cycle


# ---------------------------------------------------------------------------
# polygamy resolution


class _Surgeon:
    """Mutable graph editor used by the resolution and quotient surgeries."""

    def __init__(self, G):
        self.verts = {v.id: v.clone() for v in G.vertices}
        self.edges = {e.id: e.clone() for e in G.edges}
        self.faces = [list(w) for w in G.faces]
        self.surface = G.surface
        self.infinite = G.infinite_face
        self.coords = dict(G.coords)
        self.flags = dict(G.flags)
        self.next_vid = max(self.verts, default=-1) + 1
        self.next_eid = max(self.edges, default=-1) + 1

    def graph(self):
        return EmbeddedGraph(
            sorted(self.verts.values(), key=lambda v: v.id),
            sorted(self.edges.values(), key=lambda e: e.id),
            self.faces,
            self.surface,
            self.infinite,
            self.coords,
            self.flags,
        )

    def new_vertex(self, kind=MONO, color=None, label=None):
        vid = self.next_vid
        self.next_vid += 1
        self.verts[vid] = Vertex(vid, kind, color, label)
        return vid

    def new_edge(self, u, v, weight=1):
        eid = self.next_eid
        self.next_eid += 1
        self.edges[eid] = Edge(eid, u, v, weight)
        return eid

    def reattach(self, eid, old, new):
        e = self.edges[eid]
        if e.u == old:
            e.u = new
        elif e.v == old:
            e.v = new
        else:
            raise DomainError("reattach endpoint mismatch")

    def drop_face_index(self, idx):
        if self.infinite is not None:
            if self.infinite == idx:
                raise DomainError("cannot drop the infinite face")
            if self.infinite > idx:
                self.infinite -= 1
        del self.faces[idx]


def _resolve_step(s, vid, corners):
    """Apply one monogamy move at polygamous vertex vid; corners must be
    fresh for the current graph."""
    v = s.verts[vid]
    inc = [e for e in s.edges.values() if vid in (e.u, e.v)]
    if any(e.is_loop() for e in inc):
        raise DomainError("self-loop at a polygamous vertex is not supported")
    d = len(inc)
    if d == 0:
        if v.kind == EVEN:
            del s.verts[vid]
            empty = next((i for i, w in enumerate(s.faces) if not w), None)
            if empty is not None:
                if s.infinite is not None and s.infinite > empty:
                    s.infinite -= 1
                elif s.infinite == empty:
                    s.infinite = 0 if len(s.faces) > 1 else None
                del s.faces[empty]
        else:
            v.kind = MONO
        return
    if d == 1:
        if v.kind == ODD:
            v.kind = MONO
            return
        e = inc[0]
        hits = [
            (fi, pos)
            for fi, walk in enumerate(s.faces)
            for pos, (eid, _) in enumerate(walk)
            if eid == e.id
        ]
        if len(hits) != 2 or hits[0][0] != hits[1][0]:
            raise DomainError("pendant edge should be a bridge on one face")
        fi = hits[0][0]
        s.faces[fi] = [ent for ent in s.faces[fi] if ent[0] != e.id]
        del s.edges[e.id]
        del s.verts[vid]
        return
    if d == 2 and v.kind == ODD:
        v.kind = MONO
        return
    rot = rotation_at_surgeon(s, vid, corners)
    if d == 2 and v.kind == EVEN:
        e1, e2 = rot
        v.kind = MONO
        v.color = None
        v2 = s.new_vertex(MONO, None, label=f"{v.label}+" if v.label else None)
        m = s.new_edge(vid, v2)
        # corner (e1 -> e2) and corner (e2 -> e1)
        c12 = corners[vid][e1]
        c21 = corners[vid][e2]
        inserts = [
            (c12[1], c12[2], (m, True)),   # v -> v2 before the e2 entry
            (c21[1], c21[2], (m, False)),  # v2 -> v before the e1 entry
        ]
        _insert_entries(s, inserts)
        s.reattach(e2, vid, v2)
        return
    if d == 3 and v.kind == EVEN:
        e1, e2, e3 = rot
        v.kind = ODD
        v.color = None
        vb = s.new_vertex(ODD, None, label=f"{v.label}+" if v.label else None)
        m = s.new_edge(vid, vb)
        c_e1 = corners[vid][e1]   # corner e1 -> e2
        c_e3 = corners[vid][e3]   # corner e3 -> e1
        inserts = [
            (c_e1[1], c_e1[2], (m, True)),   # v -> vb before the e2 entry
            (c_e3[1], c_e3[2], (m, False)),  # vb -> v before the e1 entry
        ]
        _insert_entries(s, inserts)
        s.reattach(e2, vid, vb)
        s.reattach(e3, vid, vb)
        return
    if d == 3 and v.kind == ODD:
        e1, e2, e3 = rot
        v.kind = MONO
        v.color = None
        v2 = s.new_vertex(MONO, None, label=None)
        v3 = s.new_vertex(MONO, None, label=None)
        t12 = s.new_edge(vid, v2)
        t23 = s.new_edge(v2, v3)
        t31 = s.new_edge(v3, vid)
        c_e1 = corners[vid][e1]   # e1 -> e2
        c_e2 = corners[vid][e2]   # e2 -> e3
        c_e3 = corners[vid][e3]   # e3 -> e1
        inserts = [
            (c_e1[1], c_e1[2], (t12, True)),
            (c_e2[1], c_e2[2], (t23, True)),
            (c_e3[1], c_e3[2], (t31, True)),
        ]
        _insert_entries(s, inserts)
        s.reattach(e2, vid, v2)
        s.reattach(e3, vid, v3)
        s.faces.append([(t12, False), (t31, False), (t23, False)])
        return
    # d >= 4: move two rotation-consecutive edges onto a new even-polygamous
    # vertex joined back by a fresh edge (the connecting edge makes the
    # matching sets bijective and the total parity work out)
    e1, e2, ed = rot[0], rot[1], rot[-1]
    _split_vertex(s, vid, e1, e2, ed, corners)


def _opposite(color):
    if color == "black":
        return "white"
    if color == "white":
        return "black"
    return None


def _insert_entries(s, inserts):
    """Insert face entries at (face, position) spots, adjusting for shifts."""
    for fi, pos, entry in sorted(inserts, key=lambda t: (t[0], -t[1])):
        s.faces[fi].insert(pos, entry)


def _split_vertex(s, vid, e1, e2, ed, corners):
    """Detach rotation-consecutive edges e1, e2 from vid onto a new
    even-polygamous vertex va, joined to vid by a fresh connecting edge
    spliced into the two cut corners."""
    v = s.verts[vid]
    v.color = None
    va = s.new_vertex(EVEN, None, label=f"{v.label}*" if v.label else None)
    m = s.new_edge(vid, va)
    cx = corners[vid][e2]   # corner e2 -> e3: enters va, crosses to vid
    cy = corners[vid][ed]   # corner ed -> e1: enters vid, crosses to va
    inserts = [
        (cx[1], cx[2], (m, False)),  # va -> vid before the e3 entry
        (cy[1], cy[2], (m, True)),   # vid -> va before the e1 entry
    ]
    _insert_entries(s, inserts)
    s.reattach(e1, vid, va)
    s.reattach(e2, vid, va)


def rotation_at_surgeon(s, vid, corners):
    cm = corners[vid]
    start = min(cm)
    cycle = [start]
    cur = cm[start][0]
    while cur != start:
        cycle.append(cur)
        cur = cm[cur][0]
    if len(cycle) != len(cm):
        raise DomainError(f"rotation at vertex {vid} is not a single cycle")
    return cycle


def monogamous_resolution(G):
    """Replace polygamous vertices by monogamous gadgets; matchings are
    preserved bijectively and the sphere embedding is maintained."""
    if G.surface != "sphere":
        raise DomainError("resolution implemented for sphere embeddings")
    s = _Surgeon(G)
    while True:
        poly = sorted(v for v, rec in s.verts.items() if rec.kind != MONO)
        if not poly:
            break
        g = s.graph()
        corners = _corner_map(g)
        _resolve_step(s, poly[0], corners)
    out = s.graph()
    out.validate()
    return out


# ---------------------------------------------------------------------------
# edge tripling


def triple_edges(G):
    """Make a multigraph simple by replacing each extra parallel edge with a
    three-edge path; matchings correspond bijectively."""
    s = _Surgeon(G)
    classes = {}
    for e in G.edges:
        if e.is_loop():
            continue
        key = (min(e.u, e.v), max(e.u, e.v))
        classes.setdefault(key, []).append(e.id)
    for key, eids in sorted(classes.items()):
        if len(eids) < 2:
            continue
        for eid in sorted(eids)[1:]:
            e = s.edges[eid]
            u, v, w = e.u, e.v, e.weight
            x = s.new_vertex(MONO, _opposite(s.verts[u].color))
            y = s.new_vertex(MONO, s.verts[u].color)
            e_mid = s.new_edge(x, y)
            e_end = s.new_edge(y, v)
            # reuse eid for the u-x stub, keeping its weight
            e.v = x
            s.edges[e_mid].weight = 1
            s.edges[e_end].weight = 1
            for fi, walk in enumerate(s.faces):
                new_walk = []
                for ent_eid, fwd in walk:
                    if ent_eid != eid:
                        new_walk.append((ent_eid, fwd))
                    elif fwd:
                        new_walk.extend([(eid, True), (e_mid, True), (e_end, True)])
                    else:
                        new_walk.extend([(e_end, False), (e_mid, False), (eid, False)])
                s.faces[fi] = new_walk
    out = s.graph()
    out.validate()
    return out


# ---------------------------------------------------------------------------
# reflection quotient


def reflection_quotient(G, vertex_map, edge_map, bisected, wrong_parity=False):
    """Quotient by an involutive reflection whose axis bisects the given
    edges; the bisected edges are tied to a single polygamous vertex whose
    parity makes (odd-polygamous + monogamous) even, unless wrong_parity
    deliberately flips it."""
    bis = set(bisected)
    for v, w in vertex_map.items():
        if vertex_map.get(w) != v:
            raise DomainError("vertex map is not an involution")
    for e, f in edge_map.items():
        if edge_map.get(f) != e:
            raise DomainError("edge map is not an involution")
    for eid in bis:
        e = G.edge(eid)
        if edge_map[eid] != eid or vertex_map.get(e.u) != e.v:
            raise DomainError(f"edge {eid} is not bisected by the reflection")
    for e in G.edges:
        img = G.edge(edge_map[e.id])
        if {vertex_map[e.u], vertex_map[e.v]} != {img.u, img.v}:
            raise DomainError("edge map does not follow the vertex map")

    # components of G minus the bisected edges pair up under the reflection
    comp = {}
    for start in sorted(v.id for v in G.vertices):
        if start in comp:
            continue
        comp[start] = start
        stack = [start]
        while stack:
            x = stack.pop()
            for eid in G.incident(x):
                if eid in bis:
                    continue
                y = G.edge(eid).other(x)
                if y not in comp:
                    comp[y] = start
                    stack.append(y)
    reps = sorted(set(comp.values()))
    kept = set()
    seen = set()
    for r in reps:
        if r in seen:
            continue
        mirror = comp[vertex_map[r]]
        if mirror == r:
            raise DomainError("a component is fixed by the reflection")
        seen.add(r)
        seen.add(mirror)
        kept.add(min(r, mirror))
    kept_vertices = {v for v, root in comp.items() if root in kept}

    verts = [G.vertex(v).clone() for v in sorted(kept_vertices)]
    omega_id = max(v.id for v in G.vertices) + 1
    n_mono = sum(1 for v in verts if v.kind == MONO)
    odd_count = sum(1 for v in verts if v.kind == ODD)
    parity_now = (n_mono + odd_count) % 2
    omega_kind = ODD if parity_now == 1 else EVEN
    if wrong_parity:
        omega_kind = EVEN if omega_kind == ODD else ODD
    stub_colors = set()
    edges = []
    for e in G.edges:
        if e.id in bis:
            k = e.u if e.u in kept_vertices else e.v
            stub_colors.add(G.vertex(k).color)
            edges.append(Edge(e.id, k, omega_id, e.weight))
        elif e.u in kept_vertices and e.v in kept_vertices:
            edges.append(Edge(e.id, e.u, e.v, e.weight))
    if bis:
        omega_color = None
        if len(stub_colors) == 1 and None not in stub_colors:
            omega_color = _opposite(stub_colors.pop())
        verts.append(Vertex(omega_id, omega_kind, omega_color, "omega"))

    faces = []
    infinite = None
    for fi, walk in enumerate(G.faces):
        bcount = sum(1 for eid, _ in walk if eid in bis)
        if bcount == 0:
            vs = set(G.walk_vertices(walk))
            if vs <= kept_vertices:
                faces.append(list(walk))
                if fi == G.infinite_face:
                    infinite = len(faces) - 1
            continue
        if bcount != 2:
            raise DomainError(f"crossed face {fi} has {bcount} bisected edges, expected 2")
        L = len(walk)
        bpos = [p for p, (eid, _) in enumerate(walk) if eid in bis]
        p1, p2 = bpos
        arc_a = [walk[(p1 + 1 + t) % L] for t in range((p2 - p1 - 1) % L)]
        arc_b = [walk[(p2 + 1 + t) % L] for t in range((p1 - p2 - 1) % L)]
        for arc, enter_pos, exit_pos in ((arc_a, p1, p2), (arc_b, p2, p1)):
            vs = set()
            for eid, fwd in arc:
                e = G.edge(eid)
                vs.update((e.u, e.v))
            if not arc:
                # two bisected edges bound the face directly; arc vertices
                # come from the shared endpoints of the bisected entries
                eid_in, _ = walk[enter_pos]
                e_in = G.edge(eid_in)
                vs.update(x for x in (e_in.u, e_in.v) if x in kept_vertices)
            if vs and vs <= kept_vertices:
                eid_in, _ = walk[enter_pos]
                eid_out, _ = walk[exit_pos]
                new_walk = [(eid_in, False)] + list(arc) + [(eid_out, True)]
                # stub edges are stored (kept, omega): entering the kept side
                # is omega -> kept (backward), leaving is kept -> omega
                faces.append(new_walk)
                if fi == G.infinite_face:
                    infinite = len(faces) - 1
                break
        else:
            raise DomainError(f"crossed face {fi} has no kept-side arc")

    # isolated vertices each carry exactly one empty walk
    nonempty = [w for w in faces if w]
    if len(nonempty) != len(faces):
        if infinite is not None and faces[infinite]:
            infinite = nonempty.index(faces[infinite])
        else:
            infinite = None
        faces = nonempty
    touched = {e.u for e in edges} | {e.v for e in edges}
    for v in verts:
        if v.id not in touched:
            faces.append([])
    if infinite is None and faces:
        infinite = 0
    out = EmbeddedGraph(verts, edges, faces, "sphere", infinite)
    out.validate()
    return out
