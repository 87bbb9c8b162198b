import pytest

from kasteleyn.families import (
    FamilySpec,
    GVGraph,
    build_aztec_graph,
    transit_free_resolution,
)
from kasteleyn.graphs import (
    Edge,
    EmbeddedGraph,
    Vertex,
    adjacency_matrix,
    kasteleyn_orient,
    reflection_quotient,
)
from kasteleyn.matrices import (
    ExactMatrix,
    NormalFormFailure,
    determinant,
    stable_invariants,
)
from kasteleyn.rings import DomainError, parse_laurent


def test_determinant_nonsquare():
    with pytest.raises(DomainError):
        determinant(ExactMatrix.from_rows([[1, 2]], "z"))


def test_stable_invariants_propagates_laurent_failure():
    M = ExactMatrix.diagonal([parse_laurent("2"), parse_laurent("-1 + q")], "laurent")
    with pytest.raises(NormalFormFailure):
        stable_invariants(M)


def test_adjacency_missing_decorations():
    verts = [Vertex(0, color="black"), Vertex(1, color="white")]
    edges = [Edge(0, 0, 1)]
    faces = [[(0, True), (0, False)]]
    G = EmbeddedGraph(verts, edges, faces, "sphere", 0)
    with pytest.raises(DomainError):
        adjacency_matrix(G, "bipartite")
    with pytest.raises(DomainError):
        adjacency_matrix(G, "alternating")


def test_projective_bipartite_rejected():
    # a 4-cycle doubled onto the projective plane is globally bipartite
    verts = [Vertex(i, color=None) for i in range(4)]
    edges = [Edge(0, 0, 1), Edge(1, 1, 2), Edge(2, 2, 3), Edge(3, 3, 0)]
    faces = [
        [(0, True), (1, True), (2, True), (3, True)],
        [(0, False), (3, False), (2, False), (1, False)],
    ]
    G = EmbeddedGraph(verts, edges, faces, "projective", None)
    with pytest.raises(DomainError):
        kasteleyn_orient(G)


def test_reflection_quotient_rejects_non_involution():
    verts = [Vertex(i) for i in range(4)]
    edges = [Edge(0, 0, 1), Edge(1, 1, 2), Edge(2, 2, 3), Edge(3, 3, 0)]
    faces = [
        [(0, True), (1, True), (2, True), (3, True)],
        [(3, False), (2, False), (1, False), (0, False)],
    ]
    G = EmbeddedGraph(verts, edges, faces, "sphere", 1)
    vmap = {0: 1, 1: 2, 2: 3, 3: 0}   # a 4-cycle, not an involution
    with pytest.raises(DomainError):
        reflection_quotient(G, vmap, {0: 0, 1: 1, 2: 2, 3: 3}, [])


def test_family_spec_group_dimension_checks():
    with pytest.raises(DomainError):
        FamilySpec(variant="ppbox-quotient", a=1, b=2, c=3, group="rho")
    with pytest.raises(DomainError):
        FamilySpec(variant="ppbox-quotient", a=1, b=1, c=2, group="tau")
    with pytest.raises(DomainError):
        FamilySpec(variant="ppbox", a=-1, b=1, c=1)


def test_aztec_rejects_nonpositive():
    with pytest.raises(DomainError):
        build_aztec_graph(0)


def test_transit_resolution_rejects_unsegregated_vertex():
    # transit vertex with interleaved in/out edges around it
    g = GVGraph(
        [0, 1, 2, 3, 4],
        [(0, 1, 0, 1), (1, 2, 0, 1), (2, 0, 3, 1), (3, 0, 4, 1)],
        [1, 2],
        [3, 4],
        coords={0: (0, 0), 1: (0, 2), 2: (0, -2), 3: (2, 0), 4: (-2, 0)},
    )
    with pytest.raises(DomainError, match="segregated"):
        transit_free_resolution(g)
