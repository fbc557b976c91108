"""
Testes do grafo induzido: codificação, conformidade e reconstrução.
"""

import numpy as np
import pytest
from dataclasses import replace
from hypothesis import given, strategies as st

from einsum_canon.batched_einsum import array, equals
from einsum_canon.canonicalize import brute_force_isomorphic, canonicalize
from einsum_canon.corpus import GeneratorParams, generate_random
from einsum_canon.errors import ComplianceError, EncodingError, NameCollisionError
from einsum_canon.graph_canon import (
    ColoredDigraph,
    apply_relabeling,
    canonical_form,
    canonical_labeling,
    permute_graph,
)
from einsum_canon.induced_graph import (
    NodeColor,
    check_compliance,
    default_arg_name,
    default_index_name,
    ensure_compliant,
    expected_node_count,
    to_batched_einsum,
    to_dot,
    to_induced_graph,
)
from einsum_canon.notation import batched_einsum


def conditions(g):
    return {v.condition for v in check_compliance(g)}


def with_edge(g, u, v):
    adjacency = g.adjacency.copy()
    adjacency[u, v] = True
    return replace(g, adjacency=adjacency)


# ============================================================================
# CODIFICAÇÃO
# ============================================================================

def test_rowdot_graph_has_18_nodes(spec):
    e = spec("rowdot_e1.spec")
    g = to_induced_graph(e)
    assert g.n == 18
    assert expected_node_count(e) == 18
    counts = {color: len(g.nodes_of(color)) for color in NodeColor}
    assert counts[NodeColor.ARG] == 2
    assert counts[NodeColor.INDEX] == 3
    assert counts[NodeColor.ACCESS_IN] == 4
    assert counts[NodeColor.ACCESS_OUT] == 1
    assert counts[NodeColor.LENGTH] == 2
    assert counts[NodeColor.DIM] == 2


def test_identity_einsum_has_9_nodes():
    g = to_induced_graph(batched_einsum("i->i", [[array("X", (5,))]]))
    assert g.n == 9
    assert all(len(g.nodes_of(color)) == 1 for color in NodeColor)


def test_partial_maps_live_on_their_blocks(spec):
    g = to_induced_graph(spec("three_rows_e1.spec"))
    for attr, color in (("iota_arg", NodeColor.ARG), ("iota_index", NodeColor.INDEX),
                        ("iota_dtype", NodeColor.DTYPE), ("iota_length", NodeColor.LENGTH)):
        assert set(getattr(g, attr)) == set(g.nodes_of(color).tolist())


def test_scalar_operand_cannot_be_encoded():
    e = batched_einsum(",i->i", [[array("s", ()), array("X", (3,))]])
    with pytest.raises(EncodingError):
        to_induced_graph(e)


def test_rank_edges_form_tournaments(spec):
    g = to_induced_graph(spec("rowdot_e1.spec"))
    lengths = sorted(g.nodes_of(NodeColor.LENGTH).tolist(), key=g.iota_length.get)
    assert g.adjacency[lengths[0], lengths[1]] and not g.adjacency[lengths[1], lengths[0]]


def test_rowdot_swap_of_j_and_k_is_an_automorphism(spec):
    g = to_induced_graph(spec("rowdot_e1.spec"))
    index = {x: v for v, x in g.iota_index.items()}
    arg = {name: v for v, name in g.iota_arg.items()}
    pos = {j: v for v, j in g.iota_arg_pos.items()}

    def access(slot, x):
        (v,) = [w for w in g.nodes_of(NodeColor.ACCESS_IN).tolist()
                if g.adjacency[pos[slot], w] and g.adjacency[index[x], w]]
        return v

    perm = list(range(g.n))
    for u, v in ((index["j"], index["k"]), (arg["A"], arg["B"]), (pos[0], pos[1]),
                 (access(0, "j"), access(1, "k")), (access(0, "i"), access(1, "i"))):
        perm[u], perm[v] = v, u
    swapped = permute_graph(g, perm)
    assert ColoredDigraph.same_graph(swapped, g)
    assert ColoredDigraph.same_graph(canonical_form(swapped), canonical_form(g))

    # só os índices e seus acessos: a aresta argumento -> acesso deixa de bater
    partial = list(range(g.n))
    for u, v in ((index["j"], index["k"]), (access(0, "j"), access(1, "k"))):
        partial[u], partial[v] = v, u
    assert not ColoredDigraph.same_graph(permute_graph(g, partial), g)


def test_block_shuffle_does_not_change_canonical_form(spec):
    e = spec("batched_e1.spec")
    base = canonical_form(to_induced_graph(e))
    for seed in range(5):
        shuffled = to_induced_graph(e, rng=np.random.default_rng(seed))
        assert ColoredDigraph.same_graph(canonical_form(shuffled), base)


# ============================================================================
# CONFORMIDADE
# ============================================================================

@given(st.integers(min_value=0, max_value=10 ** 6))
def test_encoded_graphs_are_compliant(seed):
    e = generate_random(GeneratorParams(b=3, n=3, seed=seed))
    assert check_compliance(to_induced_graph(e)) == []


def test_edge_out_of_an_argument_is_reported(spec):
    g = to_induced_graph(spec("rowdot_e1.spec"))
    arg = int(g.nodes_of(NodeColor.ARG)[0])
    index = int(g.nodes_of(NodeColor.INDEX)[0])
    assert "arg_successors" in conditions(with_edge(g, arg, index))
    with pytest.raises(ComplianceError):
        ensure_compliant(with_edge(g, arg, index))


def test_color_out_of_range_is_reported(spec):
    g = to_induced_graph(spec("rowdot_e1.spec"))
    colors = g.colors.copy()
    colors[0] = 10
    assert "color_range" in conditions(replace(g, colors=colors))


def test_broken_dim_tournament_is_reported(spec):
    g = to_induced_graph(spec("rowdot_e1.spec"))
    d0, d1 = g.nodes_of(NodeColor.DIM).tolist()
    adjacency = g.adjacency.copy()
    adjacency[d0, d1] = False
    assert "dim_tournament" in conditions(replace(g, adjacency=adjacency))


# ============================================================================
# RECONSTRUÇÃO
# ============================================================================

def test_default_names():
    assert [default_index_name(k) for k in (1, 2, 26, 27)] == ["a", "b", "z", "idx27"]
    assert [default_arg_name(k) for k in (1, 2)] == ["A0", "A1"]
    with pytest.raises(ValueError):
        default_index_name(0)


def test_reconstruct_identity_einsum():
    e = batched_einsum("i->i", [[array("X", (5,))]])
    rec = to_batched_einsum(to_induced_graph(e))
    assert rec.einsum.subscripts == "a->a"
    assert rec.einsum.args[0][0] == array("A0", (5,))


def test_reconstruct_canonical_rowdot(spec):
    g = to_induced_graph(spec("rowdot_e1.spec"))
    relabeled = apply_relabeling(g, canonical_labeling(g))
    rec = to_batched_einsum(relabeled)
    assert rec.einsum.subscripts == "ab,ac->a"
    assert [a.name for a in rec.einsum.args[0]] == ["A0", "A1"]
    assert all(a.shape == (72, 18) for a in rec.einsum.args[0])


def test_non_injective_names_collide(spec):
    g = to_induced_graph(spec("rowdot_e1.spec"))
    with pytest.raises(NameCollisionError):
        to_batched_einsum(g, index_name=lambda k: "x")


def test_custom_names_are_used(spec):
    g = to_induced_graph(spec("matmul.spec"))
    rec = to_batched_einsum(g, index_name=lambda k: "pqr"[k - 1], arg_name=lambda k: f"M{k}")
    assert set(rec.einsum.all_indices) == {"p", "q", "r"}
    assert set(rec.einsum.arg_names) == {"M1", "M2"}


@given(st.integers(min_value=0, max_value=10 ** 6))
def test_decode_of_encode_is_isomorphic(seed):
    e = generate_random(GeneratorParams(b=2, n=2, max_indices=3, seed=seed))
    decoded = to_batched_einsum(to_induced_graph(e)).einsum
    assert brute_force_isomorphic(decoded, e) is not None
    assert equals(canonicalize(decoded).canonical, canonicalize(e).canonical)


def test_dot_export(spec):
    text = to_dot(to_induced_graph(spec("matmul.spec")))
    assert text.startswith("digraph induced {")
    assert text.endswith("}\n")
    assert "->" in text
