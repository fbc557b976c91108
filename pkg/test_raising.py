"""
Testes do raising de kernels e da identificação contra einsums de referência.
"""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from einsum_canon.batched_einsum import array, equals, evaluate
from einsum_canon.canonicalize import is_isomorphic, verify_witness
from einsum_canon.corpus import GeneratorParams, generate_random
from einsum_canon.errors import CanonicalMismatchError, NotationError, RaisingError
from einsum_canon.expressions import OperandExpr
from einsum_canon.notation import batched_einsum
from einsum_canon.raising import (
    FunctionalBatchedEinsum,
    evaluate_functional,
    evaluate_kernel,
    identify_as_einsum,
    is_idealized,
    lower_to_kernel,
    parse_kernel,
    raise_to_batched_einsum,
    synthetic_index_name,
)

HEADER = "domain: i0<96 i1<4 i2<3\narray: P float64 96x4\narray: Q float64 4\narray: R float64 4\n"


@pytest.fixture
def gemv_kernel(fixtures_dir):
    return parse_kernel((fixtures_dir / "gemv_pair.knl").read_text(encoding="utf-8"))


def gemv_bindings(seed=0):
    rng = np.random.default_rng(seed)
    return {"P": rng.standard_normal((96, 4)), "Q": rng.standard_normal(4), "R": rng.standard_normal(4)}


# ============================================================================
# PARSER
# ============================================================================

def test_parse_gemv_kernel(gemv_kernel):
    assert gemv_kernel.domain == {"i0": 96, "i1": 4}
    assert set(gemv_kernel.rules) == {"u", "v", "w"}
    assert [s.output for s in gemv_kernel.statements] == ["y1", "y2"]
    first = gemv_kernel.statements[0]
    assert first.out_indices == ("i0",)
    assert first.reduction == ("i1",)
    assert [f.name for f in first.factors] == ["u", "v"]
    assert gemv_kernel.decls["y1"] == array("y1", (96,))


def test_bare_product_infers_reduction():
    k = parse_kernel(HEADER + "stmt y[i0] = P[i0,i1]*Q[i1]\n")
    assert k.statements[0].reduction == ("i1",)


@pytest.mark.parametrize("stmt, error", [
    ("stmt y[i0] = sum([i1], P[i0,i1]+Q[i1])", RaisingError),
    ("stmt y[i0] = sum([i1], P[i0,i9]*Q[i1])", RaisingError),
    ("stmt y[i0] = sum([], P[i0,i1]*Q[i1])", RaisingError),
    ("stmt y[i0,i0] = sum([i1], P[i0,i1]*Q[i1])", RaisingError),
    ("stmt y[i0] = sum([i1], z(i0,i1)*Q[i1])", NotationError),
    ("stmt y[i0] sum([i1], P[i0,i1]*Q[i1])", NotationError),
])
def test_malformed_statements(stmt, error):
    with pytest.raises(error):
        parse_kernel(HEADER + stmt + "\n")


def test_affine_subscript_in_rule_is_rejected():
    with pytest.raises(RaisingError):
        parse_kernel(HEADER + "def s(i) := Q[i+1]\nstmt y[i1] = s(i1)\n")


def test_rule_arity_mismatch():
    with pytest.raises(RaisingError):
        parse_kernel(HEADER + "def s(i) := Q[i]\nstmt y[i0] = sum([i1], s(i0,i1)*Q[i1])\n")


def test_synthetic_names_start_at_i():
    assert [synthetic_index_name(k) for k in (1, 2, 18, 19, 26, 27)] == ["i", "j", "z", "a", "h", "idx27"]


# ============================================================================
# RAISING
# ============================================================================

def test_raise_gemv_kernel(gemv_kernel):
    raised = raise_to_batched_einsum(gemv_kernel)
    u, v, w = array("u", (96, 4)), array("v", (4,)), array("w", (4,))
    assert equals(raised.skeleton, batched_einsum("ij,j->i", [[u, v], [u, w]]))
    assert raised.sigma_idx == {"i": "i0", "j": "i1"}
    assert raised.sigma_arg == {"u": "u", "v": "v", "w": "w"}
    assert raised.outputs == ("y1", "y2")
    assert not is_idealized(raised.functional)


def test_equal_fingerprints_share_one_argument():
    text = HEADER + (
        "def a(i,j) := P[i,j]*P[i,j]\n"
        "def b(x,y) := P[x,y]*P[x,y]\n"
        "stmt y1[i0] = sum([i1], a(i0,i1)*Q[i1])\n"
        "stmt y2[i0] = sum([i1], b(i0,i1)*R[i1])\n"
    )
    raised = raise_to_batched_einsum(parse_kernel(text))
    assert raised.skeleton.arg_names == ("a", "Q", "R")


def test_commutative_rules_share_one_argument():
    text = HEADER + (
        "def a(i) := Q[i]+1\n"
        "def b(k) := 1+Q[k]\n"
        "stmt y1[i0] = sum([i1], P[i0,i1]*a(i1))\n"
        "stmt y2[i0] = sum([i1], P[i0,i1]*b(i1))\n"
    )
    raised = raise_to_batched_einsum(parse_kernel(text))
    assert raised.skeleton.b == 2
    assert len(raised.skeleton.universe) == 2


def test_statements_with_different_extents_are_rejected():
    text = HEADER + "stmt y1[i0] = P[i0,i1]*Q[i1]\nstmt y2[i0] = P[i0,i2]*Q[i2]\n"
    with pytest.raises(RaisingError):
        raise_to_batched_einsum(parse_kernel(text))


def test_inconsistent_patterns_are_rejected():
    text = HEADER + (
        "def s(i) := sin(Q[i])\n"
        "stmt y1[i0] = sum([i1], P[i0,i1]*s(i1))\n"
        "stmt y2[i0] = sum([i1], P[i0,i1]*Q[i1]*R[i1])\n"
    )
    with pytest.raises(RaisingError):
        raise_to_batched_einsum(parse_kernel(text))


def test_functional_operands_are_checked_against_skeleton():
    e = batched_einsum("ij,j->i", [[array("A", (3, 2)), array("B", (2,))]])
    with pytest.raises(RaisingError):
        FunctionalBatchedEinsum(e, {"B": OperandExpr.identity("Q", 2)})
    with pytest.raises(RaisingError):
        FunctionalBatchedEinsum(e, {"Z": OperandExpr.identity("Q", 1)})


def test_aliasing_is_not_idealized():
    A, B, C = array("A", (3, 2)), array("B", (2,)), array("C", (2,))
    e = batched_einsum("ij,j->i", [[A, B], [A, C]])
    assert is_idealized(FunctionalBatchedEinsum(e))
    aliased = FunctionalBatchedEinsum(
        e, {"B": OperandExpr.identity("Q", 1), "C": OperandExpr.identity("Q", 1)})
    assert not is_idealized(aliased)


@given(st.integers(min_value=0, max_value=10 ** 6))
def test_raise_of_lowered_einsum_is_isomorphic(seed):
    e = generate_random(GeneratorParams(b=3, n=3, dtypes=("float64", "float32"), seed=seed))
    raised = raise_to_batched_einsum(lower_to_kernel(e))
    w = is_isomorphic(raised.skeleton, e)
    assert w is not None and verify_witness(raised.skeleton, e, w)
    assert is_idealized(raised.functional)


# ============================================================================
# IDENTIFICAÇÃO
# ============================================================================

def test_identify_gemv_kernel_against_gemv_pair_ref(gemv_kernel, spec):
    ref = spec("gemv_pair_ref.spec")
    ident = identify_as_einsum(gemv_kernel, ref)
    assert ident.sigma_idx == {"i": "i0", "j": "i1"}
    assert ident.sigma_arg["A"] == "u"
    assert {ident.sigma_arg["B"], ident.sigma_arg["C"]} == {"v", "w"}
    assert verify_witness(ref, ident.raised.skeleton, ident.witness)
    lines = ident.to_lines()
    assert "idx: i -> i0" in lines
    assert "arg: A -> u = P[i,j]*P[i,j]" in lines


def test_identification_preserves_semantics(gemv_kernel, spec):
    ref = spec("gemv_pair_ref.spec")
    ident = identify_as_einsum(gemv_kernel, ref)
    bindings = gemv_bindings()
    kernel_out = evaluate_kernel(gemv_kernel, bindings)
    ref_out = evaluate(ref, ident.reference_bindings(ref, bindings))
    for i in range(1, ref.b + 1):
        np.testing.assert_allclose(ref_out[i - 1], kernel_out[ident.statement_for(i)])


def test_kernel_evaluation_matches_hand_loop(gemv_kernel):
    bindings = gemv_bindings(1)
    P, Q, R = bindings["P"], bindings["Q"], bindings["R"]
    out = evaluate_kernel(gemv_kernel, bindings)
    np.testing.assert_allclose(out["y1"], (P * P) @ (3 * np.cos(Q) + 5))
    np.testing.assert_allclose(out["y2"], (P * P) @ np.sin(R))
    raised = raise_to_batched_einsum(gemv_kernel)
    y1, y2 = evaluate_functional(raised.functional, bindings)
    np.testing.assert_allclose(y1, out["y1"])
    np.testing.assert_allclose(y2, out["y2"])


def test_mismatch_reports_key_diff(gemv_kernel):
    ref = batched_einsum("ij,jk->ik", [[array("A", (96, 4)), array("B", (4, 4))]])
    with pytest.raises(CanonicalMismatchError) as info:
        identify_as_einsum(gemv_kernel, ref)
    assert info.value.diff
    assert info.value.expected_key.startswith("FE1|b=1")


def test_idealized_kernel_identifies_with_identity_maps(spec):
    ref = spec("matmul.spec")
    ident = identify_as_einsum(lower_to_kernel(ref), ref)
    assert ident.sigma_arg == {"A": "A", "B": "B"}
    assert ident.sigma_idx == {"i": "i", "j": "j", "k": "k"}
    assert is_idealized(ident.raised.functional)
