"""
Testes da notação texto e da chave canônica.
"""

import pytest

from einsum_canon.batched_einsum import array, equals
from einsum_canon.canonicalize import canonicalize
from einsum_canon.corpus import GeneratorParams, generate_random
from einsum_canon.errors import NotationError, NotCanonicalError, ValidationError
from einsum_canon.notation import (
    batched_einsum,
    canonical_key,
    format_key,
    parse_canonical_key,
    parse_classic,
    parse_spec_document,
    parse_subscripts,
    print_classic,
)

ROWDOT_KEY = "FE1|b=1|n=2|out=a|in=ab;ac|rows=A0,A1|A0=float64:72x18|A1=float64:72x18"


def test_parse_subscripts():
    assert parse_subscripts("ij,j->i") == ((("i", "j"), ("j",)), ("i",))
    assert parse_subscripts("i->") == (((("i",),), ()))


def test_gemv_pair_ref_document(spec):
    A, B, C = array("A", (96, 4)), array("B", (4,)), array("C", (4,))
    expected = batched_einsum("ij,j->i", [[A, B], [A, C]])
    assert equals(spec("gemv_pair_ref.spec"), expected)


def test_uppercase_index_reports_line_and_column():
    with pytest.raises(NotationError) as info:
        parse_classic("einsum: iI,i->i\nrow: A,B\narray: A float64 2x2\narray: B float64 2\n")
    assert info.value.line == 1
    assert info.value.column == 10


def test_document_errors():
    with pytest.raises(NotationError):
        parse_classic("einsum: ij->i\n")
    with pytest.raises(NotationError):
        parse_classic("einsum: i->i\nrow: A\narray: A float64 2\narray: A float64 2\n")
    with pytest.raises(NotationError):
        parse_classic("einsum: i->i\nrow: A\narray: A float99 2\n")
    with pytest.raises(NotationError):
        parse_classic("row: A\neinsum: i->i\n")
    with pytest.raises(NotationError):
        parse_classic("einsum: i->i\nrow: B\narray: A float64 2\n")
    with pytest.raises(NotationError):
        parse_classic("einsum: ij\nrow: A\narray: A float64 2x2\n")


def test_invalid_einsum_in_document_raises_validation_error():
    with pytest.raises(ValidationError):
        parse_classic("einsum: ij,jk->ik\nrow: A,B\narray: A float64 10x4\narray: B float64 5x10\n")


def test_unused_array_is_logged(caplog):
    text = "einsum: i->i\nrow: A\narray: A float64 2\narray: Z float64 3\n"
    with caplog.at_level("WARNING", logger="Notation"):
        parse_classic(text)
    assert any("Z" in r.getMessage() for r in caplog.records)


def test_comments_and_scalar_shapes():
    doc = parse_spec_document("# cabeçalho\neinsum: ,i->i  # escalar\nrow: s,X\narray: s float64 scalar\n"
                              "array: X float64 3\n")
    assert doc.arrays["s"].shape == ()
    e = doc.to_batched_einsum()
    assert e.i_in == ((), ("i",))


def test_print_classic_round_trip(spec):
    e = spec("three_rows_e1.spec")
    assert equals(parse_classic(print_classic(e)), e)


def test_print_classic_rejects_long_index_names():
    e = parse_canonical_key("FE1|b=1|n=1|out=idx27|in=idx27|rows=A0|A0=float64:2")
    with pytest.raises(NotationError):
        print_classic(e)


# ============================================================================
# CHAVE CANÔNICA
# ============================================================================

def test_rowdot_key(spec):
    c1 = canonicalize(spec("rowdot_e1.spec")).canonical
    c2 = canonicalize(spec("rowdot_e2.spec")).canonical
    assert canonical_key(c1) == ROWDOT_KEY
    assert canonical_key(c2) == ROWDOT_KEY


def test_canonical_key_rejects_non_canonical_input(spec):
    with pytest.raises(NotCanonicalError):
        canonical_key(spec("rowdot_e1.spec"))


def test_parse_canonical_key_inverts_format():
    e = parse_canonical_key(ROWDOT_KEY)
    assert e.subscripts == "ab,ac->a"
    assert format_key(e) == ROWDOT_KEY


def test_parse_canonical_key_accepts_long_index_names():
    e = parse_canonical_key("FE1|b=1|n=1|out=idx27|in=aidx27|rows=A0|A0=float64:2x3")
    assert e.i_in == (("a", "idx27"),)
    assert e.i_out == ("idx27",)


@pytest.mark.parametrize("key", [
    "FE2|b=1|n=1|out=a|in=a|rows=A0|A0=float64:2",
    "FE1|b=1|n=1|out=a|in=a|rows=A0",
    "FE1|b=2|n=1|out=a|in=a|rows=A0|A0=float64:2",
    "FE1|b=1|n=1|out=a|in=A|rows=A0|A0=float64:2",
    "FE1|b=1|n=1|out=a|in=a|rows=A0|A0=float99:2",
])
def test_malformed_keys(key):
    with pytest.raises(NotationError):
        parse_canonical_key(key)


def test_keys_of_generated_instances_round_trip():
    for seed in range(10):
        canon = canonicalize(generate_random(GeneratorParams(b=2, n=2, seed=seed))).canonical
        assert equals(parse_canonical_key(canonical_key(canon)), canon)
