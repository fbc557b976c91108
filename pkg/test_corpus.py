"""
Testes dos geradores de instâncias e dos corpora de formas.
"""

import pytest
from hypothesis import given, strategies as st

from einsum_canon.batched_einsum import equals, validate
from einsum_canon.canonicalize import canonicalize, verify_witness
from einsum_canon.corpus import (
    GeneratorParams,
    enumerate_small_family,
    face_mass,
    generate_random,
    local_divergence,
    local_gradient,
    scramble,
    tccg_like,
)
from einsum_canon.errors import InfeasibleParamsError
from einsum_canon.roofline import footprint_bytes


def test_generator_is_deterministic():
    params = GeneratorParams(b=3, n=2, seed=42)
    assert equals(generate_random(params), generate_random(params))


@pytest.mark.parametrize("params", [
    GeneratorParams(b=0),
    GeneratorParams(n=0),
    GeneratorParams(max_indices=0),
    GeneratorParams(max_indices=27),
    GeneratorParams(lengths=()),
    GeneratorParams(lengths=(0, 2)),
    GeneratorParams(dtypes=()),
    GeneratorParams(max_dim=0),
    GeneratorParams(max_indices=2, max_out=3),
])
def test_infeasible_params(params):
    with pytest.raises(InfeasibleParamsError):
        generate_random(params)


@given(
    seed=st.integers(min_value=0, max_value=10 ** 6),
    b=st.integers(min_value=1, max_value=4),
    n=st.integers(min_value=1, max_value=4),
)
def test_generated_instances_respect_params(seed, b, n):
    params = GeneratorParams(b=b, n=n, max_indices=5, lengths=(2, 5), max_dim=2, seed=seed)
    e = generate_random(params)
    assert (e.b, e.n) == (b, n)
    assert len(e.all_indices) <= 5
    assert all(1 <= len(idx) <= 2 for idx in e.i_in)
    assert set(e.index_to_length.values()) <= {2, 5}
    assert validate(e) == []


@given(seed=st.integers(min_value=0, max_value=10 ** 6))
def test_scramble_returns_a_valid_witness(seed):
    e = generate_random(GeneratorParams(b=3, n=3, seed=seed))
    scrambled, w = scramble(e, seed)
    assert validate(scrambled) == []
    assert verify_witness(scrambled, e, w)
    assert verify_witness(e, scrambled, w.inverse())


def test_small_family_is_valid_and_free_of_duplicates():
    family = list(enumerate_small_family(max_b=1, max_n=2, max_indices=2, max_list_len=2,
                                         lengths=(2, 3), dtypes=("float64",)))
    assert family
    assert all(validate(e) == [] for e in family)
    assert len(set(family)) == len(family)


def test_small_family_first_occurrence_naming():
    for e in enumerate_small_family(max_b=1, max_n=1, max_indices=3, max_list_len=3, lengths=(2,),
                                    dtypes=("float64",)):
        assert list(e.all_indices) == sorted(e.all_indices)
        assert [a.name for a in e.universe] == sorted(a.name for a in e.universe)


@pytest.mark.parametrize("seed", range(10))
def test_tccg_like_contractions(seed):
    e = tccg_like(seed)
    assert (e.b, e.n) == (1, 2)
    assert 3 <= len(e.all_indices) <= 6
    assert e.reduction_indices
    assert validate(e) == []


def test_face_mass_shares_geometry_arrays():
    e = face_mass(3)
    assert e.b == 3
    assert e.subscripts == "fe,ifj,fej->ei"
    assert e.arg_names == ("J", "M", "F1", "F2", "F3")
    standalone = sum(footprint_bytes(face_mass(1)) for _ in range(3))
    assert footprint_bytes(e) < standalone


@pytest.mark.parametrize("make", [face_mass, local_divergence, local_gradient])
def test_dg_operators_canonicalize_independently_of_names(make):
    e = make(2)
    scrambled, _ = scramble(e, 7)
    assert equals(canonicalize(e).canonical, canonicalize(scrambled).canonical)
