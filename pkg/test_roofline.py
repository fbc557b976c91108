"""
Testes de FLOPs, footprint, intensidade aritmética e classificação roofline.
"""

import pytest

from einsum_canon.batched_einsum import array
from einsum_canon.corpus import tccg_like
from einsum_canon.errors import NotFoundError
from einsum_canon.notation import batched_einsum
from einsum_canon.roofline import (
    PRESETS,
    DevicePeaks,
    arithmetic_intensity,
    flop_count,
    footprint_bytes,
    memory_bound_fraction,
    resolve_device,
    roofline,
    time_canonicalization,
)


def square_gemm(m: int):
    """GEMM quadrada f64: AI = m / 12."""
    return batched_einsum("ij,jk->ik", [[array("A", (m, m)), array("B", (m, m))]])


def test_gemm_1024(spec):
    e = spec("gemm1024.spec")
    assert flop_count(e) == 2 * 1024 ** 3
    assert footprint_bytes(e) == 3 * 1024 ** 2 * 8
    assert arithmetic_intensity(e) == pytest.approx(85.3333, rel=1e-4)
    assert not roofline(e, PRESETS["h100"]).memory_bound


def test_copy_has_zero_intensity():
    e = batched_einsum("i->i", [[array("X", (100,))]])
    assert flop_count(e) == 0
    assert arithmetic_intensity(e) == 0.0
    assert all(roofline(e, peaks).memory_bound for peaks in PRESETS.values())


def test_shared_arrays_are_counted_once(spec):
    e = spec("gemv_pair_ref.spec")
    A, B, C = 96 * 4 * 8, 4 * 8, 4 * 8
    assert footprint_bytes(e) == A + B + C + 2 * 96 * 8
    assert flop_count(e) == 2 * 2 * 96 * 4


@pytest.mark.parametrize("m, memory_bound_on", [
    (84, {"mi250x", "h100", "titan-v", "p100"}),
    (96, {"mi250x", "h100", "titan-v"}),
    (120, {"mi250x", "h100"}),
    (168, {"mi250x"}),
    (180, set()),
])
def test_preset_thresholds(m, memory_bound_on):
    e = square_gemm(m)
    assert arithmetic_intensity(e) == pytest.approx(m / 12)
    bound = {name for name, peaks in PRESETS.items() if roofline(e, peaks).memory_bound}
    assert bound == memory_bound_on


def test_saturation_boundary_counts_as_compute_bound():
    e = square_gemm(120)
    peaks = DevicePeaks("exact", 10.0, 1.0)
    result = roofline(e, peaks)
    assert result.arithmetic_intensity == pytest.approx(10.0)
    assert not result.memory_bound
    assert result.roofline_flops == pytest.approx(10.0)


def test_roofline_is_min_of_peak_and_bandwidth_bound():
    e = square_gemm(84)
    peaks = DevicePeaks("dev", 100.0, 2.0)
    result = roofline(e, peaks)
    assert result.saturation_ai == pytest.approx(50.0)
    assert result.roofline_flops == pytest.approx(7.0 * 2.0)
    assert result.memory_bound


def test_memory_bound_fraction():
    einsums = [square_gemm(84), square_gemm(180)]
    assert memory_bound_fraction(einsums, list(PRESETS.values())) == pytest.approx(0.5)
    assert memory_bound_fraction([], list(PRESETS.values())) == 0.0


def test_device_resolution():
    assert resolve_device("h100") is PRESETS["h100"]
    custom = resolve_device("lab", {"lab": {"peak_flops": 4.0, "peak_bandwidth": 2.0}})
    assert custom.saturation_ai == pytest.approx(2.0)
    with pytest.raises(NotFoundError):
        resolve_device("tpu-v9")


def test_device_peaks_must_be_positive():
    with pytest.raises(ValueError):
        DevicePeaks("bad", 0.0, 1.0)
    with pytest.raises(ValueError):
        DevicePeaks("bad", 1.0, -1.0)


def test_canonicalization_time_on_tccg_shapes():
    summary = time_canonicalization([tccg_like(seed) for seed in range(10)])
    assert len(summary.samples) == 10
    assert summary.median < 1.0
    assert summary.maximum >= summary.median
