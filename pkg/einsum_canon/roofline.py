"""
einsum-canon - Roofline
=======================
Contagem de FLOPs, footprint de memória, intensidade aritmética e
classificação memory-bound / compute-bound contra os picos de um device.

Convenção de FLOPs: em cada ponto do espaço de iteração completo
(índices de saída x índices de redução) contam-se n-1 multiplicações, mais
uma soma quando há índices de redução. Para GEMM isso dá 2mnk.

Autor: Equipe einsum-canon
Data: 17/10/2026
Versão: 1.0
"""

import logging
import math
import statistics
import time
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence

from .batched_einsum import BatchedEinsum, DtypeCode, ensure_valid
from .canonicalize import canonicalize
from .errors import NotFoundError

logger = logging.getLogger("Roofline")


@dataclass(frozen=True)
class DevicePeaks:
    """Picos de um device: FLOP/s e bytes/s."""
    device_id: str
    peak_flops: float
    peak_bandwidth: float

    def __post_init__(self):
        if self.peak_flops <= 0 or self.peak_bandwidth <= 0:
            raise ValueError(f"picos do device {self.device_id} devem ser positivos")

    @property
    def saturation_ai(self) -> float:
        return self.peak_flops / self.peak_bandwidth

    def to_dict(self) -> Dict:
        return {
            "device_id": self.device_id,
            "peak_flops": self.peak_flops,
            "peak_bandwidth": self.peak_bandwidth,
        }


# Só as razões são conhecidas: banda normalizada em 1, pico = AI de saturação.
PRESETS: Dict[str, DevicePeaks] = {
    "mi250x": DevicePeaks("mi250x", 14.9, 1.0),
    "h100": DevicePeaks("h100", 12.55, 1.0),
    "titan-v": DevicePeaks("titan-v", 9.41, 1.0),
    "p100": DevicePeaks("p100", 7.24, 1.0),
}


def resolve_device(device_id: str, declared: Optional[Mapping[str, Mapping]] = None) -> DevicePeaks:
    """
    Device declarado na configuração ou preset embutido.

    Raises:
        NotFoundError: id desconhecido
    """
    declared = declared or {}
    if device_id in declared:
        entry = declared[device_id]
        return DevicePeaks(device_id, float(entry["peak_flops"]), float(entry["peak_bandwidth"]))
    if device_id in PRESETS:
        return PRESETS[device_id]
    raise NotFoundError(f"device desconhecido: {device_id}")


@dataclass(frozen=True)
class RooflineResult:
    device_id: str
    arithmetic_intensity: float
    saturation_ai: float
    roofline_flops: float
    memory_bound: bool

    def to_dict(self) -> Dict:
        return {
            "device_id": self.device_id,
            "arithmetic_intensity": self.arithmetic_intensity,
            "saturation_ai": self.saturation_ai,
            "roofline_flops": self.roofline_flops,
            "memory_bound": self.memory_bound,
        }


def flop_count(e: BatchedEinsum) -> int:
    """FLOPs das b linhas pela convenção do módulo."""
    ensure_valid(e)
    lengths = e.index_to_length
    points = math.prod(lengths[x] for x in e.all_indices)
    per_row = points * (e.n - 1)
    if e.reduction_indices:
        per_row += points
    return e.b * per_row


def footprint_bytes(e: BatchedEinsum) -> int:
    """Bytes do universo de arrays (cada array uma vez) mais as b saídas."""
    ensure_valid(e)
    lengths = e.index_to_length
    out_size = math.prod(lengths[x] for x in e.i_out)
    out_dtype = DtypeCode.widest([a.dtype for a in e.universe])
    return sum(a.nbytes for a in e.universe) + e.b * out_size * out_dtype.itemsize


def arithmetic_intensity(e: BatchedEinsum) -> float:
    return flop_count(e) / footprint_bytes(e)


def roofline(e: BatchedEinsum, peaks: DevicePeaks) -> RooflineResult:
    """
    ``min(pico de FLOPs, AI x banda)``; memory-bound se AI < AI de saturação
    (igualdade conta como compute-bound).
    """
    ai = arithmetic_intensity(e)
    return RooflineResult(
        device_id=peaks.device_id,
        arithmetic_intensity=ai,
        saturation_ai=peaks.saturation_ai,
        roofline_flops=min(peaks.peak_flops, ai * peaks.peak_bandwidth),
        memory_bound=ai < peaks.saturation_ai,
    )


def memory_bound_fraction(einsums: Sequence[BatchedEinsum], devices: Sequence[DevicePeaks]) -> float:
    """Fração de instâncias memory-bound, média sobre os devices."""
    if not einsums or not devices:
        return 0.0
    intensities = [arithmetic_intensity(e) for e in einsums]
    fractions = [
        sum(ai < d.saturation_ai for ai in intensities) / len(intensities) for d in devices
    ]
    return sum(fractions) / len(fractions)


@dataclass(frozen=True)
class TimingSummary:
    samples: List[float]

    @property
    def median(self) -> float:
        return statistics.median(self.samples) if self.samples else 0.0

    @property
    def maximum(self) -> float:
        return max(self.samples, default=0.0)


def time_canonicalization(einsums: Sequence[BatchedEinsum], prune_automorphisms: bool = True) -> TimingSummary:
    """Tempo de parede (s) de ``canonicalize`` por instância."""
    samples = []
    for e in einsums:
        start = time.perf_counter()
        canonicalize(e, prune_automorphisms=prune_automorphisms)
        samples.append(time.perf_counter() - start)
    summary = TimingSummary(samples)
    logger.info(f"[ROOFLINE] {len(samples)} canonicalizações, mediana {summary.median * 1e3:.2f} ms")
    return summary
