"""
einsum-canon
============
Forma canônica de einsums em lote e banco de fatos de desempenho.

Módulos:
- batched_einsum: modelo de einsum em lote, validação, igualdade e avaliação
- notation: formato texto, notação clássica e chave canônica
- graph_canon: rotulação canônica de grafos dirigidos coloridos
- induced_graph: codificação einsum <-> grafo induzido e conformidade
- canonicalize: forma canônica, testemunhas de isomorfismo e força bruta
- corpus: gerador aleatório, embaralhamento e corpora de formas
- expressions: operandos funcionais (expressões sobre índices)
- raising: kernels, raising e identificação contra referências
- roofline: FLOPs, footprint, intensidade aritmética e roofline
- facts_db: banco de fatos indexado pela chave canônica
- config: configuração JSON + .env
- cli: linha de comando (python -m einsum_canon)
"""

__version__ = "1.0.0"

from .batched_einsum import (
    ArrayMeta,
    BatchedEinsum,
    DtypeCode,
    EinsumSpec,
    array,
    derived_sets,
    equals,
    evaluate,
    validate,
)
from .canonicalize import (
    CanonResult,
    SubstitutionWitness,
    brute_force_isomorphic,
    canonicalize,
    is_isomorphic,
    verify_witness,
)
from .corpus import GeneratorParams, generate_random, scramble
from .facts_db import FactRecord, FactsDatabase, Measurement, record_facts, retrieve
from .notation import batched_einsum, canonical_key, parse_classic, print_classic
from .raising import identify_as_einsum, is_idealized, parse_kernel, raise_to_batched_einsum
from .roofline import DevicePeaks, PRESETS, arithmetic_intensity, flop_count, footprint_bytes, roofline

__all__ = [
    "ArrayMeta",
    "BatchedEinsum",
    "DtypeCode",
    "EinsumSpec",
    "array",
    "derived_sets",
    "equals",
    "evaluate",
    "validate",
    "CanonResult",
    "SubstitutionWitness",
    "brute_force_isomorphic",
    "canonicalize",
    "is_isomorphic",
    "verify_witness",
    "GeneratorParams",
    "generate_random",
    "scramble",
    "FactRecord",
    "FactsDatabase",
    "Measurement",
    "record_facts",
    "retrieve",
    "batched_einsum",
    "canonical_key",
    "parse_classic",
    "print_classic",
    "identify_as_einsum",
    "is_idealized",
    "parse_kernel",
    "raise_to_batched_einsum",
    "DevicePeaks",
    "PRESETS",
    "arithmetic_intensity",
    "flop_count",
    "footprint_bytes",
    "roofline",
]
