"""
einsum-canon - Linha de Comando
===============================
Interface de linha de comando: canonicalização, isomorfismo, identificação
de kernels, banco de fatos e análise roofline.

Uso:
    python -m einsum_canon canonicalize fixtures/rowdot_e1.spec
    python -m einsum_canon isomorphic a.spec b.spec
    python -m einsum_canon match kernel.knl ref.spec
    python -m einsum_canon record gemm.spec --device h100 --transform t1 --time 0.5
    python -m einsum_canon retrieve gemm.spec --device h100
    python -m einsum_canon stats gemm.spec --device h100

Códigos de saída: 0 ok, 1 erro de domínio, 2 uso, 3 E/S.

Autor: Equipe einsum-canon
Data: 17/10/2026
Versão: 1.0
"""

import argparse
import logging
import sys
from enum import IntEnum
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import __version__
from .batched_einsum import BatchedEinsum, equals
from .canonicalize import brute_force_isomorphic, canonicalize, is_isomorphic, verify_witness
from .config import generator_params, load_config
from .corpus import generate_random, scramble, tccg_like
from .errors import (
    CanonicalMismatchError,
    EinsumCanonError,
    NotFoundError,
    StorageError,
)
from .facts_db import FactsDatabase, Measurement
from .induced_graph import to_dot, to_induced_graph
from .notation import canonical_key, parse_classic, print_classic
from .raising import identify_as_einsum, parse_kernel
from .roofline import (
    PRESETS,
    arithmetic_intensity,
    flop_count,
    footprint_bytes,
    memory_bound_fraction,
    resolve_device,
    roofline,
    time_canonicalization,
)

logger = logging.getLogger("CLI")

VISIBLE_COMMANDS = "canonicalize,isomorphic,match,record,retrieve,stats,bench,dot"


class ExitStatus(IntEnum):
    OK = 0
    DOMAIN_ERROR = 1
    USAGE_ERROR = 2
    IO_ERROR = 3


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_spec(path: str) -> BatchedEinsum:
    return parse_classic(_read(path))


def _emit(lines: List[str]) -> None:
    for line in lines:
        print(line)


# ============================================================================
# COMANDOS
# ============================================================================

def cmd_canonicalize(args: argparse.Namespace, config: Dict) -> ExitStatus:
    e = _load_spec(args.spec)
    result = canonicalize(e, prune_automorphisms=config["prune_automorphisms"])
    key = canonical_key(result.canonical, check=False)
    if args.format == "key-only":
        print(key)
        return ExitStatus.OK
    sys.stdout.write(print_classic(result.canonical))
    print(f"key: {key}")
    _emit([f"arg: {k} -> {v}" for k, v in sorted(result.sigma_arg.items())])
    _emit([f"idx: {k} -> {v}" for k, v in sorted(result.sigma_idx.items())])
    _emit([f"row: {k} -> {v}" for k, v in sorted(result.sigma_row.items())])
    _emit([f"slot: {k} -> {v}" for k, v in sorted(result.sigma_slot.items())])
    return ExitStatus.OK


def cmd_isomorphic(args: argparse.Namespace, config: Dict) -> ExitStatus:
    e1, e2 = _load_spec(args.spec_a), _load_spec(args.spec_b)
    if args.brute_force:
        witness = brute_force_isomorphic(e1, e2, budget=int(config["brute_force_budget"]))
    else:
        witness = is_isomorphic(e1, e2)
    if witness is None:
        print("not isomorphic")
        return ExitStatus.DOMAIN_ERROR
    _emit(witness.to_lines())
    return ExitStatus.OK


def cmd_match(args: argparse.Namespace, config: Dict) -> ExitStatus:
    kernel = parse_kernel(_read(args.kernel))
    ref = _load_spec(args.ref)
    try:
        identification = identify_as_einsum(kernel, ref)
    except CanonicalMismatchError as exc:
        logger.error("[CLI] kernel não corresponde à referência")
        print("canonical mismatch")
        _emit([f"  {line}" for line in exc.diff])
        return ExitStatus.DOMAIN_ERROR
    _emit(identification.to_lines())
    return ExitStatus.OK


def cmd_record(args: argparse.Namespace, config: Dict) -> ExitStatus:
    e = _load_spec(args.spec)
    measurement = Measurement(args.transform, args.time, args.flop_rate, args.meta)
    count = FactsDatabase(args.db).record_facts(e, args.device, [measurement])
    print(f"recorded: {count}")
    return ExitStatus.OK


def cmd_retrieve(args: argparse.Namespace, config: Dict) -> ExitStatus:
    e = _load_spec(args.spec)
    try:
        retrieval = FactsDatabase(args.db).retrieve(e, args.device)
    except NotFoundError as exc:
        logger.info(f"[CLI] {exc}")
        print("not found")
        return ExitStatus.DOMAIN_ERROR
    print(f"key: {retrieval.record.canonical_key}")
    _emit(retrieval.to_lines())
    return ExitStatus.OK


def cmd_stats(args: argparse.Namespace, config: Dict) -> ExitStatus:
    e = _load_spec(args.spec)
    print(f"flops: {flop_count(e)}")
    print(f"bytes: {footprint_bytes(e)}")
    print(f"arithmetic_intensity: {arithmetic_intensity(e):.4f}")
    if args.stats_device:
        result = roofline(e, resolve_device(args.stats_device, config.get("devices")))
        print(f"device: {result.device_id}")
        print(f"saturation_ai: {result.saturation_ai:.4f}")
        print(f"roofline_flops: {result.roofline_flops:.6g}")
        print(f"memory_bound: {str(result.memory_bound).lower()}")
    return ExitStatus.OK


def cmd_fuzz(args: argparse.Namespace, config: Dict) -> ExitStatus:
    """Soundness, idempotência e validade de testemunhas em instâncias aleatórias."""
    iterations = args.iterations or int(config["fuzz_iterations"])
    rng = np.random.default_rng(args.seed)
    failures = 0
    for k in range(iterations):
        seed = args.seed + k
        params = generator_params(config, seed, b=int(rng.integers(1, 5)), n=int(rng.integers(1, 5)))
        e = generate_random(params)
        scrambled, applied = scramble(e, seed)
        c1, c2 = canonicalize(e), canonicalize(scrambled)
        witness = is_isomorphic(scrambled, e)
        problems = []
        if not verify_witness(scrambled, e, applied):
            problems.append("testemunha do embaralhamento")
        if not equals(c1.canonical, c2.canonical):
            problems.append("formas canônicas diferentes")
        if not equals(canonicalize(c1.canonical).canonical, c1.canonical):
            problems.append("idempotência")
        if witness is None or not verify_witness(scrambled, e, witness):
            problems.append("testemunha de is_isomorphic")
        if problems:
            failures += 1
            logger.error(f"[CLI] semente {seed}: {', '.join(problems)} em {e.subscripts}")
    print(f"instances: {iterations}")
    print(f"failures: {failures}")
    return ExitStatus.OK if failures == 0 else ExitStatus.DOMAIN_ERROR


def cmd_bench(args: argparse.Namespace, config: Dict) -> ExitStatus:
    count = args.count or int(config["bench_count"])
    einsums = [tccg_like(args.seed + k) for k in range(count)]
    summary = time_canonicalization(einsums, prune_automorphisms=config["prune_automorphisms"])
    print(f"instances: {count}")
    print(f"median_ms: {summary.median * 1e3:.3f}")
    print(f"max_ms: {summary.maximum * 1e3:.3f}")
    print(f"memory_bound_fraction: {memory_bound_fraction(einsums, list(PRESETS.values())):.3f}")
    return ExitStatus.OK


def cmd_dot(args: argparse.Namespace, config: Dict) -> ExitStatus:
    sys.stdout.write(to_dot(to_induced_graph(_load_spec(args.spec))))
    return ExitStatus.OK


COMMANDS = {
    "canonicalize": cmd_canonicalize,
    "isomorphic": cmd_isomorphic,
    "match": cmd_match,
    "record": cmd_record,
    "retrieve": cmd_retrieve,
    "stats": cmd_stats,
    "fuzz": cmd_fuzz,
    "bench": cmd_bench,
    "dot": cmd_dot,
}


# ============================================================================
# PARSER
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="arquivo de configuração JSON")
    common.add_argument("--db", help="banco de fatos (padrão ./feinsum-facts.db)")
    common.add_argument("--format", choices=["text", "key-only"], default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING, ERROR")

    parser = argparse.ArgumentParser(
        prog="einsum_canon",
        description="Canonicalização de einsums em lote e banco de fatos de desempenho",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar=f"{{{VISIBLE_COMMANDS}}}")
    sub.required = True

    p = sub.add_parser("canonicalize", parents=[common], help="forma canônica, chave e mapas")
    p.add_argument("spec")

    p = sub.add_parser("isomorphic", parents=[common], help="testemunha de isomorfismo")
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    p.add_argument("--brute-force", action="store_true", help="busca exaustiva (limitada por brute_force_budget)")

    p = sub.add_parser("match", parents=[common], help="identifica um kernel contra uma referência")
    p.add_argument("kernel")
    p.add_argument("ref")

    p = sub.add_parser("record", parents=[common], help="grava uma medição")
    p.add_argument("spec")
    p.add_argument("--device")
    p.add_argument("--transform", required=True)
    p.add_argument("--time", type=float, required=True, help="tempo de parede em segundos")
    p.add_argument("--flop-rate", type=float, default=0.0)
    p.add_argument("--meta", default="")

    p = sub.add_parser("retrieve", parents=[common], help="melhor transformação registrada")
    p.add_argument("spec")
    p.add_argument("--device")

    p = sub.add_parser("stats", parents=[common], help="FLOPs, bytes, AI e roofline")
    p.add_argument("spec")
    p.add_argument("--device", dest="stats_device")

    p = sub.add_parser("fuzz", parents=[common], help=argparse.SUPPRESS)
    p.add_argument("--iterations", type=int)

    p = sub.add_parser("bench", parents=[common], help="tempo de canonicalização (TCCG)")
    p.add_argument("--count", type=int)

    p = sub.add_parser("dot", parents=[common], help="grafo induzido em DOT")
    p.add_argument("spec")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Ponto de entrada; devolve o código de saída."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        config = load_config(args.config)
    except StorageError as exc:
        print(f"erro: {exc}", file=sys.stderr)
        return ExitStatus.IO_ERROR

    level = (args.log_level or str(config["log_level"])).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    args.db = args.db or config["db_path"]
    if hasattr(args, "device") and not args.device:
        args.device = config["default_device"]

    try:
        return int(COMMANDS[args.command](args, config))
    except (StorageError, OSError) as exc:
        logger.error(f"[CLI] erro de E/S: {exc}")
        print(f"erro: {exc}", file=sys.stderr)
        return ExitStatus.IO_ERROR
    except EinsumCanonError as exc:
        logger.error(f"[CLI] {type(exc).__name__}: {exc}")
        print(f"erro: {exc}", file=sys.stderr)
        return ExitStatus.DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
