"""Command-line entry point.

Exit codes: 0 success, 2 input error, 3 validation failure, 4 verification
residual above tolerance.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import generators as gen
from .contextuality import ContextualityError, reduce_to_commuting
from .hamiltonian import HamiltonianParseError, PauliHamiltonian, parse, serialize
from .majorana import (
    IntegralError,
    jordan_wigner,
    parse_integrals,
    random_integrals,
    serialize_integrals,
    theorem1_partition,
    to_majorana,
)
from .measure import cost_report, shot_allocation
from .partition import AnticommutingPartition, find_violation, greedy_color
from .report import (
    RESIDUAL_TOL,
    ReportError,
    dumps,
    load_report,
    partition_report,
    plan_residuals,
    write_json,
)
from .rotation import budgeted_split, gate_count, plans_for_partition
from .simulator import MAX_QUBITS

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VALIDATION = 3
EXIT_RESIDUAL = 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    subcommand: str
    inputs: list[str]
    output: str | None = None
    strategy: str = "greedy"
    mode: str = "sequence"
    max_gates: int | None = None
    epsilon: float = 1e-3
    seed: int | None = None
    restarts: int = 1
    verify: bool = False

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise CliError("epsilon must be positive")
        if self.max_gates is not None and self.max_gates < 0:
            raise CliError("max-gates must be non-negative")
        if self.restarts < 1:
            raise CliError("restarts must be at least 1")


# --- input handling ---------------------------------------------------------


def _read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None


def _is_integral_text(text: str) -> bool:
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return line.split()[0] == "norb"
    return False


def _load_input(path: str):
    """Return ``(hamiltonian, integral_table_or_None)``."""
    text = _read_text(path)
    try:
        if _is_integral_text(text):
            table = parse_integrals(text)
            return jordan_wigner(to_majorana(table)), table
        return parse(text), None
    except (HamiltonianParseError, IntegralError) as exc:
        raise CliError(f"{path}: {exc}") from None


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# --- partition strategies -----------------------------------------------------


def _tim_graph(h: PauliHamiltonian) -> tuple[gen.GraphSpec, float]:
    """Recover the graph and field of a transverse-field Ising Hamiltonian."""
    edges, fields = [], []
    for c, op in h.terms:
        qubits = [q for q in range(h.n_qubits) if op.letter(q) != "I"]
        letters = {op.letter(q) for q in qubits}
        if letters == {"Z"} and len(qubits) == 2 and abs(c - 1.0) < 1e-12:
            edges.append(tuple(qubits))
        elif letters == {"X"} and len(qubits) == 1:
            fields.append(c)
        else:
            raise CliError(f"term {op.word} does not fit the transverse-field Ising form")
    if len(fields) != h.n_qubits or max(fields) - min(fields) > 1e-12:
        raise CliError("the tim strategy needs one X term per qubit with a shared coefficient")
    return gen.GraphSpec(h.n_qubits, tuple(sorted(edges))), fields[0]


def _partition(config: RunConfig, h: PauliHamiltonian, table) -> tuple[PauliHamiltonian, AnticommutingPartition]:
    if config.strategy == "greedy":
        return h, greedy_color(h, order_seed=config.seed, restarts=config.restarts)
    if config.strategy == "majorana":
        if table is None:
            raise CliError("the majorana strategy needs an integral file")
        return theorem1_partition(to_majorana(table))
    if config.strategy == "tim":
        g, x = _tim_graph(h)
        return h, _rebase(gen.tim_pair_partition(g, x), gen.tim_hamiltonian(g, x), h)
    if config.strategy == "dual":
        if h.n_qubits % 2:
            raise CliError("the dual strategy needs an even qubit count (two spin sectors)")
        return h, gen.dual_basis_partition(h, h.n_qubits // 2)
    raise CliError(f"unknown strategy {config.strategy!r}")


def _rebase(p: AnticommutingPartition, source: PauliHamiltonian, target: PauliHamiltonian) -> AnticommutingPartition:
    sets = [[target.index_of(source.terms[j][1]) for j in s] for s in p.sets]
    return AnticommutingPartition.from_sets(target, sets)


# --- subcommands ---------------------------------------------------------------


def cmd_partition(config: RunConfig) -> int:
    h, table = _load_input(config.inputs[0])
    h, partition = _partition(config, h, table)
    problem = find_violation(partition, h)
    if problem is not None:
        raise CliError(f"partition failed validation: {problem}", EXIT_VALIDATION)
    estimates = None
    if config.mode == "sequence":
        if config.max_gates is not None:
            partition, plans, estimates = budgeted_split(partition, h, config.max_gates)
        else:
            plans = plans_for_partition(h, partition, "sequence")
            estimates = [gate_count(p) for p in plans]
    else:
        if config.max_gates is not None:
            raise CliError("--max-gates needs sequence mode; single-rotation plans have no gate model")
        plans = plans_for_partition(h, partition, config.mode)
    verification = None
    if config.verify:
        if h.n_qubits > MAX_QUBITS:
            raise CliError(f"--verify supports at most {MAX_QUBITS} qubits")
        verification = plan_residuals(h, partition, plans)
    report = partition_report(h, partition, plans, estimates, config.epsilon, _config_dict(config), verification)
    _emit(dumps(report), config.output)
    if verification is not None and _exceeds(verification):
        print("verification residual above tolerance", file=sys.stderr)
        return EXIT_RESIDUAL
    return EXIT_OK


def _exceeds(verification: dict) -> bool:
    return max(verification["max_set_residual"], verification["reassembly_residual"]) > RESIDUAL_TOL


def _config_dict(config: RunConfig) -> dict:
    out = asdict(config)
    out.pop("output")
    return out


def cmd_estimate(config: RunConfig, ceil_shots: bool = False) -> int:
    """Cost report for a Hamiltonian (partitioned here) or an existing report.

    Shot counts per set follow the sigma <= 1 allocation; ``ceil_shots``
    rounds each up to an integer.
    """
    path = config.inputs[0]
    text = _read_text(path)
    if text.lstrip().startswith("{"):
        loaded = _load_report(path)
        h, partition = loaded.hamiltonian, loaded.partition
    else:
        h, table = _load_input(path)
        h, partition = _partition(config, h, table)
    cost = cost_report(h, partition, config.epsilon)
    shots = shot_allocation(partition.gammas, epsilon=config.epsilon)
    if ceil_shots:
        shots = [math.ceil(m) for m in shots]
    out = {
        "terms_before": len(h.terms),
        "terms_after": len(partition.sets),
        "measurement_cost": cost.to_dict(),
        "shots_per_set": shots,
    }
    _emit(dumps(out), config.output)
    return EXIT_OK


def _load_report(path: str):
    try:
        return load_report(path)
    except ReportError as exc:
        raise CliError(f"{path}: {exc}", EXIT_VALIDATION) from None


def cmd_verify(config: RunConfig) -> int:
    loaded = _load_report(config.inputs[0])
    h = loaded.hamiltonian
    if h.n_qubits > MAX_QUBITS:
        print(f"report validates; dense check skipped above {MAX_QUBITS} qubits")
        return EXIT_OK
    residuals = plan_residuals(h, loaded.partition, loaded.plans)
    _emit(dumps(residuals), config.output)
    return EXIT_RESIDUAL if _exceeds(residuals) else EXIT_OK


def cmd_reduce(config: RunConfig, plans_out: str | None) -> int:
    h, _ = _load_input(config.inputs[0])
    try:
        reduced, plans = reduce_to_commuting(h)
    except ContextualityError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from None
    _emit(serialize(reduced), config.output)
    if plans_out is not None:
        write_json(plans_out, {"schema_version": 1, "plans": [p.to_dict() for p in plans]})
    return EXIT_OK


def cmd_generate(args) -> int:
    kind = args.kind
    partition_out = getattr(args, "partition_out", None)
    if kind == "tim":
        if args.ring is not None:
            g = gen.ring(args.ring)
        elif args.regular is not None and args.vertices is not None:
            g = gen.random_regular(args.regular, args.vertices, args.seed)
        else:
            raise CliError("tim needs --ring L or --regular q --vertices n")
        text = serialize(gen.tim_hamiltonian(g, args.x))
    elif kind == "random":
        text = serialize(gen.random_klocal(args.n, args.m, args.k, args.seed))
    elif kind == "dual":
        h, p = gen.dual_basis_structure(args.modes, args.seed)
        text = serialize(h)
        if partition_out:
            write_json(partition_out, {"schema_version": 1, "hamiltonian": h.to_dict(), "partition": p.to_dict(h)})
    elif kind == "noncontextual":
        text = serialize(gen.random_noncontextual(args.qubits, args.seed))
    elif kind == "integrals":
        rng = np.random.default_rng(args.seed)
        text = serialize_integrals(random_integrals(args.orbitals, rng, args.density))
    else:
        raise CliError(f"unknown generator {kind!r}")
    _emit(text, args.output)
    return EXIT_OK


# --- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unipart", description="Unitary partitioning of Pauli Hamiltonians.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, strategy=True):
        p.add_argument("input", help="Hamiltonian text, integral file (norb header) or '-' for stdin")
        p.add_argument("-o", "--output", help="output path (default stdout)")
        p.add_argument("--epsilon", type=float, default=1e-3, help="target precision for shot bounds")
        if strategy:
            p.add_argument("--strategy", choices=["greedy", "majorana", "tim", "dual"], default="greedy")
            p.add_argument("--seed", type=int, default=None, help="tie-break permutation seed for greedy")
            p.add_argument("--restarts", type=int, default=1)

    p = sub.add_parser("partition", help="partition into anticommuting sets and build rotations")
    common(p)
    p.add_argument("--mode", choices=["sequence", "single"], default="sequence")
    p.add_argument("--max-gates", type=int, default=None, help="per-set rotation gate budget")
    p.add_argument("--verify", action="store_true", help="check every rotation against the dense oracle")

    p = sub.add_parser("estimate", help="measurement-cost report")
    common(p)
    p.add_argument("--ceil-shots", action="store_true", help="round per-set shot counts up to integers")

    p = sub.add_parser("verify", help="re-validate a partition report and compute oracle residuals")
    p.add_argument("input")
    p.add_argument("-o", "--output")

    p = sub.add_parser("reduce-noncontextual", help="map a noncontextual Hamiltonian to a commuting one")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="commuting Hamiltonian output (default stdout)")
    p.add_argument("--plans", help="write rotation plans JSON here")

    p = sub.add_parser("generate", help="write a model Hamiltonian or integral file")
    kinds = p.add_subparsers(dest="kind", required=True)
    t = kinds.add_parser("tim")
    t.add_argument("--ring", type=int)
    t.add_argument("--regular", type=int, help="vertex degree q")
    t.add_argument("--vertices", type=int)
    t.add_argument("--x", type=float, default=1.0)
    t.add_argument("--seed", type=int)
    r = kinds.add_parser("random")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--m", type=int, required=True)
    r.add_argument("--seed", type=int)
    d = kinds.add_parser("dual")
    d.add_argument("--modes", type=int, required=True)
    d.add_argument("--seed", type=int)
    d.add_argument("--partition-out", help="write the A_p partition JSON here")
    c = kinds.add_parser("noncontextual")
    c.add_argument("--qubits", type=int, required=True)
    c.add_argument("--seed", type=int)
    i = kinds.add_parser("integrals")
    i.add_argument("--orbitals", type=int, required=True)
    i.add_argument("--density", type=float, default=1.0)
    i.add_argument("--seed", type=int)
    for k in (t, r, d, c, i):
        k.add_argument("-o", "--output")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.subcommand == "generate":
            return cmd_generate(args)
        config = RunConfig(
            subcommand=args.subcommand,
            inputs=[args.input],
            output=args.output,
            strategy=getattr(args, "strategy", "greedy"),
            mode=getattr(args, "mode", "sequence"),
            max_gates=getattr(args, "max_gates", None),
            epsilon=getattr(args, "epsilon", 1e-3),
            seed=getattr(args, "seed", None),
            restarts=getattr(args, "restarts", 1),
            verify=getattr(args, "verify", False),
        )
        if config.subcommand == "partition":
            return cmd_partition(config)
        if config.subcommand == "estimate":
            return cmd_estimate(config, args.ceil_shots)
        if config.subcommand == "verify":
            return cmd_verify(config)
        return cmd_reduce(config, args.plans)
    except CliError as exc:
        print(f"unipart: error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"unipart: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
