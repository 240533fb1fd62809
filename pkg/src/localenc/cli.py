"""Command-line interface.

Exit codes: 0 pass, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import audit as audit_mod
from . import group as group_mod
from .circuits import CircuitError, GateCircuit, ghz_circuit, graph_state_circuit, random_clifford_circuit
from .encoders import (
    EncoderSet,
    GramReport,
    circuit_encoder,
    constructive_w_encoder,
    dense_coding_check,
    four_two_encoder,
    gram_magnitudes,
    inductive_extend,
    product_encoder,
    subgroup_encoder,
    two_qubit_encoder,
    verify_encoder,
    w3_encoder,
    w_generators,
    xi_state,
    zero_encoder,
)
from .pauli import DimensionError, PauliString
from .search import STRATEGIES, SearchProblem, run_search
from .state import (
    RegimeError,
    StateVector,
    apply_circuit,
    product_state,
    symmetric_state,
    zero_state,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_TOL = 1e-4
HEATMAP_LIMIT = 8


class UsageError(Exception):
    pass


# argument parsing --------------------------------------------------------


def _tol(text: str) -> float:
    v = float(text)
    if not 0 < v <= MAX_TOL:
        raise argparse.ArgumentTypeError(f"tolerance must lie in (0, {MAX_TOL:g}]")
    return v


def _count(text: str) -> int:
    """Positive integer, also accepted in float notation such as 1e7."""
    v = float(text)
    if not v.is_integer() or v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(v)


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated decimals, got {text!r}") from exc


def _edges(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.split(","):
        if not item.strip():
            continue
        a, sep, b = item.partition("-")
        if not sep:
            raise argparse.ArgumentTypeError(f"edge {item!r} is not of the form a-b")
        out.append((int(a), int(b)))
    return out


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=_tol, default=1e-10, help="Gram tolerance, in (0, 1e-4]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, help="output file (default: stdout)")
    p.add_argument("--format", choices=("json", "table"), default="json")


def _state_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--sym", nargs=2, type=int, metavar=("N", "M"), help="symmetric basis state |N,M>")
    g.add_argument("--w", type=int, metavar="N", help="W state |N,1>")
    g.add_argument("--xi", type=_floats, metavar="A2", help="squared weights, comma-separated; a minus sign flips the weight")
    g.add_argument("--zero", type=int, metavar="N", help="|0...0>")
    g.add_argument("--ghz", type=int, metavar="N")
    g.add_argument("--circuit", type=Path, metavar="FILE", help="gate file applied to |0...0>")
    g.add_argument("--amps", type=Path, metavar="FILE", help="state export JSON")
    g.add_argument("--product", nargs=2, type=_floats, metavar=("THETAS", "PHIS"))
    g.add_argument("--graph", nargs=2, metavar=("N", "EDGES"), help="graph state, edges like 0-1,1-2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="localenc", description="Local encoders of multiqubit states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", help="build a state and export its amplitudes")
    _state_args(p)
    _common(p)

    p = sub.add_parser("verify", help="build an encoder set and run the Gram check")
    _state_args(p)
    sel = p.add_mutually_exclusive_group(required=True)
    sel.add_argument("--zero-encoder", action="store_true")
    sel.add_argument("--product-encoder", nargs="?", const="", type=str, metavar="PHIS",
                     help="azimuths; defaults to those of --product")
    sel.add_argument("--clifford", type=Path, metavar="FILE", help="Clifford gate file conjugating the zero encoder")
    sel.add_argument("--constructive", action="store_true")
    sel.add_argument("--inductive", metavar="BASE", help="w3, x1, constructive:N or an encoder JSON file")
    sel.add_argument("--explicit42", action="store_true")
    sel.add_argument("--group", type=Path, metavar="FILE", help="generator labels, one per line")
    sel.add_argument("--from-json", type=Path, metavar="FILE", help="encoder JSON (or a sample-group file)")
    sel.add_argument("--two-qubit", action="store_true")
    p.add_argument("--export-encoder", type=Path, metavar="FILE")
    p.add_argument("--heatmap", type=Path, metavar="PREFIX", help="write PREFIX.csv and PREFIX.png")
    _common(p)

    p = sub.add_parser("audit", help="reproduce the symmetric-state encodability chart")
    p.add_argument("--no-figure", action="store_true", help="skip the PNG written next to --out")
    p.add_argument("--search-up-to", type=int, default=0, metavar="N",
                   help="run the exhaustive subgroup search on unencoded states with n <= N (minutes at N = 6)")
    _common(p)

    p = sub.add_parser("search", help="search Pauli encoder sets for a state")
    _state_args(p)
    p.add_argument("--mode", choices=("subgroup", "clique"), default="subgroup")
    p.add_argument("--strategy", choices=STRATEGIES, default="structured",
                   help="subgroup enumeration order (both are exhaustive)")
    p.add_argument("--nodes", type=_count, default=1_000_000)
    p.add_argument("--seconds", type=float, default=600.0)
    p.add_argument("--solutions", type=_count, default=16)
    _common(p)

    p = sub.add_parser("densecode", help="dense-coding orthogonality check")
    p.add_argument("--n", type=int, default=1, choices=(1, 2, 3, 4))
    p.add_argument("--samples", type=_count, default=1)
    p.add_argument("--identity", action="store_true", help="use U = I instead of Haar-random unitaries")
    _common(p)

    p = sub.add_parser("sample-group", help="emit a Pauli-encodable state from a commutant exponential")
    p.add_argument("--example", choices=("x", "q"), default="q",
                   help="x: X-string generators; q: Z..ZXI..I generators with the q_i exponent")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--depth", type=int, default=20, help="random Clifford depth (q example)")
    _common(p)
    return parser


# state construction ------------------------------------------------------


def build_state(args: argparse.Namespace) -> StateVector:
    if args.sym is not None:
        return symmetric_state(*args.sym)
    if args.w is not None:
        return symmetric_state(args.w, 1)
    if args.xi is not None:
        weights = [math.copysign(math.sqrt(abs(v)), v) for v in args.xi]
        return xi_state(weights)
    if args.zero is not None:
        return zero_state(args.zero)
    if args.ghz is not None:
        return apply_circuit(ghz_circuit(args.ghz), zero_state(args.ghz))
    if args.circuit is not None:
        c = GateCircuit.from_file(args.circuit)
        return apply_circuit(c, zero_state(c.n))
    if args.amps is not None:
        s = StateVector.from_export(json.loads(args.amps.read_text()))
        s.require_normalized()
        return s
    if args.product is not None:
        return product_state(*args.product)
    n = int(args.graph[0])
    return apply_circuit(graph_state_circuit(n, _edges(args.graph[1])), zero_state(n))


def _base_encoder(spec: str) -> EncoderSet:
    if spec == "w3":
        return w3_encoder()
    if spec == "x1":
        return EncoderSet(1, (PauliString.from_label("I"), PauliString.from_label("X")), "x1")
    if spec.startswith("constructive:"):
        return constructive_w_encoder(int(spec.split(":", 1)[1]))
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"unknown inductive base {spec!r}")
    return _load_encoder(path)


def _load_encoder(path: Path) -> EncoderSet:
    data = json.loads(path.read_text())
    if "encoder" in data and isinstance(data["encoder"], list):
        # sample-group export: element labels under "encoder"
        labels = data["encoder"]
        return EncoderSet(len(labels[0].lstrip("+-i")), tuple(PauliString.from_label(x) for x in labels), "encoder_group")
    return EncoderSet.from_json(data)


def _read_generators(path: Path) -> list[PauliString]:
    text = path.read_text()
    if text.lstrip().startswith("{"):
        return [PauliString.from_label(g) for g in json.loads(text)["generators"]]
    labels = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    return [PauliString.from_label(x) for x in labels if x]


def build_encoder(args: argparse.Namespace, s: StateVector) -> EncoderSet:
    n = s.n
    if args.zero_encoder:
        return zero_encoder(n)
    if args.product_encoder is not None:
        if args.product_encoder:
            phis = _floats(args.product_encoder)
        elif args.product is not None:
            phis = args.product[1]
        else:
            raise UsageError("--product-encoder needs azimuths unless the state is given by --product")
        return product_encoder(phis)
    if args.clifford is not None:
        return circuit_encoder(GateCircuit.from_file(args.clifford))
    if args.constructive:
        return constructive_w_encoder(n)
    if args.inductive is not None:
        e = _base_encoder(args.inductive)
        if e.n >= n:
            raise UsageError(f"inductive base has {e.n} qubits; the state has {n}")
        while e.n < n:
            e = inductive_extend(e)
        return e
    if args.explicit42:
        if n != 4:
            raise UsageError("--explicit42 needs a four-qubit state")
        return four_two_encoder()
    if args.group is not None:
        return subgroup_encoder(_read_generators(args.group), "group")
    if args.from_json is not None:
        return _load_encoder(args.from_json)
    if n != 2:
        raise UsageError("--two-qubit needs a two-qubit state")
    return two_qubit_encoder(s)


# output ------------------------------------------------------------------


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def _gram_table(rep: GramReport) -> str:
    lines = [
        f"n={rep.n} provenance={rep.provenance} tol={rep.tol:g}",
        f"pass={rep.passed} max_offdiag={rep.max_offdiag:.3e} min_diag={rep.min_diag:.12f}",
    ]
    if rep.offenders:
        lines.append(f"{'i':>6} {'j':>6} {'|overlap|':>12}")
        lines += [f"{i:>6} {j:>6} {o:>12.6g}" for i, j, o in rep.offenders[:50]]
        if len(rep.offenders) > 50:
            lines.append(f"... {len(rep.offenders) - 50} more")
    return "\n".join(lines) + "\n"


def write_heatmap(s: StateVector, e: EncoderSet, prefix: Path) -> tuple[Path, Path]:
    from .plotting import gram_heatmap

    if s.n > HEATMAP_LIMIT:
        raise UsageError(f"heatmaps are limited to {HEATMAP_LIMIT} qubits")
    gram = gram_magnitudes(s, e)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    csv_path = prefix.with_suffix(".csv")
    np.savetxt(csv_path, gram, fmt="%.12f", delimiter=",")
    png_path = gram_heatmap(gram, prefix.with_suffix(".png"), f"{e.provenance}, n={s.n}")
    return csv_path, png_path


# commands ----------------------------------------------------------------


def cmd_state(args: argparse.Namespace) -> int:
    s = build_state(args)
    if args.format == "json":
        _emit(json.dumps({"n": s.n, "amplitudes": s.to_export()}, indent=2) + "\n", args.out)
    else:
        rows = [f"{b}  {re:+.12f} {im:+.12f}" for b, re, im in s.to_export()]
        _emit("\n".join(rows) + "\n", args.out)
    return EXIT_PASS


def cmd_verify(args: argparse.Namespace) -> int:
    s = build_state(args)
    e = build_encoder(args, s)
    if e.n != s.n:
        raise UsageError(f"{e.n}-qubit encoder for a {s.n}-qubit state")
    rep = verify_encoder(s, e, args.tol)
    if args.export_encoder is not None:
        _emit(json.dumps(e.to_json(), indent=2) + "\n", args.export_encoder)
    if args.heatmap is not None:
        write_heatmap(s, e, args.heatmap)
    _emit(rep.dumps() + "\n" if args.format == "json" else _gram_table(rep), args.out)
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_audit(args: argparse.Namespace) -> int:
    report = audit_mod.reproduction_report(args.tol, args.search_up_to)
    text = report.dumps() if args.format == "json" else report.to_table()
    _emit(text, args.out)
    if args.out is not None:
        args.out.with_suffix(".csv").write_text(report.to_csv())
        if not args.no_figure:
            from .plotting import audit_figure

            audit_figure(report, args.out.with_suffix(".png"))
    return EXIT_PASS


def cmd_search(args: argparse.Namespace) -> int:
    s = build_state(args)
    problem = SearchProblem(s, args.mode, args.nodes, args.seconds, args.solutions, args.seed, args.strategy)
    result = run_search(problem)
    if args.format == "json":
        text = json.dumps(result.to_json(), indent=2) + "\n"
    else:
        lines = [
            f"mode={result.mode} strategy={result.strategy} nodes={result.nodes} exhausted={result.exhausted} "
            f"solutions={len(result.solutions)} best_size={result.best_size}"
        ]
        for sol in result.solutions:
            lines.append(" ".join(str(p) for p in sol.encoder.elements))
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_PASS


def cmd_densecode(args: argparse.Namespace) -> int:
    from scipy.stats import unitary_group

    rng = np.random.default_rng(args.seed)
    dim = 1 << args.n
    reports = []
    for _ in range(args.samples):
        u = np.eye(dim) if args.identity else unitary_group.rvs(dim, random_state=rng)
        reports.append(dense_coding_check(u, tol=args.tol))
    ok = all(r.passed for r in reports)
    if args.format == "json":
        text = json.dumps({"n": args.n, "pass": ok, "reports": [r.to_json() for r in reports]}, indent=2) + "\n"
    else:
        text = "".join(_gram_table(r) for r in reports)
    _emit(text, args.out)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_sample_group(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(args.seed)
    n = args.n
    if args.example == "x":
        gens = group_mod.x_generators(n)
        ops = group_mod.build_commutative_set(gens)
        coeffs = group_mod.random_coefficients(len(ops), rng)
        circuit = None
    else:
        gens = w_generators(n)
        ops = group_mod.q_operators(n)
        coeffs = [0.0] + group_mod.random_coefficients(n, rng)
        circuit = random_clifford_circuit(n, args.depth, rng)
    sample = group_mod.sample_pseudo_clifford(gens, ops, coeffs, circuit)
    if args.format == "json":
        text = json.dumps(sample.to_json(), indent=2) + "\n"
    else:
        text = _gram_table(sample.gram)
    _emit(text, args.out)
    return EXIT_PASS if sample.gram.passed else EXIT_FAIL


_COMMANDS = {
    "state": cmd_state,
    "verify": cmd_verify,
    "audit": cmd_audit,
    "search": cmd_search,
    "densecode": cmd_densecode,
    "sample-group": cmd_sample_group,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, argparse.ArgumentTypeError, DimensionError, RegimeError, CircuitError, ValueError, OSError) as exc:
        print(f"localenc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
