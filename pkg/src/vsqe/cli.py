"""Command-line interface: ``vsqe qe|decide|verify|tables-validate``."""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .elim import (DegreeExceedsBound, DegreeGrowthExceedsCapability, Mode, NotPrenex,
                   eliminate_block, split_prenex)
from .formula import (Exists, Forall, FormulaSyntaxError, Not, TrueF, FalseF, evaluate,
                      free_vars, parse, positive_form, sorted_vars, to_sexpr)
from .qea import (BackendConfig, BridgeFailure, NoBackendApplicable, TableFormatError,
                  default_tables_dir, load_tables, validate_entry)
from .realalg import decide_exists_1d

EXIT_OK, EXIT_DISAGREE, EXIT_SYNTAX, EXIT_CAPABILITY, EXIT_BRIDGE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str = "-"
    mode: Mode = Mode.LOWER
    backend: str = "tables,pointfree"
    tables: str | None = None
    degree: int | None = None
    samples: int = 100
    seed: int = 0
    coeff_bound: int = 20
    fold: bool = True
    timeout: float = 60.0
    output: str | None = None

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise UsageError("--samples must be at least 1")
        if self.coeff_bound < 1:
            raise UsageError("--coeff-bound must be at least 1")

    def backends(self) -> BackendConfig:
        return BackendConfig.from_chain(self.backend, self.tables_dir(), self.timeout)

    def tables_dir(self) -> Path:
        return Path(self.tables) if self.tables else default_tables_dir()


def _read_input(cfg: RunConfig) -> str:
    if cfg.input == "-":
        return sys.stdin.read()
    return Path(cfg.input).read_text()


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text + "\n")
    else:
        print(text)


def random_point(params: Sequence[str], rng: random.Random, bound: int) -> dict[str, Fraction]:
    return {p: Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for p in params}


def cmd_qe(cfg: RunConfig) -> int:
    phi = parse(_read_input(cfg))
    psi = eliminate_block(phi, cfg.degree, cfg.mode, cfg.backends(), cfg.fold)
    _emit(cfg, to_sexpr(psi))
    return EXIT_OK


def cmd_decide(cfg: RunConfig) -> int:
    phi = parse(_read_input(cfg))
    if free_vars(phi):
        raise UsageError(f"decide needs a sentence; free variables {sorted_vars(free_vars(phi))}")
    psi = eliminate_block(phi, cfg.degree, cfg.mode, cfg.backends(), True)
    if not isinstance(psi, (TrueF, FalseF)):
        psi = TrueF() if evaluate(psi, {}) else FalseF()
    _emit(cfg, to_sexpr(psi))
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    phi = parse(_read_input(cfg))
    prefix, matrix = split_prenex(phi)
    if len(prefix) != 1:
        raise UsageError("verify expects exactly one quantifier in front of a quantifier-free formula")
    quant, x = prefix[0]
    body = positive_form(matrix)
    psi = eliminate_block(phi, cfg.degree, cfg.mode, cfg.backends(), cfg.fold)
    params = sorted_vars(free_vars(phi))
    rng = random.Random(cfg.seed)
    total = cfg.samples if params else 1
    agree = 0
    bad = []
    for _ in range(total):
        alpha = random_point(params, rng, cfg.coeff_bound)
        if quant is Exists:
            want = decide_exists_1d(body, alpha, x)
        else:
            want = not decide_exists_1d(positive_form(Not(body)), alpha, x)
        got = evaluate(psi, alpha)
        if got == want:
            agree += 1
        else:
            bad.append((tuple(alpha[p] for p in params), want, got))
    lines = [f"{agree}/{total} agree"]
    if bad:
        point, want, got = min(bad)
        pretty = " ".join(f"{p}={v}" for p, v in zip(params, point))
        lines.append(f"counterexample: {pretty} oracle={str(want).lower()} "
                     f"elimination={str(got).lower()}")
    _emit(cfg, "\n".join(lines))
    return EXIT_OK if not bad else EXIT_DISAGREE


def cmd_tables_validate(cfg: RunConfig) -> int:
    d = cfg.tables_dir()
    if not d.is_dir():
        raise UsageError(f"tables directory {d} does not exist")
    tables = load_tables(d)
    if not tables:
        print(f"warning: no table entries in {d}", file=sys.stderr)
    failed = 0
    disagreements = 0
    lines = []
    for entry in tables.values():
        rep = validate_entry(entry, cfg.samples, cfg.seed)
        lines.append(f"degree {entry.query.n} {rep}")
        failed += not rep.ok
        disagreements += rep.disagree
    total = len(tables) * cfg.samples
    lines.append(f"{len(tables)} entries, {disagreements}/{total} sample disagreements,"
                 f" {failed} failing")
    _emit(cfg, "\n".join(lines))
    return EXIT_OK if failed == 0 else EXIT_DISAGREE


COMMANDS = {"qe": cmd_qe, "decide": cmd_decide, "verify": cmd_verify,
            "tables-validate": cmd_tables_validate}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vsqe", description="Real quantifier elimination by "
                                 "virtual substitution with Thom-coded roots.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--input", default="-", help="input file, or - for standard input")
    ap.add_argument("--mode", choices=["full", "lower"], default="lower")
    ap.add_argument("--backend", default="tables,pointfree",
                    help="comma-separated chain of tables, pointfree, bridge:CMD")
    ap.add_argument("--tables", help="table directory (overrides $VSQE_TABLES)")
    ap.add_argument("--degree", type=int, help="code length used for elimination")
    ap.add_argument("--samples", type=int, default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--coeff-bound", type=int, default=20)
    fold = ap.add_mutually_exclusive_group()
    fold.add_argument("--fold", dest="fold", action="store_true", default=True,
                      help="fold constant atoms in the output (default)")
    fold.add_argument("--no-fold", dest="fold", action="store_false",
                      help="print the unfolded disjunction")
    ap.add_argument("--timeout", type=float, default=60.0, help="bridge timeout in seconds")
    ap.add_argument("--output", help="write the result here instead of standard output")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        samples = args.samples
        if samples is None:
            samples = 200 if args.command == "tables-validate" else 100
        cfg = RunConfig(args.command, args.input, Mode(args.mode), args.backend, args.tables,
                        args.degree, samples, args.seed, args.coeff_bound, args.fold,
                        args.timeout, args.output)
        return COMMANDS[cfg.command](cfg)
    except TableFormatError as e:
        print(f"vsqe: malformed table: {e}", file=sys.stderr)
        return EXIT_SYNTAX
    except FormulaSyntaxError as e:
        print(f"vsqe: syntax error: {e}", file=sys.stderr)
        return EXIT_SYNTAX
    except (UsageError, NotPrenex, ValueError) as e:
        print(f"vsqe: {e}", file=sys.stderr)
        return EXIT_SYNTAX
    except (DegreeGrowthExceedsCapability, DegreeExceedsBound, NoBackendApplicable) as e:
        print(f"vsqe: {e}", file=sys.stderr)
        return EXIT_CAPABILITY
    except BridgeFailure as e:
        print(f"vsqe: bridge failure: {e}", file=sys.stderr)
        return EXIT_BRIDGE


if __name__ == "__main__":
    sys.exit(main())
