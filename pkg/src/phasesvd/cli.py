"""``phasesvd`` command line: svd, schmidt and verify over matrix/state files.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NonFiniteError, NumericalError, ParseError
from .io_formats import emit_result, format_real, parse_matrix, parse_state
from .linalg_core import DEFAULT_TOL, frobenius_norm
from .phase_svd import ACCEPT_TOL, ALL_IN_U, ALL_IN_V, HALF_HALF, reconstruct, svd
from .schmidt import schmidt_decompose

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_ERROR = 3

CONVENTIONS = {"u": ALL_IN_U, "v": ALL_IN_V, "split": HALF_HALF}


@dataclass(frozen=True)
class CliConfig:
    command: str
    input_path: str
    convention: str = "u"
    tol: float = DEFAULT_TOL
    output: str = "text"
    dims: tuple[int, int] | None = None

    @property
    def phase_convention(self):
        return CONVENTIONS[self.convention]


class _InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def run_svd(config: CliConfig) -> tuple[int, str]:
    a = parse_matrix(_read(config.input_path))
    f = svd(a, config.phase_convention, config.tol)
    return EXIT_OK, emit_result(f, config.output)


def run_schmidt(config: CliConfig) -> tuple[int, str]:
    psi = parse_state(_read(config.input_path), config.dims)
    sd = schmidt_decompose(psi, config.phase_convention, config.tol)
    return EXIT_OK, emit_result(sd, config.output)


def verify_matrix(a, tol: float = DEFAULT_TOL) -> dict:
    """SVD under every CLI convention; residuals and cross-convention spread."""
    scale = max(1.0, frobenius_norm(a))
    recon = {}
    residuals = {}
    for name, conv in CONVENTIONS.items():
        f = svd(a, conv, tol)
        recon[name] = reconstruct(f)
        residuals[name] = f.residual / scale
    names = list(recon)
    spread = max(
        (frobenius_norm(recon[p] - recon[q]) / scale for i, p in enumerate(names) for q in names[i + 1 :]),
        default=0.0,
    )
    ok = max(residuals.values()) <= ACCEPT_TOL and spread <= ACCEPT_TOL
    return {"residuals": residuals, "max_discrepancy": spread, "ok": ok}


def run_verify(config: CliConfig) -> tuple[int, str]:
    a = parse_matrix(_read(config.input_path))
    report = verify_matrix(a, config.tol)
    if config.output == "json":
        parts = [f'"{k}": {format_real(v)}' for k, v in report["residuals"].items()]
        text = (
            "{\n"
            f'  "residuals": {{{", ".join(parts)}}},\n'
            f'  "max_discrepancy": {format_real(report["max_discrepancy"])},\n'
            f'  "threshold": {format_real(ACCEPT_TOL)},\n'
            f'  "ok": {"true" if report["ok"] else "false"}\n'
            "}\n"
        )
    else:
        lines = [f"residual[{k}]: {format_real(v)}" for k, v in report["residuals"].items()]
        lines.append(f"max cross-convention discrepancy: {format_real(report['max_discrepancy'])}")
        lines.append(f"threshold: {format_real(ACCEPT_TOL)} (relative)")
        lines.append("PASS" if report["ok"] else "FAIL")
        text = "\n".join(lines) + "\n"
    return (EXIT_OK if report["ok"] else EXIT_VERIFY_FAILED), text


COMMANDS = {"svd": run_svd, "schmidt": run_schmidt, "verify": run_verify}


def _positive_float(s: str) -> float:
    try:
        x = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not (x > 0 and np.isfinite(x)):
        raise argparse.ArgumentTypeError("must be a positive finite number")
    return x


def _positive_int(s: str) -> int:
    try:
        x = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if x < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phasesvd", description="Phase-consistent SVD and Schmidt decomposition.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("svd", "decompose a matrix file"),
        ("schmidt", "Schmidt-decompose a bipartite state file"),
        ("verify", "check reconstruction under every phase convention"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("input_path", metavar="FILE")
        p.add_argument("--convention", choices=sorted(CONVENTIONS), default="u",
                       help="where phase factors go: u (all in U), v (all in V), split (half each)")
        p.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)
        p.add_argument("--output", choices=("text", "json"), default="text")
        if name == "schmidt":
            p.add_argument("--dims", nargs=2, type=_positive_int, metavar=("DIM_A", "DIM_B"),
                           help="subsystem dimensions for a state file without a header")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT_ERROR
    config = CliConfig(
        command=ns.command,
        input_path=ns.input_path,
        convention=ns.convention,
        tol=ns.tol,
        output=ns.output,
        dims=tuple(ns.dims) if getattr(ns, "dims", None) else None,
    )
    try:
        code, text = COMMANDS[config.command](config)
    except (ParseError, NonFiniteError, _InputError) as exc:
        print(f"phasesvd: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except NumericalError as exc:
        print(f"phasesvd: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_ERROR
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
