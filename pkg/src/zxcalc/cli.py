"""Command-line front end.

Subcommands: eval, equal, rewrite, simplify, soundness, derivations,
verify sdc-ghz [--n N], verify qkd-w3 [--rounds R], render.

Exit codes: 0 on success or verification pass, 1 on verification failure,
2 on usage, parse or resource errors.  All randomness flows from --seed;
repeated invocations with the same arguments produce byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from .graph import DiagramError, parse_zxg, serialize_zxg, to_dot
from .rewrite import (
    BACKWARD,
    DERIVATION_NAMES,
    FORWARD,
    RULE_NAMES,
    ReplayError,
    check_soundness,
    get_rule,
    replay_derivation,
    simplify,
)
from .semantics import ResourceLimitError, equal_up_to_scalar, evaluate
from .protocols import qkd_check_lemmas, qkd_simulate, sdc_n_ghz_verify, sdc_verify_all

PASS, FAIL, USAGE = 0, 1, 2


@dataclass
class CliConfig:
    tolerance: float = 1e-9
    max_qubits: int = 14
    seed: int = 0
    step_limit: int = 1000
    strict_scalars: bool = False

    def validate(self) -> None:
        if self.tolerance <= 0:
            raise ValueError("--tol must be positive")
        if self.max_qubits < 1 or self.step_limit < 1:
            raise ValueError("--max-qubits and --steps must be positive")


def _format_complex(z: complex) -> str:
    return f"{z.real:.6g}{z.imag:+.6g}j"


def format_matrix(m: np.ndarray) -> str:
    rows = []
    for row in np.atleast_2d(m):
        rows.append("  ".join(_format_complex(z) for z in row))
    return "\n".join(rows)


def _read_diagram(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_zxg(fh.read())


def _write_trace(trace, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(trace.render())


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="equality tolerance")
    common.add_argument("--max-qubits", type=int, default=14, help="wire cap for evaluation")
    common.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    common.add_argument("--steps", type=int, default=1000, help="rewrite step limit")
    common.add_argument(
        "--strict-scalars",
        action="store_true",
        help="keep diamond bookkeeping instead of dropping scalar subdiagrams",
    )
    common.add_argument("--trace", metavar="PATH", help="write the rewrite trace here")

    parser = argparse.ArgumentParser(prog="zxcalc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a .zxg file to a matrix")
    p.add_argument("file")

    p = sub.add_parser("equal", parents=[common], help="compare two diagrams up to scalar")
    p.add_argument("file_a")
    p.add_argument("file_b")

    p = sub.add_parser("rewrite", parents=[common], help="apply a named rule at its first match")
    p.add_argument("rule", choices=RULE_NAMES)
    p.add_argument("file")
    p.add_argument("--direction", choices=(FORWARD, BACKWARD), default=FORWARD)

    p = sub.add_parser("simplify", parents=[common], help="normalise a diagram")
    p.add_argument("file")
    p.add_argument("--strategy", choices=("safe", "full"), default="safe")

    p = sub.add_parser("soundness", parents=[common], help="randomized rule soundness check")
    p.add_argument("rule", choices=RULE_NAMES)
    p.add_argument("--direction", choices=(FORWARD, BACKWARD), default=FORWARD)
    p.add_argument("--samples", type=int, default=200)

    p = sub.add_parser("derivations", parents=[common], help="replay scripted derivations")
    p.add_argument("name", nargs="?", choices=DERIVATION_NAMES)

    p = sub.add_parser("verify", parents=[common], help="run a protocol verifier")
    v = p.add_subparsers(dest="protocol", required=True)
    sdc = v.add_parser("sdc-ghz", parents=[common])
    sdc.add_argument("--n", type=int, help="verify the n-qubit generalisation instead")
    qkd = v.add_parser("qkd-w3", parents=[common])
    qkd.add_argument("--rounds", type=int, default=10000)

    p = sub.add_parser("render", parents=[common], help="emit Graphviz DOT")
    p.add_argument("file")
    return parser


def _cmd_eval(args, cfg: CliConfig) -> int:
    d = _read_diagram(args.file)
    print(format_matrix(evaluate(d, max_qubits=cfg.max_qubits)))
    return PASS


def _cmd_equal(args, cfg: CliConfig) -> int:
    a = evaluate(_read_diagram(args.file_a), max_qubits=cfg.max_qubits)
    b = evaluate(_read_diagram(args.file_b), max_qubits=cfg.max_qubits)
    if a.shape != b.shape:
        print(f"not equal: shapes {a.shape} vs {b.shape}")
        return FAIL
    verdict = equal_up_to_scalar(a, b, cfg.tolerance)
    if verdict.equal:
        scalar = "both zero" if verdict.scalar is None else _format_complex(verdict.scalar)
        print(f"equal up to scalar λ={scalar} (max residual {verdict.max_residual:.3e})")
        return PASS
    print(f"not equal (max residual {verdict.max_residual:.3e})")
    return FAIL


def _cmd_rewrite(args, cfg: CliConfig) -> int:
    d = _read_diagram(args.file)
    rule = get_rule(args.rule, args.direction, strict_scalars=cfg.strict_scalars)
    matches = rule.find_matches(d)
    if not matches:
        print(f"no match for {args.rule} ({args.direction})")
        return FAIL
    out = rule.apply(d, matches[0])
    from .rewrite.simplify import Trace

    trace = Trace()
    trace.record("start", "start", d)
    trace.record(args.rule, matches[0].summary(), out)
    _write_trace(trace, args.trace)
    print(f"# applied {matches[0].summary()}")
    print(serialize_zxg(out), end="")
    return PASS


def _cmd_simplify(args, cfg: CliConfig) -> int:
    d = _read_diagram(args.file)
    out, trace = simplify(
        d, strategy=args.strategy, step_limit=cfg.step_limit,
        strict_scalars=cfg.strict_scalars,
    )
    _write_trace(trace, args.trace)
    print(f"# {len(trace)} steps ({args.strategy})" + (" [truncated]" if trace.truncated else ""))
    print(serialize_zxg(out), end="")
    return PASS


def _cmd_soundness(args, cfg: CliConfig) -> int:
    rule = get_rule(args.rule, args.direction, strict_scalars=cfg.strict_scalars)
    report = check_soundness(rule, samples=args.samples, seed=cfg.seed, tol=cfg.tolerance)
    print(report.render())
    return PASS if report.passed else FAIL


def _cmd_derivations(args, cfg: CliConfig) -> int:
    names = (args.name,) if args.name else DERIVATION_NAMES
    rendered = []
    code = PASS
    for name in names:
        try:
            trace = replay_derivation(name)
        except ReplayError as exc:
            print(f"{name}: FAIL {exc}")
            code = FAIL
            continue
        print(f"{name}: ok ({len(trace)} steps: {', '.join(trace.rules_used())})")
        if args.name:  # a single requested derivation prints its full trace
            print(trace.render(), end="")
        rendered.append(f"derivation {name}\n" + trace.render())
    if args.trace and rendered:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write("\n".join(rendered))
    return code


def _cmd_verify(args, cfg: CliConfig) -> int:
    if args.protocol == "sdc-ghz":
        if args.n is not None:
            report = sdc_n_ghz_verify(args.n, tol=cfg.tolerance)
        else:
            report = sdc_verify_all(tol=cfg.tolerance)
        print(report.render())
        return PASS if report.passed else FAIL
    lemmas = qkd_check_lemmas(tol=cfg.tolerance)
    print(lemmas.render())
    mc = qkd_simulate(args.rounds, seed=cfg.seed)
    print(mc.render())
    return PASS if (lemmas.passed and mc.passed) else FAIL


def _cmd_render(args, cfg: CliConfig) -> int:
    print(to_dot(_read_diagram(args.file)), end="")
    return PASS


_COMMANDS = {
    "eval": _cmd_eval,
    "equal": _cmd_equal,
    "rewrite": _cmd_rewrite,
    "simplify": _cmd_simplify,
    "soundness": _cmd_soundness,
    "derivations": _cmd_derivations,
    "verify": _cmd_verify,
    "render": _cmd_render,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = CliConfig(
        tolerance=args.tol,
        max_qubits=args.max_qubits,
        seed=args.seed,
        step_limit=args.steps,
        strict_scalars=args.strict_scalars,
    )
    try:
        cfg.validate()
        return _COMMANDS[args.command](args, cfg)
    except (DiagramError, ResourceLimitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
