"""Command-line front end: ``entrolab classical|quantum|holevo|sanov|check``.

Exit codes: 0 success, 1 a check (or printed bound) failed, 2 malformed
input or unknown name, 3 an input violates its invariants, 4 dimension
mismatch.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from . import formats
from .errors import DimensionError, ValidationError
from .formats import FormatError
from .probdist import (
    Distribution,
    Joint2,
    LogBase,
    conditional_entropy,
    joint_entropy,
    marginal,
    mutual_information,
    relative_entropy,
    shannon_entropy,
)
from .propcheck import SUITES, TrialConfig, run_suite, select_checks
from .qentropy import (
    holevo_chi,
    measured_mutual_info,
    quantum_joint_marginals,
    quantum_relative_entropy,
    sanov_confusion_probability,
    subentropy,
    tripartite_entropies,
    von_neumann,
)
from .qlinalg import BipartiteDims

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_MALFORMED = 2
EXIT_INVALID = 3
EXIT_DIMENSION = 4

BOUND_TOL = 1e-9


class UsageError(Exception):
    pass


def fmt(value: float) -> str:
    if math.isinf(value):
        return "inf"
    # keep "-0.000000" out of the output
    text = f"{value:.6f}"
    return "0.000000" if text == "-0.000000" else text


def fmt_probability(value: float) -> str:
    if value == 0.0:
        return "0"
    if value >= 1e-3:
        return f"{value:.6f}"
    mantissa, exponent = f"{value:.4e}".split("e")
    return f"{mantissa}e{int(exponent)}"


def _line(name: str, value: float, unit: str) -> str:
    text = fmt(value)
    return f"{name} = {text}" if text == "inf" else f"{name} = {text} {unit}"


def _read_probs(path, expected):
    obj = formats.probs_from_json(formats.read_json(path))
    if not isinstance(obj, expected):
        raise FormatError(f"{path}: expected a {expected.__name__} array")
    return obj


def _read_state(path):
    return formats.density_from_json(formats.read_json(path))


def cmd_classical(args) -> int:
    unit = LogBase.parse(args.base)
    out = []
    if args.joint:
        j = _read_probs(args.joint, Joint2)
        selective = args.given is not None or args.mutual
        if not selective:
            out += [
                _line("H(A)", shannon_entropy(marginal(j, "A"), unit), unit.unit),
                _line("H(B)", shannon_entropy(marginal(j, "B"), unit), unit.unit),
                _line("H(A,B)", joint_entropy(j, unit), unit.unit),
                _line("H(A|B)", conditional_entropy(j, "B", unit), unit.unit),
                _line("H(B|A)", conditional_entropy(j, "A", unit), unit.unit),
            ]
        elif args.given is not None:
            given = args.given.upper()
            other = "A" if given == "B" else "B"
            out.append(_line(f"H({other}|{given})", conditional_entropy(j, given, unit), unit.unit))
        if not selective or args.mutual:
            out.append(_line("H(A:B)", mutual_information(j, unit), unit.unit))
    if args.relative:
        p = _read_probs(args.relative[0], Distribution)
        q = _read_probs(args.relative[1], Distribution)
        if len(p) != len(q):
            raise DimensionError(f"distributions of length {len(p)} and {len(q)}")
        out.append(_line("H(p||q)", relative_entropy(p, q, unit), unit.unit))
    if not out:
        raise UsageError("nothing to compute: give a joint file and/or --relative P Q")
    print("\n".join(out))
    return EXIT_OK


def _parse_dims(text: str) -> BipartiteDims:
    try:
        sizes = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--dims expects comma-separated integers, got {text!r}") from None
    if len(sizes) not in (2, 3) or min(sizes) < 1:
        raise UsageError(f"--dims expects two or three positive integers, got {text!r}")
    return BipartiteDims(*sizes)


def cmd_quantum(args) -> int:
    unit = LogBase.parse(args.base)
    rho = _read_state(args.state)
    out = [_line("S", von_neumann(rho, unit), unit.unit)]
    if args.dims:
        dims = _parse_dims(args.dims)
        if dims.total != rho.dim:
            raise DimensionError(
                f"--dims {args.dims} multiply to {dims.total}, state has dimension {rho.dim}"
            )
        if dims.dim_c is None:
            e = quantum_joint_marginals(rho, dims, unit)
            out += [
                _line("S(A)", e.s_a, unit.unit),
                _line("S(B)", e.s_b, unit.unit),
                _line("S(A,B)", e.s_ab, unit.unit),
                _line("S(A|B)", e.s_ab - e.s_b, unit.unit),
                _line("S(A:B)", e.s_a + e.s_b - e.s_ab, unit.unit),
            ]
        else:
            t = tripartite_entropies(rho, dims, unit)
            out += [
                _line("S(A)", t.s_a, unit.unit),
                _line("S(B)", t.s_b, unit.unit),
                _line("S(C)", t.s_c, unit.unit),
                _line("S(A,B)", t.s_ab, unit.unit),
                _line("S(B,C)", t.s_bc, unit.unit),
                _line("S(A,B,C)", t.s_abc, unit.unit),
            ]
            holds = t.s_abc + t.s_b <= t.s_ab + t.s_bc + BOUND_TOL
            out.append(
                "S(A,B,C) + S(B) <= S(A,B) + S(B,C): " + ("holds" if holds else "VIOLATED")
            )
    if args.subentropy:
        out.append(_line("Q", subentropy(rho, unit), unit.unit))
    if args.relative:
        sigma = _read_state(args.relative)
        if sigma.dim != rho.dim:
            raise DimensionError(f"states of dimension {rho.dim} and {sigma.dim}")
        out.append(_line("S(rho||sigma)", quantum_relative_entropy(rho, sigma, unit), unit.unit))
    print("\n".join(out))
    return EXIT_OK


def cmd_holevo(args) -> int:
    unit = LogBase.parse(args.base)
    ensemble = formats.ensemble_from_json(formats.read_json(args.ensemble))
    povm = None
    if args.povm:
        povm = formats.povm_from_json(formats.read_json(args.povm))
        if povm.dim != ensemble.dim:
            raise DimensionError(
                f"POVM acts on dimension {povm.dim}, ensemble states have dimension {ensemble.dim}"
            )
    chi = holevo_chi(ensemble, unit)
    h_p = shannon_entropy(ensemble.probs, unit)
    s_rho = von_neumann(ensemble.average(), unit)
    log_dim = unit.from_nats(math.log(ensemble.dim))
    out = [
        _line("chi", chi, unit.unit),
        _line("H(p)", h_p, unit.unit),
        _line("S(rho)", s_rho, unit.unit),
        _line("log dim", log_dim, unit.unit),
    ]
    ok = chi <= h_p + BOUND_TOL and s_rho <= log_dim + BOUND_TOL
    if povm is not None:
        measured = measured_mutual_info(ensemble, povm, unit)
        within = measured <= chi + BOUND_TOL
        ok = ok and within and measured <= s_rho + BOUND_TOL
        relation = "≤" if within else ">"
        out.append(f"measured = {fmt(measured)} {relation} chi ({unit.unit})")
    out.append("bound chain: " + ("holds" if ok else "VIOLATED"))
    print("\n".join(out))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_sanov(args) -> int:
    if args.n < 1:
        raise UsageError(f"--n must be at least 1, got {args.n}")
    rho = _read_state(args.rho)
    sigma = _read_state(args.sigma)
    if rho.dim != sigma.dim:
        raise DimensionError(f"states of dimension {rho.dim} and {sigma.dim}")
    d = quantum_relative_entropy(rho, sigma)
    print(_line("S(rho||sigma)", d, "nats"))
    print(f"P_N = {fmt_probability(sanov_confusion_probability(rho, sigma, args.n))}")
    return EXIT_OK


def _default_seed() -> int:
    raw = os.environ.get("ENTROLAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"ENTROLAB_SEED must be an integer, got {raw!r}") from None


def cmd_check(args) -> int:
    try:
        checks = select_checks(args.suite)
    except KeyError:
        names = ", ".join(SUITES)
        raise UsageError(f"unknown suite or check {args.suite!r} (suites: {names})") from None
    if args.trials is not None and args.trials < 1:
        raise UsageError(f"--trials must be at least 1, got {args.trials}")
    seed = args.seed if args.seed is not None else _default_seed()
    config = TrialConfig(master_seed=seed, trials_per_check=args.trials)
    report = run_suite(config, checks, workers=args.workers)
    for r in report.results:
        status = "PASS" if r.failures == 0 else "FAIL"
        print(f"{status} {r.name} [{r.eq}] trials={r.trials} failures={r.failures} worst={r.worst_violation:.3g}")
    print(f"overall: {'PASS' if report.passed else 'FAIL'} (seed {seed})")
    if args.report:
        formats.write_json(args.report, report.to_json())
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_MALFORMED)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entrolab", description="Classical and quantum entropy calculator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classical", help="Shannon entropies of a two-variable joint")
    p.add_argument("joint", nargs="?", help="JSON file with a 2-D probs array")
    p.add_argument("--given", choices=["A", "B", "a", "b"], help="print only H(other|given)")
    p.add_argument("--mutual", action="store_true", help="print only H(A:B)")
    p.add_argument("--relative", nargs=2, metavar=("P", "Q"), help="relative entropy of two distributions")
    p.add_argument("--base", choices=["bits", "nats"], default="bits")
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("quantum", help="von Neumann entropies of a density matrix")
    p.add_argument("state", help="matrix JSON file")
    p.add_argument("--dims", help="subsystem dimensions dA,dB[,dC]")
    p.add_argument("--base", choices=["bits", "nats"], default="nats")
    p.add_argument("--subentropy", action="store_true")
    p.add_argument("--relative", metavar="SIGMA", help="matrix JSON file of the second state")
    p.set_defaults(func=cmd_quantum)

    p = sub.add_parser("holevo", help="Holevo quantity of an ensemble")
    p.add_argument("ensemble", help="ensemble JSON file")
    p.add_argument("povm", nargs="?", help="optional POVM JSON file")
    p.add_argument("--base", choices=["bits", "nats"], default="nats")
    p.set_defaults(func=cmd_holevo)

    p = sub.add_parser("sanov", help="confusion probability exp(-N S(rho||sigma))")
    p.add_argument("rho")
    p.add_argument("sigma")
    p.add_argument("--n", type=int, required=True, help="number of copies")
    p.set_defaults(func=cmd_sanov)

    p = sub.add_parser("check", help="run the randomized inequality suite")
    p.add_argument("--suite", default="all", help="all, classical, quantum, or a check name")
    p.add_argument("--trials", type=int, help="trials per check (default 1000 classical / 300 quantum)")
    p.add_argument("--seed", type=int, help="master seed (default $ENTROLAB_SEED or 0)")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--workers", type=int, default=1, help="threads used to run checks")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, UsageError) as exc:
        print(f"entrolab: error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except DimensionError as exc:
        print(f"entrolab: dimension mismatch: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except ValidationError as exc:
        detail = f" [{exc.invariant}]" if exc.invariant else ""
        print(f"entrolab: invalid input{detail}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
