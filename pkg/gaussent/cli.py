"""Command-line front end.

Exit codes: 0 on success, 1 on domain errors (error name on stderr), 2 on
malformed input or usage errors.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from pydantic import ValidationError
from rich.console import Console

from gaussent.config import get_settings
from gaussent.exceptions import GaussentError, NotSymmetric
from gaussent.log import setup_logging
from gaussent.multimode import service as multimode
from gaussent.multimode.schemas import BisymmetricSpec, GhzTypeSpec
from gaussent.phasespace import service as phasespace
from gaussent.phasespace.schemas import Bipartition, CovarianceMatrix
from gaussent.reports import AnalysisReport, cm_digest, cm_to_json, read_cm, to_csv
from gaussent.sharing import service as sharing
from gaussent.teleport import service as teleport
from gaussent.twomode import service as twomode
from gaussent.version import __version__

logger = logging.getLogger(__name__)


class UsageError(Exception):
    pass


def _labels(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated mode labels, got {text!r}") from exc


def _matrix(cm: CovarianceMatrix) -> list[list[float]]:
    return cm.matrix.tolist()


def _report(command: str, results: dict, cm: Optional[CovarianceMatrix] = None, warnings=None) -> str:
    return AnalysisReport(
        input_digest=cm_digest(cm) if cm is not None else None,
        command=command,
        results=results,
        warnings=warnings or [],
    ).to_json()


# ==================== phasespace / twomode ====================

def cmd_validate(args) -> str:
    cm = read_cm(args.cm)
    report = phasespace.validate_cm(cm)
    return _report("validate", report.model_dump(), cm)


def cmd_spectrum(args) -> str:
    cm = read_cm(args.cm)
    results = {"spectrum": phasespace.symplectic_spectrum(cm).values}
    if args.side_a:
        bp = Bipartition.split(cm.n_modes, args.side_a)
        results["transposed_spectrum"] = phasespace.transposed_spectrum(cm, bp).values
        results["log_negativity"] = phasespace.log_negativity(cm, bp)
    else:
        phasespace.require_physical(cm)
        results["purity"] = phasespace.purity(cm)
        results["entropy"] = phasespace.entropy(cm)
    return _report("spectrum", results, cm)


def cmd_analyze_two_mode(args) -> str:
    cm = read_cm(args.cm)
    inv = twomode.invariants_from_cm(cm)
    warnings = []
    results = {
        "invariants": inv.model_dump(),
        "standard_form": twomode.standard_form_from_invariants(inv).model_dump(),
        "ppt": twomode.ppt_eigenvalues(inv).model_dump(),
        "log_negativity": twomode.log_negativity_two_mode(inv),
        "class": twomode.classify_by_purities(inv.mu1, inv.mu2, inv.mu).value,
    }
    try:
        results["eof"] = twomode.eof_symmetric(inv)
    except NotSymmetric:
        warnings.append("entanglement of formation skipped: state is not symmetric")
    return _report("analyze-two-mode", results, cm, warnings)


def cmd_classify(args) -> str:
    label = twomode.classify_by_purities(args.mu1, args.mu2, args.mu)
    return _report("classify", {"mu1": args.mu1, "mu2": args.mu2, "mu": args.mu, "class": label.value})


def cmd_extremal(args) -> str:
    if args.scan:
        rows = twomode.entanglement_bounds_scan(args.mu1, args.mu2, args.steps)
        return to_csv(
            ["mu", "e_min", "e_max", "class"],
            [(row.mu, row.e_min, row.e_max, row.entanglement_class) for row in rows],
        )
    if args.mu is None:
        raise UsageError("extremal needs --mu unless --scan is given")
    report = twomode.extremal_entanglement(args.mu1, args.mu2, args.mu)
    results = report.model_dump(mode="json")
    results["gmems"] = twomode.gmems(args.mu1, args.mu2, args.mu).model_dump()
    results["glems"] = twomode.glems(args.mu1, args.mu2, args.mu).model_dump()
    return _report("extremal", results)


# ==================== multimode ====================

def cmd_make(args) -> str:
    kind = args.kind
    if kind == "vacuum":
        cm = phasespace.vacuum(args.modes)
    elif kind == "thermal":
        cm = phasespace.thermal(args.nu, args.modes)
    elif kind == "tmsv":
        cm = phasespace.two_mode_squeezed_vacuum(args.squeezing or 0.0)
    elif kind == "ghz":
        cm = multimode.ghz_type_state(GhzTypeSpec(
            n_modes=args.modes,
            squeezing=args.squeezing,
            local_mixedness=args.mixedness,
            thermal_noise=args.noise,
        ))
    elif kind == "traced":
        if args.total is None:
            raise UsageError("make traced needs --total")
        cm = multimode.traced_symmetric_state(args.total, args.modes, args.squeezing or 0.0, args.noise)
    elif kind == "bisymmetric":
        if not args.blocks:
            raise UsageError("make bisymmetric needs --blocks FILE")
        spec = BisymmetricSpec.model_validate(json.loads(Path(args.blocks).read_text(encoding="utf-8")))
        cm = multimode.assemble_bisymmetric(spec)
    else:
        raise UsageError(f"unknown state kind {kind!r}")
    return cm_to_json(cm)


def cmd_localize(args) -> str:
    cm = read_cm(args.cm)
    result = multimode.unitary_localization(cm, args.split)
    degeneracy = multimode.spectral_degeneracy(cm, args.split)
    bp = Bipartition.split(cm.n_modes, range(1, args.split + 1))
    results = {
        "split": [args.split, cm.n_modes - args.split],
        "log_negativity": phasespace.log_negativity(cm, bp),
        "log_negativity_localized": multimode.equivalent_pair_log_negativity(result),
        "eq_two_mode": _matrix(result.eq_two_mode),
        "residual_modes": [_matrix(mode) for mode in result.residual_modes],
        "cross_residual": result.cross_residual,
        "degeneracy": degeneracy.model_dump(),
    }
    return _report("localize", results, cm)


def cmd_block_scan(args) -> str:
    if args.cm:
        cm = read_cm(args.cm)
    elif args.modes:
        spec = GhzTypeSpec(
            n_modes=args.modes + args.traced,
            squeezing=args.squeezing,
            local_mixedness=args.mixedness,
        )
        cm = phasespace.partial_trace(multimode.ghz_type_state(spec), range(1, args.modes + 1))
    else:
        raise UsageError("block-scan needs --cm FILE or --modes N")
    return to_csv(["k", "log_negativity"], multimode.block_hierarchy(cm))


# ==================== sharing ====================

def cmd_contangle(args) -> str:
    cm = read_cm(args.cm)
    value = sharing.contangle_one_vs_rest(cm, args.focus, args.seed)
    warnings = [] if value.converged else ["optimizer restarts disagree; value is the best found"]
    return _report("contangle", {"focus": args.focus, "contangle": value.model_dump()}, cm, warnings)


def cmd_monogamy(args) -> str:
    cm = read_cm(args.cm)
    foci = [args.focus] if args.focus else range(1, cm.n_modes + 1)
    reports = [sharing.monogamy_check(cm, focus, args.seed) for focus in foci]
    results = {
        "per_focus": [report.model_dump() for report in reports],
        "minimum": min(report.residual for report in reports),
    }
    return _report("monogamy", results, cm)


def cmd_promiscuity_scan(args) -> str:
    rows = []
    for b in np.linspace(args.b_min, args.b_max, args.steps):
        report = sharing.promiscuity_report(float(b), args.seed)
        rows.append((report.b, report.pairwise_contangle, report.residual))
    return to_csv(["b", "pairwise", "residual"], rows)


# ==================== teleport ====================

def cmd_teleport(args) -> str:
    if args.action == "optimize":
        result = teleport.optimal_fidelity(args.parties, args.rbar, args.noise)
        return _report("teleport optimize", result.model_dump())
    rows = teleport.fidelity_sweep(args.parties_max, args.rbar, args.noise)
    return to_csv(
        ["n", "fidelity_opt", "e_t", "fidelity_equal"],
        [(row.n, row.fidelity_opt, row.e_t, row.fidelity_equal) for row in rows],
    )


# ==================== Parser ====================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the result to FILE instead of stdout")
    common.add_argument("--verbose", "-v", action="store_true", help="log progress on stderr")

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=None, help="seed of the roof optimizer restarts")

    parser = argparse.ArgumentParser(prog="gaussent", description="Entanglement analysis of Gaussian states.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check symmetry and physicality")
    p.add_argument("cm")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("spectrum", parents=[common], help="symplectic spectrum")
    p.add_argument("cm")
    p.add_argument("--side-a", type=_labels, help="transpose with respect to this side, e.g. 1,2")
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("analyze-two-mode", parents=[common], help="invariants and entanglement of a two-mode state")
    p.add_argument("cm")
    p.set_defaults(handler=cmd_analyze_two_mode)

    for name, handler in (("classify", cmd_classify), ("extremal", cmd_extremal)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--mu1", type=float, required=True)
        p.add_argument("--mu2", type=float, required=True)
        p.add_argument("--mu", type=float, required=name == "classify")
        if name == "extremal":
            p.add_argument("--scan", action="store_true", help="CSV over the physical range of mu")
            p.add_argument("--steps", type=int, default=50)
        p.set_defaults(handler=handler)

    p = sub.add_parser("make", parents=[common], help="write a covariance matrix document")
    p.add_argument("kind", choices=["vacuum", "thermal", "tmsv", "ghz", "traced", "bisymmetric"])
    p.add_argument("--modes", type=int, default=2)
    p.add_argument("--total", type=int, help="modes of the pure state traced down by 'traced'")
    p.add_argument("--squeezing", type=float)
    p.add_argument("--mixedness", type=float, help="local mixedness b instead of --squeezing")
    p.add_argument("--noise", type=float, default=1.0)
    p.add_argument("--nu", type=float, default=1.0)
    p.add_argument("--blocks", help="JSON file with m, n, alpha, beta, gamma, eps_alpha, eps_beta")
    p.set_defaults(handler=cmd_make)

    p = sub.add_parser("localize", parents=[common], help="concentrate M|N entanglement on two modes")
    p.add_argument("cm")
    p.add_argument("--split", type=int, required=True)
    p.set_defaults(handler=cmd_localize)

    p = sub.add_parser("block-scan", parents=[common], help="CSV of k|rest log-negativity")
    p.add_argument("--cm")
    p.add_argument("--modes", type=int)
    p.add_argument("--squeezing", type=float)
    p.add_argument("--mixedness", type=float)
    p.add_argument("--traced", type=int, default=0, help="extra modes traced out of the pure state")
    p.set_defaults(handler=cmd_block_scan)

    p = sub.add_parser("contangle", parents=[common, seeded], help="one-vs-rest contangle")
    p.add_argument("cm")
    p.add_argument("--focus", type=int, default=1)
    p.set_defaults(handler=cmd_contangle)

    p = sub.add_parser("monogamy", parents=[common, seeded], help="sharing inequality residuals")
    p.add_argument("cm")
    p.add_argument("--focus", type=int)
    p.set_defaults(handler=cmd_monogamy)

    p = sub.add_parser("promiscuity-scan", parents=[common, seeded], help="CSV over GHZ-type states")
    p.add_argument("--b-min", type=float, default=1.0)
    p.add_argument("--b-max", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=11)
    p.set_defaults(handler=cmd_promiscuity_scan)

    p = sub.add_parser("teleport", parents=[common], help="teleportation-network fidelities")
    p.add_argument("action", choices=["optimize", "sweep"])
    p.add_argument("--parties", type=int, default=2)
    p.add_argument("--parties-max", type=int, default=50)
    p.add_argument("--rbar", type=float, required=True)
    p.add_argument("--noise", type=float, default=1.0)
    p.set_defaults(handler=cmd_teleport)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    err = Console(stderr=True, soft_wrap=True)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    setup_logging("DEBUG" if args.verbose else get_settings().log_level)
    try:
        output = args.handler(args)
    except GaussentError as exc:
        err.print(f"{exc.name}: {exc}", style="red", markup=False, highlight=False)
        return 1
    except UsageError as exc:
        err.print(f"usage error: {exc}", markup=False, highlight=False)
        parser.print_usage(sys.stderr)
        return 2
    except (OSError, ValueError, ValidationError) as exc:
        err.print(f"malformed input: {exc}", style="red", markup=False, highlight=False)
        return 2

    if args.output:
        Path(args.output).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return 0


def main() -> None:
    sys.exit(run())
