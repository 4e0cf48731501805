"""Command-line entry point: one subcommand per construction or verification."""
import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import ValidationError

from .config import settings
from .errors import CheckFailed, QkzForgeError, UsageError
from .field import ParameterSet
from .hecke import apply_Y, check_hecke_relations
from .klbasis import KLType, kl_vector, never_reached, verify_kl
from .koornwinder import koornwinder_for
from .laurent import order_key
from .qkz import (
    QkzState,
    check_action_lemmas,
    check_e_form,
    check_factorized,
    check_koornwinder_components,
    check_one_boundary_eigen,
    check_one_boundary_propagation,
    check_reduced,
    check_scattering,
    check_specialization_lemmas,
    check_tau_vanishing,
    extreme_component,
    minimal_closed_form,
    proportional,
    solve,
)
from .report import Report, as_models, failures
from .schemas import (
    GraphModel,
    KLVectorModel,
    KoornwinderModel,
    LaurentPolyModel,
    QkzStateModel,
    ReportModel,
    RunConfig,
)
from .tlrep import check_tl_relations, check_ybe_reflection
from .weyl import (
    ONE_BOUNDARY,
    TWO_BOUNDARY,
    admissible_in_orbit,
    all_strings,
    build_gamma,
    build_gamma_prime,
    check_graph_iso,
    count_edges,
    edge_recurrence,
    families,
    nu,
    specialization_pair,
)

logger = logging.getLogger(__name__)

COMMANDS = ("relations", "ybe", "kl", "admissible", "koornwinder", "qkz-solve", "qkz-verify", "minimal-form")
_CASES = {"one": ONE_BOUNDARY, "one-boundary": ONE_BOUNDARY, "two": TWO_BOUNDARY, "two-boundary": TWO_BOUNDARY}
_FAMILY_KEYS = {"nu": None, "xi0": "xi0", "xi1": "xi1", "xiplus": "xi+"}

Outcome = Tuple[Report, Optional[dict]]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkz-forge",
        description="Exact construction and verification of boundary qKZ solutions.",
    )
    parser.add_argument("--version", action="version", version=f"{settings.app_name} {settings.app_version}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--N", type=int, default=2, help="number of sites")
    parser.add_argument("--r", type=int, default=1)
    parser.add_argument("--J", type=int, default=1)
    parser.add_argument("--sign", choices=["+", "-"], default="+")
    parser.add_argument("--basis", default="BII", help="BI:M, BII or BIII")
    parser.add_argument("--M", type=int, default=None, help="q_N = q^M for the BI basis")
    parser.add_argument("--case", choices=sorted(_CASES), default="two")
    parser.add_argument("--omega", choices=["+1", "-1", "1"], default="+1", help="branch of q")
    parser.add_argument("--seed", type=int, default=settings.seed)
    parser.add_argument(
        "--ehat-convention",
        choices=["boundary-param", "uniform-q"],
        default=settings.ehat_convention,
    )
    parser.add_argument("--family", choices=sorted(_FAMILY_KEYS), default="nu")
    parser.add_argument("--graph", action="store_true", help="include the admissibility graph")
    parser.add_argument("--lambda", dest="weight", type=int, nargs="+", default=None)
    parser.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def to_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig.model_validate({
        "command": args.command,
        "N": args.N,
        "r": args.r,
        "J": args.J,
        "sign": args.sign,
        "basis": args.basis,
        "M": args.M,
        "case": _CASES[args.case],
        "omega": int(args.omega),
        "seed": args.seed,
        "ehat_convention": args.ehat_convention,
        "family": args.family,
        "graph": args.graph,
        "weight": args.weight,
        "out": args.out,
        "verbosity": args.verbose,
    })


def configure_logging(verbosity: int):
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, settings.log_level.upper(), logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _kl_type(config: RunConfig) -> KLType:
    return KLType.parse(config.basis, config.M)


def _solve(config: RunConfig) -> QkzState:
    return solve(config.case, config.N, config.r, config.J, config.sign, _kl_type(config), config.omega)


def _relations(config: RunConfig) -> Outcome:
    params = ParameterSet.generic()
    report = check_tl_relations(params, config.N)
    report += check_hecke_relations(params, config.N, seed=config.seed)
    return report, None


def _ybe(config: RunConfig) -> Outcome:
    return check_ybe_reflection(ParameterSet.generic(), config.N), None


def _kl(config: RunConfig) -> Outcome:
    kl_type = _kl_type(config)
    report: Report = []
    vectors = []
    for eps in all_strings(config.N):
        vector = kl_vector(eps, kl_type)
        report += [(f"{eps}:{relation}", holds) for relation, holds in verify_kl(vector)]
        vectors.append(KLVectorModel.model_validate(vector.to_json()).model_dump())
    report += never_reached(ParameterSet.generic(), config.N, kl_type)
    return report, {"vectors": vectors}


def _family_weight(config: RunConfig):
    if config.family == "nu":
        return nu(config.N, config.r, config.J, config.sign)
    weight = families(config.N, config.r, config.J)[_FAMILY_KEYS[config.family]]
    if weight is None:
        raise UsageError(f"family {config.family} needs odd N")
    return weight


def _admissible(config: RunConfig) -> Outcome:
    k, r_prime = specialization_pair(config.case, config.r)
    weight = _family_weight(config)
    graph = build_gamma(weight, k, r_prime)
    admissible = admissible_in_orbit(weight, k, r_prime)
    report: Report = []
    payload: Dict[str, object] = {
        "weight": list(weight),
        "admissible": len(admissible),
        "component": len(graph.vertices),
    }
    if config.case == TWO_BOUNDARY and config.family == "nu":
        prime = build_gamma_prime(config.N)
        report.append(("count=2^N", len(admissible) == 2 ** config.N))
        report.append(("graph-iso", check_graph_iso(graph, prime, config.sign)))
        if config.N >= 2:
            report.append(("edges=D_N", count_edges(prime) == edge_recurrence(config.N)))
    if config.graph:
        payload["graph"] = GraphModel.model_validate(graph.to_json()).model_dump(by_alias=True)
    return report, payload


def _koornwinder(config: RunConfig) -> Outcome:
    weight = tuple(config.weight) if config.weight else _family_weight(config)
    if len(weight) != config.N:
        raise UsageError(f"weight {list(weight)} does not have {config.N} entries")
    frame = "reduced" if config.case == ONE_BOUNDARY else "standard"
    params = ParameterSet.generic(frame)
    e = koornwinder_for(config.case, config.N, config.r, weight)
    report: Report = [("monic", e.poly.extract(weight) == 1)]
    for i, y in enumerate(e.eigenvalues, start=1):
        report.append((f"Y[{i}]E", apply_Y(params, i, e.poly) == e.poly.scale(y)))
    return report, KoornwinderModel.model_validate(e.to_json()).model_dump(by_alias=True)


def _state_payload(state: QkzState) -> dict:
    return QkzStateModel.model_validate(state.to_json()).model_dump()


def _qkz_solve(config: RunConfig) -> Outcome:
    state = _solve(config)
    report = check_factorized(state) + check_e_form(state, config.ehat_convention)
    return report, _state_payload(state)


def _qkz_verify(config: RunConfig) -> Outcome:
    state = _solve(config)
    report = check_factorized(state) + check_e_form(state, config.ehat_convention)
    report += check_reduced(state, config.ehat_convention)
    report += check_tau_vanishing(state)
    report += check_scattering(state)
    report += check_specialization_lemmas(state.spec)
    if state.case == TWO_BOUNDARY:
        report += check_action_lemmas(state)
    else:
        report += check_one_boundary_eigen(state)
        report += check_one_boundary_propagation(state)
    report += check_koornwinder_components(state)
    return report, _state_payload(state)


def _minimal_form(config: RunConfig) -> Outcome:
    state = _solve(config)
    closed = minimal_closed_form(state.params, state.n, state.case)
    shift = 1 if state.case == TWO_BOUNDARY else 0
    expected = tuple(state.n - i + shift for i in range(1, state.n + 1))
    top = max(closed.terms, key=lambda m: (order_key(m), m))
    component = state.component(extreme_component(state.case, state.n))
    report: Report = [
        ("proportional", proportional(component, closed)),
        ("dominant-monomial", top == expected),
    ]
    return report, {"closed_form": LaurentPolyModel.model_validate(closed.to_json()).model_dump()}


HANDLERS: Dict[str, Callable[[RunConfig], Outcome]] = {
    "relations": _relations,
    "ybe": _ybe,
    "kl": _kl,
    "admissible": _admissible,
    "koornwinder": _koornwinder,
    "qkz-solve": _qkz_solve,
    "qkz-verify": _qkz_verify,
    "minimal-form": _minimal_form,
}


def _write(config: RunConfig, document: ReportModel):
    text = document.model_dump_json(by_alias=True, indent=2)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
        logger.info("report written to %s", config.out)
    else:
        sys.stdout.write(text + "\n")


def run(argv: Optional[List[str]] = None) -> int:
    """Parse, dispatch and write the report; return the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        config = to_config(args)
    except ValidationError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 2
    configure_logging(config.verbosity)
    if config.N > settings.max_n:
        print(f"N={config.N} exceeds the configured maximum {settings.max_n}", file=sys.stderr)
        return 2

    try:
        report, payload = HANDLERS[config.command](config)
    except CheckFailed as exc:
        logger.error("%s", exc)
        _write(config, ReportModel(command=config.command, checks=as_models([(exc.relation, False)])))
        return 1
    except QkzForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    _write(config, ReportModel(command=config.command, checks=as_models(report), payload=payload))
    failing = failures(report)
    if failing:
        logger.error("%d check(s) failed, first: %s", len(failing), failing[0])
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
