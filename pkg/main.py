import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from dotenv import load_dotenv

from src.calculators.bounds import MAX_LIFTING_DEGREE, BoundCalculator
from src.calculators.indecomposables import IndecomposableCalculator
from src.calculators.verifier import SCOPES, SUITES, Verifier
from src.calculators.zeta import SiegelData, ZetaCalculator, external_data
from src.tools.cfrac import closing_term_expected, convergents, fundamental_unit
from src.tools.codec import ReportCodec
from src.tools.file_operations import FileOperations
from src.tools.ideals import (FracIdeal, class_reps, codifferent_tp_principal, different_codifferent, factor,
                              narrow_class_reps, sigma_ideal)
from src.tools.qfield import field_new
from src.utils.config import Settings, load_settings
from src.utils.errors import DegreeUnsupported, MalformedInput, MissingCoefficient, QuadraticFieldError, UsageError
from src.utils.logger import ActionType, announce, log_computation

load_dotenv()


class CliParser(argparse.ArgumentParser):
    """argparse that raises instead of printing usage and exiting with 2"""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --- argument types ---

def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return value


def rational(text: str) -> Fraction:
    try:
        return ReportCodec.parse_rational(text)
    except MalformedInput:
        raise argparse.ArgumentTypeError(f"expected p/q, got {text!r}")


def ideal_triple(text: str):
    """'a,b,scale' with integers a, b and a rational scale."""
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected a,b,scale, got {text!r}")
    try:
        return int(parts[0]), int(parts[1]), ReportCodec.parse_rational(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a,b,scale, got {text!r}")


def disc_range(text: str):
    lo, sep, hi = text.partition("..")
    try:
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}")
    if not sep or lo > hi:
        raise argparse.ArgumentTypeError(f"expected A..B with A ≤ B, got {text!r}")
    return lo, hi


def build_parser() -> CliParser:
    common = CliParser(add_help=False)
    common.add_argument("--config", help="Fichier key=value de configuration")
    common.add_argument("--coeffs", help="Fichier externe de coefficients b_ℓ(2d)")
    common.add_argument("--workers", type=positive_int, help="Nombre de processus pour scan/verify")
    common.add_argument("--precision", type=positive_int, help="Précision initiale des intervalles (bits)")
    common.add_argument("--quiet", action="store_true", help="Supprime les messages de progression")
    common.add_argument("--save", help="Écrit aussi le document produit dans ce fichier")

    parser = CliParser(prog="quadrank", description="Exact toolkit for real quadratic fields: "
                                                    "indecomposables, κ bounds, ζ_K(−1) and rank bounds")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=CliParser)

    for verb in ("field", "cfrac", "kappa"):
        p = sub.add_parser(verb, parents=[common])
        p.add_argument("D", type=int)

    p = sub.add_parser("indec", parents=[common])
    p.add_argument("D", type=int)
    p.add_argument("--ideal", type=ideal_triple, help="Idéal scale·(Z·a ⊕ Z·(b+ω)) donné comme a,b,scale")

    p = sub.add_parser("zeta", parents=[common])
    p.add_argument("D", type=int)
    p.add_argument("--tol", type=positive_float)
    p.add_argument("--abs-err", type=positive_float)

    p = sub.add_parser("rankbound", parents=[common])
    p.add_argument("--d", type=positive_int, default=2)
    p.add_argument("--disc", type=positive_int, required=True)
    p.add_argument("--rank", type=positive_int, help="Calcule aussi le seuil Δ₀ pour ce rang")

    p = sub.add_parser("lift", parents=[common])
    p.add_argument("--d", type=positive_int, default=2)

    p = sub.add_parser("scan", parents=[common])
    p.add_argument("--d", type=positive_int, default=2)
    p.add_argument("--disc-range", type=disc_range, required=True)
    p.add_argument("--out", choices=("json", "csv"), default="json")

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--scope", choices=sorted(SCOPES), default="quick")
    p.add_argument("--inject-b1", type=rational, help="Remplace b₁(4) par cette valeur (chemin d'échec)")
    p.add_argument("--suite", action="append", choices=[name for name, _, _ in SUITES])
    return parser


# --- coefficient data ---

def siegel_data(settings: Settings, d: int, zeta: Optional[ZetaCalculator] = None) -> SiegelData:
    """External coefficients for d when a file provides them, else b₁(4) derived for d = 2."""
    if settings.coeffs_path:
        try:
            table = external_data(FileOperations.load_coefficients(settings.coeffs_path))
        except FileNotFoundError as e:
            raise MalformedInput(str(e))
        if d in table:
            return table[d]
    if d == 2:
        zeta = zeta or ZetaCalculator(settings.b1_sample_size, settings.precision_bits)
        return zeta.derive()
    raise MissingCoefficient(f"no coefficients b_ℓ({2 * d}) available; pass --coeffs")


# --- verbs ---

def cmd_field(args, settings: Settings) -> Dict:
    K = field_new(args.D)
    unit = fundamental_unit(K)
    different, codifferent = different_codifferent(K)
    tp = codifferent_tp_principal(K)
    return {
        "D": K.D,
        "disc": K.disc,
        "omega": ReportCodec.element(K.omega),
        "xi": ReportCodec.element(K.xi),
        "trace_omega": K.trace_omega,
        "norm_omega": K.norm_omega,
        "fundamental_unit": ReportCodec.element(unit.epsilon),
        "unit_norm": unit.norm,
        "eps_plus": ReportCodec.element(unit.eps_plus),
        "class_number": len(class_reps(K)),
        "narrow_class_number": len(narrow_class_reps(K)),
        "different": ReportCodec.ideal(different),
        "different_factorization": ReportCodec.factorization(factor(different)),
        "different_sigma": sigma_ideal(different),
        "codifferent": ReportCodec.ideal(codifferent),
        "codifferent_tp_generator": ReportCodec.element(tp) if tp is not None else None,
    }


def cmd_cfrac(args, settings: Settings) -> Dict:
    K = field_new(args.D)
    unit = fundamental_unit(K)
    e = unit.expansion
    return {
        "D": K.D,
        "xi": ReportCodec.element(K.xi),
        "u0": e.u0,
        "period": list(e.period),
        "s": e.s,
        "closing_term_expected": closing_term_expected(K, e.u0),
        "convergents": [{"i": c.index, "p": c.p, "q": c.q, "alpha": ReportCodec.element(c.alpha)}
                        for c in convergents(e, e.s - 1)],
        "epsilon": ReportCodec.element(unit.epsilon),
        "norm": unit.norm,
        "eps_plus": ReportCodec.element(unit.eps_plus),
    }


def cmd_indec(args, settings: Settings) -> Dict:
    K = field_new(args.D)
    calculator = IndecomposableCalculator()
    if args.ideal is None:
        return calculator.analyze_field(K)
    a, b, scale = args.ideal
    return calculator.analyze_ideal(FracIdeal(K, scale, a, b))


def cmd_kappa(args, settings: Settings) -> Dict:
    return IndecomposableCalculator().kappa(field_new(args.D))


def cmd_zeta(args, settings: Settings) -> Dict:
    K = field_new(args.D)
    calculator = ZetaCalculator(settings.b1_sample_size, settings.precision_bits)
    data = siegel_data(settings, 2, calculator)
    return calculator.report(K, settings.fe_tol, settings.zeta_abs_err, data).to_dict()


def cmd_rankbound(args, settings: Settings) -> Dict:
    data = siegel_data(settings, args.d)
    return BoundCalculator(settings.precision_bits).rankbound(args.disc, args.d, data, args.rank)


def cmd_lift(args, settings: Settings) -> Dict:
    # past the admissible degree the bound itself reports the error
    data = siegel_data(settings, args.d) if args.d <= MAX_LIFTING_DEGREE else None
    return BoundCalculator(settings.precision_bits).lift(args.d, data)


def cmd_scan(args, settings: Settings) -> List[Dict]:
    if args.d != 2:
        raise DegreeUnsupported(f"the discriminant scan runs over real quadratic fields, not d = {args.d}")
    lo, hi = args.disc_range
    return BoundCalculator(settings.precision_bits).scan(lo, hi, siegel_data(settings, 2), settings.workers)


def cmd_verify(args, settings: Settings) -> Dict:
    return Verifier(settings, args.inject_b1).run(args.scope, args.suite)


COMMANDS = {
    "field": cmd_field,
    "cfrac": cmd_cfrac,
    "indec": cmd_indec,
    "kappa": cmd_kappa,
    "zeta": cmd_zeta,
    "rankbound": cmd_rankbound,
    "lift": cmd_lift,
    "scan": cmd_scan,
    "verify": cmd_verify,
}


def render(document, args) -> str:
    if args.verb == "scan":
        return FileOperations.render_table(document, args.out)
    return json.dumps(document, indent=2, ensure_ascii=False, default=str)


def emit(text: str, save: Optional[str] = None):
    print(text)
    if save:
        FileOperations.write_file(save, text if text.endswith("\n") else text + "\n")


def run(argv: List[str]) -> int:
    """Parse argv, run one verb, print its document; returns the exit code."""
    quiet_was = os.environ.get("QUADRANK_QUIET")
    try:
        args = build_parser().parse_args(argv)
        if args.quiet:
            os.environ["QUADRANK_QUIET"] = "1"
        settings = load_settings(args.config).with_overrides(
            workers=args.workers,
            precision_bits=args.precision,
            coeffs_path=args.coeffs,
            fe_tol=getattr(args, "tol", None),
            zeta_abs_err=getattr(args, "abs_err", None),
        )
        os.environ["QUADRANK_LOG_FILE"] = settings.log_file

        document = COMMANDS[args.verb](args, settings)
        emit(render(document, args), args.save)

        if args.verb == "verify" and not document["passed"]:
            announce("❌ Au moins une suite de vérification a échoué", "error")
            return 1
        return 0
    except UsageError as e:
        emit(json.dumps(e.to_dict(), ensure_ascii=False))
        return 2
    except QuadraticFieldError as e:
        emit(json.dumps(e.to_dict(), ensure_ascii=False))
        log_computation(
            component="CLI",
            action=ActionType.EVALUATION,
            details={"inputs": {"argv": list(argv)}, "result": e.to_dict()},
            status="FAILURE",
        )
        return 1
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else 0
    finally:
        if quiet_was is None:
            os.environ.pop("QUADRANK_QUIET", None)
        else:
            os.environ["QUADRANK_QUIET"] = quiet_was


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
