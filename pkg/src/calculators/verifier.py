"""
Cross-check suites: every module against an independent oracle or an
invariant it must satisfy, with a counterexample payload on failure.
"""
import random
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from mpmath import iv
from sympy import divisor_sigma

from src.calculators.bounds import (B_of, cap_C, count_short_vectors, counting_chain, fundamental_discriminants_below,
                                    g_bound, IntGram, lifting_disc_bound, main_rhs, min_codifferent_trace,
                                    MAX_LIFTING_DEGREE, robin_bound, theorem_bound)
from src.calculators.indecomposables import (express_as_sum, i_indecomposables, indecomposables_pm,
                                             indecomposables_ring, kappa_field_bound, kappa_is_one,
                                             kappa_upper_cf, kappa_upper_classcount, check_norm_bound,
                                             norm_class_counts)
from src.calculators.zeta import (EXTERNAL, SiegelData, derived_data, external_data, trace_level_codifferent,
                                  functional_eq_check, zeta_minus1_oracle, zeta_minus1_siegel)
from src.tools.arith import r_d, squarefree_range
from src.tools.cfrac import fundamental_unit, partial_quotient_sum
from src.tools.file_operations import FileOperations
from src.tools.ideals import (PLUS_PLUS, FracIdeal, codifferent_tp_principal, different_codifferent,
                              integral_ideals_up_to, narrow_class_reps, reduce_to_window, sigma_ideal,
                              smallest_pm_convergent, window_elements)
from src.tools.intervals import decide, interval_precision
from src.tools.qfield import QuadraticField
from src.utils.config import Settings
from src.utils.errors import InconsistentSample, MalformedInput, QuadraticFieldError
from src.utils.logger import ActionType, announce, log_computation
from src.utils.parallel import parallel_map

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"

# κ(K) as (lower, upper) for fields where both ends are known
KNOWN_KAPPA = {2: (1, 1), 3: (2, 2), 5: (1, 1)}


@dataclass(frozen=True)
class Scope:
    name: str
    siegel_max_D: int
    cf_max_D: int
    fe_max_disc: int
    norm_max_D: int
    norm_max_ideal: int
    norm_samples: int
    kappa_fields: Tuple[int, ...]
    generating_fields: Tuple[int, ...]
    generating_samples: int
    vx_bounds: Tuple[int, ...]
    grams: int
    sigma_max_disc: int
    sigma_max_n: int


SCOPES = {
    "quick": Scope("quick", siegel_max_D=100, cf_max_D=30, fe_max_disc=60,
                   norm_max_D=13, norm_max_ideal=3, norm_samples=10,
                   kappa_fields=(2, 3, 5), generating_fields=(2, 3, 5), generating_samples=10,
                   vx_bounds=(10, 100, 1000), grams=200, sigma_max_disc=200, sigma_max_n=2000),
    "full": Scope("full", siegel_max_D=500, cf_max_D=60, fe_max_disc=200,
                  norm_max_D=60, norm_max_ideal=10, norm_samples=50,
                  kappa_fields=(2, 3, 5, 6, 7, 10, 15), generating_fields=(2, 3, 5, 6, 7, 15), generating_samples=40,
                  vx_bounds=(10, 100, 1000, 10000), grams=1000, sigma_max_disc=1000, sigma_max_n=100000),
}


@dataclass
class SuiteResult:
    name: str
    status: str
    checked: int = 0
    counterexample: Optional[Dict] = None
    seconds: float = 0.0
    details: Dict = dc_field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "status": self.status,
            "checked": self.checked,
            "counterexample": self.counterexample,
            "seconds": round(self.seconds, 3),
            "details": self.details,
        }


@dataclass
class VerifyContext:
    scope: Scope
    settings: Settings
    data: Optional[SiegelData]
    derived: Optional[SiegelData]


def fields_up_to_disc(max_disc: int) -> List[int]:
    return [D for D in squarefree_range(2, max_disc) if QuadraticField(D).disc <= max_disc]


# --- per-field workers (module level so that they pickle) ---

def _siegel_case(args) -> Tuple[int, str, str]:
    D, b1 = args
    K = QuadraticField(D)
    siegel = zeta_minus1_siegel(K, SiegelData(2, (b1,), EXTERNAL))
    return D, str(siegel), str(zeta_minus1_oracle(K))


def _normalized(classes, divisor=None) -> set:
    out = set()
    for c in classes:
        alpha = c.representative if divisor is None else c.representative / divisor
        out.add(reduce_to_window(alpha))
    return out


def _cf_case(D: int) -> Tuple[int, List[str]]:
    K = QuadraticField(D)
    e = fundamental_unit(K).expansion
    issues = []
    ring_cf = _normalized(indecomposables_ring(K))
    O = FracIdeal.unit(K)
    ring_brute = _normalized(i_indecomposables(O))
    if ring_cf != ring_brute:
        issues.append(f"ring: cf {sorted(map(str, ring_cf))} vs brute {sorted(map(str, ring_brute))}")
    if len(ring_cf) != partial_quotient_sum(e, "odd"):
        issues.append(f"ring count {len(ring_cf)} ≠ partial quotient sum {partial_quotient_sum(e, 'odd')}")

    alpha0 = smallest_pm_convergent(K)
    I0 = FracIdeal.principal(alpha0)
    pm_brute_classes = i_indecomposables(I0)
    pm_cf = _normalized(indecomposables_pm(K))
    pm_brute = _normalized(pm_brute_classes, alpha0)
    if pm_cf != pm_brute:
        issues.append(f"(+,-): cf {sorted(map(str, pm_cf))} vs brute/{alpha0} {sorted(map(str, pm_brute))}")
    if len(pm_cf) != partial_quotient_sum(e, "even"):
        issues.append(f"(+,-) count {len(pm_cf)} ≠ partial quotient sum {partial_quotient_sum(e, 'even')}")

    for ideal, count in ((O, len(ring_brute)), (I0, len(pm_brute_classes))):
        cf_bound = kappa_upper_cf(ideal)
        if cf_bound != count:
            issues.append(f"kappa_upper_cf({ideal}) = {cf_bound} but {count} classes")
    return D, issues


def _norm_case(args) -> Tuple[int, int, Optional[Dict]]:
    D, max_norm, samples = args
    K = QuadraticField(D)
    rng = random.Random(D)
    checked = 0
    for I in integral_ideals_up_to(K, max_norm):
        outcome = check_norm_bound(I, samples, rng)
        checked += outcome["checked"]
        if outcome["counterexample"] is not None:
            return D, checked, {"D": D, "ideal": str(I), **outcome}
    return D, checked, None


def _fe_case(args) -> Tuple[int, float, float, bool]:
    D, b1, tol, abs_err, bits = args
    check = functional_eq_check(QuadraticField(D), tol, abs_err, SiegelData(2, (b1,), EXTERNAL), bits)
    return D, check.residual, check.slack, check.passed


def random_gram(seed: int) -> IntGram:
    """MᵀM + I, with one half-integral off-diagonal pair on odd seeds."""
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    M = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
    G = [[Fraction(sum(M[k][i] * M[k][j] for k in range(n)) + (i == j)) for j in range(n)] for i in range(n)]
    if seed % 2 and n > 1:
        k, l = rng.sample(range(n), 2)
        G[k][k] += 1
        G[l][l] += 1
        G[k][l] += Fraction(1, 2)
        G[l][k] += Fraction(1, 2)
    return IntGram(G)


def _gram_case(seed: int) -> Tuple[int, Optional[Dict]]:
    gram = random_gram(seed)
    for i in range(1, 4):
        count, cap = count_short_vectors(gram, i), theorem_bound(gram, i)
        if count > cap:
            return seed, {"seed": seed, "gram": gram.to_list(), "i": i, "count": count, "cap": cap}
    return seed, None


def _sigma_case(D: int) -> Tuple[int, int, Optional[Dict]]:
    K = QuadraticField(D)
    if codifferent_tp_principal(K) is None:
        return D, 0, None
    different, _ = different_codifferent(K)
    checked = 0
    for gamma in trace_level_codifferent(K, 1):
        checked += 1
        value = sigma_ideal(FracIdeal.principal(gamma) * different)
        if not decide(lambda: iv.mpf(value) <= g_bound(1, 2, K.disc), what=f"σ ≤ g at D={D}"):
            return D, checked, {"D": D, "gamma": str(gamma), "sigma": value}
    return D, checked, None


def _robin_chunk(bounds: Tuple[int, int]) -> Tuple[int, Optional[Dict]]:
    lo, hi = bounds
    for n in range(lo, hi):
        value = int(divisor_sigma(n))
        if not decide(lambda: iv.mpf(value) < robin_bound(n), what=f"σ'({n}) < Robin"):
            return hi - lo, {"n": n, "sigma": value}
    return hi - lo, None


# --- suites ---

SuiteOutcome = Tuple[int, Optional[Dict], Dict]


def _first_failure(rows, predicate) -> Optional[Dict]:
    for row in rows:
        found = predicate(row)
        if found is not None:
            return found
    return None


def suite_siegel_oracle(ctx: VerifyContext) -> SuiteOutcome:
    b1 = ctx.data.b(1)
    Ds = squarefree_range(2, ctx.scope.siegel_max_D)
    rows = parallel_map(_siegel_case, [(D, b1) for D in Ds], ctx.settings.workers, chunksize=8)
    bad = _first_failure(rows, lambda r: {"D": r[0], "siegel": r[1], "oracle": r[2]} if r[1] != r[2] else None)
    return len(rows), bad, {"b1": str(b1), "max_D": ctx.scope.siegel_max_D}


def suite_derive_b1(ctx: VerifyContext) -> SuiteOutcome:
    size = ctx.settings.b1_sample_size
    if ctx.derived is None:
        return size, {"error": "InconsistentSample", "sample_size": size}, {}
    return size, None, {"b1": str(ctx.derived.b(1))}


def suite_cf_brute(ctx: VerifyContext) -> SuiteOutcome:
    Ds = squarefree_range(2, ctx.scope.cf_max_D)
    rows = parallel_map(_cf_case, Ds, ctx.settings.workers)
    bad = _first_failure(rows, lambda r: {"D": r[0], "issues": r[1]} if r[1] else None)
    return len(rows), bad, {"max_D": ctx.scope.cf_max_D}


def suite_norm_bound(ctx: VerifyContext) -> SuiteOutcome:
    scope = ctx.scope
    args = [(D, scope.norm_max_ideal, scope.norm_samples) for D in squarefree_range(2, scope.norm_max_D)]
    rows = parallel_map(_norm_case, args, ctx.settings.workers)
    checked = sum(r[1] for r in rows)
    return checked, _first_failure(rows, lambda r: r[2]), {"max_D": scope.norm_max_D, "max_ideal_norm": scope.norm_max_ideal}


def suite_kappa(ctx: VerifyContext) -> SuiteOutcome:
    checked = 0
    for D in ctx.scope.kappa_fields:
        K = QuadraticField(D)
        bound = kappa_field_bound(K)
        checked += 1
        if bound.lower > bound.upper:
            return checked, {"D": D, "lower": bound.lower, "upper": bound.upper}, {}
        expected = KNOWN_KAPPA.get(D)
        if expected is not None and (bound.lower, bound.upper) != expected:
            return checked, {"D": D, "got": [bound.lower, bound.upper], "expected": list(expected)}, {}
        # κ depends on the narrow class only
        lam = fundamental_unit(K).eps_plus + 1
        for R in narrow_class_reps(K):
            J = R * lam
            checked += 1
            if kappa_upper_classcount(R) != kappa_upper_classcount(J) or kappa_is_one(R) != kappa_is_one(J):
                return checked, {"D": D, "ideal": str(R), "twin": str(J)}, {}
    return checked, None, {"fields": list(ctx.scope.kappa_fields)}


def suite_generating(ctx: VerifyContext) -> SuiteOutcome:
    checked = 0
    rng = random.Random(0)
    for D in ctx.scope.generating_fields:
        K = QuadraticField(D)
        for I in narrow_class_reps(K):
            classes = i_indecomposables(I)
            # Tr(w) ≤ 30 forces N(w) ≤ 225
            pool = [w for w in window_elements(I, 225, PLUS_PLUS) if w.trace() <= 30]
            for w in rng.sample(pool, min(ctx.scope.generating_samples, len(pool))):
                checked += 1
                terms = express_as_sum(w, I, classes)
                total = sum((rep * mult for rep, mult in terms), K.zero)
                if total != w or not all(m.is_totally_positive() and m.is_integral() for _, m in terms):
                    return checked, {"D": D, "ideal": str(I), "w": str(w)}, {}
    return checked, None, {"fields": list(ctx.scope.generating_fields)}


def suite_vx_growth(ctx: VerifyContext) -> SuiteOutcome:
    bounds = ctx.scope.vx_bounds
    table = {}
    for D in (2, 3, 5):
        counts = norm_class_counts(QuadraticField(D), list(bounds))
        table[str(D)] = {str(X): counts[X] for X in bounds}
        for X, Y in zip(bounds, bounds[1:]):
            if counts[Y] < counts[X] or counts[Y] * X * X >= counts[X] * Y * Y:
                return len(table), {"D": D, "X": X, "Y": Y, "counts": table[str(D)]}, {}
    return len(table), None, {"counts": table}


def suite_functional_equation(ctx: VerifyContext) -> SuiteOutcome:
    s = ctx.settings
    args = [(D, ctx.data.b(1), s.fe_tol, s.zeta_abs_err, s.precision_bits) for D in fields_up_to_disc(ctx.scope.fe_max_disc)]
    rows = parallel_map(_fe_case, args, s.workers)
    bad = _first_failure(rows, lambda r: None if r[3] else {"D": r[0], "residual": r[1], "slack": r[2], "tol": s.fe_tol})
    worst = max((r[1] + r[2] for r in rows), default=0.0)
    return len(rows), bad, {"max_disc": ctx.scope.fe_max_disc, "worst_residual_plus_slack": worst}


def suite_short_vectors(ctx: VerifyContext) -> SuiteOutcome:
    rows = parallel_map(_gram_case, range(ctx.scope.grams), ctx.settings.workers, chunksize=16)
    return len(rows), _first_failure(rows, lambda r: r[1]), {"grams": ctx.scope.grams}


def suite_sigma_domination(ctx: VerifyContext) -> SuiteOutcome:
    scope, workers = ctx.scope, ctx.settings.workers
    rows = parallel_map(_sigma_case, fields_up_to_disc(scope.sigma_max_disc), workers)
    bad = _first_failure(rows, lambda r: r[2])
    checked = sum(r[1] for r in rows)
    if bad is None:
        step = 500
        chunks = [(lo, min(lo + step, scope.sigma_max_n + 1)) for lo in range(3, scope.sigma_max_n + 1, step)]
        sampled = parallel_map(_robin_chunk, chunks, workers)
        checked += sum(r[0] for r in sampled)
        bad = _first_failure(sampled, lambda r: r[1])
    return checked, bad, {"max_disc": scope.sigma_max_disc, "max_n": scope.sigma_max_n}


def suite_lifting(ctx: VerifyContext) -> SuiteOutcome:
    with interval_precision(ctx.settings.precision_bits):
        bound = lifting_disc_bound(2, ctx.data)
        admissible = fundamental_discriminants_below(bound)
    details = {"bound": [float(bound.a), float(bound.b)], "admissible": admissible}
    if admissible != [5]:
        return 1, {"admissible": admissible, "expected": [5]}, details
    trace = min_codifferent_trace(QuadraticField(5))
    if trace != r_d(2):
        return 2, {"D": 5, "min_trace": trace, "r_d": r_d(2)}, details
    return 2, None, details


def suite_counting_chain(ctx: VerifyContext) -> SuiteOutcome:
    K5, K2 = QuadraticField(5), QuadraticField(2)
    one5, one2 = K5.one, K2.one
    cases = [
        (K5, [[one5]], K5.omega / K5.sqrt_disc),
        (K5, [[one5 if i == j else K5.zero for j in range(3)] for i in range(3)], K5.omega / K5.sqrt_disc),
        (K2, [[one2]], (K2.element(2, 1)) / 4),
    ]
    for D in squarefree_range(2, ctx.scope.cf_max_D):
        K = QuadraticField(D)
        delta = codifferent_tp_principal(K)
        if delta is not None:
            cases.append((K, [[K.one]], delta))
    for n, (K, gram, delta) in enumerate(cases, start=1):
        chain = counting_chain(K, gram, delta)
        if not chain["holds"]:
            return n, {"D": K.D, "rank": len(gram), "delta": str(delta), **chain}, {}
    with interval_precision(ctx.settings.precision_bits):
        rhs = main_rhs(5, 2, ctx.data)
        lhs = cap_C(3 * 2, r_d(2))
        if not (iv.mpf(lhs) > rhs):
            return len(cases), {"D": 5, "cap": lhs, "rhs": [float(rhs.a), float(rhs.b)]}, {}
    return len(cases), None, {"cases": len(cases)}


def suite_external_coefficients(ctx: VerifyContext) -> Optional[SuiteOutcome]:
    path = ctx.settings.coeffs_path
    if not path:
        return None
    try:
        table = external_data(FileOperations.load_coefficients(path))
    except (FileNotFoundError, QuadraticFieldError) as e:
        return 0, {"file": path, "error": str(e)}, {}
    checked = 0
    for d, data in sorted(table.items()):
        checked += 1
        try:
            B_of(d, data)
            if d <= MAX_LIFTING_DEGREE:
                lifting_disc_bound(d, data)
        except QuadraticFieldError as e:
            return checked, {"d": d, "error": e.to_dict()}, {}
        if d == 2 and ctx.derived is not None and data.coeffs != ctx.derived.coeffs:
            return checked, {"d": 2, "file": str(data.b(1)), "derived": str(ctx.derived.b(1))}, {}
    return checked, None, {"file": path, "degrees": sorted(table)}


SUITES: List[Tuple[str, Callable[[VerifyContext], Optional[SuiteOutcome]], bool]] = [
    ("siegel_oracle", suite_siegel_oracle, True),
    ("derive_b1", suite_derive_b1, False),
    ("cf_brute", suite_cf_brute, False),
    ("norm_bound", suite_norm_bound, False),
    ("kappa", suite_kappa, False),
    ("generating", suite_generating, False),
    ("vx_growth", suite_vx_growth, False),
    ("functional_equation", suite_functional_equation, True),
    ("short_vectors", suite_short_vectors, False),
    ("sigma_domination", suite_sigma_domination, False),
    ("lifting", suite_lifting, True),
    ("counting_chain", suite_counting_chain, True),
    ("external_coefficients", suite_external_coefficients, False),
]


class Verifier:
    """Runs every cross-check suite and reports pass/fail/skipped per suite"""

    def __init__(self, settings: Settings, inject_b1: Optional[Fraction] = None):
        self.name = "Verifier"
        self.settings = settings
        self.inject_b1 = inject_b1
        announce(f"✅ {self.name} initialisé ({settings.workers} worker(s))")

    def _coefficients(self) -> Tuple[Optional[SiegelData], Optional[SiegelData]]:
        try:
            derived = derived_data(self.settings.b1_sample_size)
        except InconsistentSample:
            derived = None
        if self.inject_b1 is not None:
            return SiegelData(2, (self.inject_b1,), EXTERNAL), derived
        return derived, derived

    def run(self, scope_name: str = "quick", only: Optional[List[str]] = None) -> Dict:
        if scope_name not in SCOPES:
            raise MalformedInput(f"unknown scope {scope_name!r}; expected one of {sorted(SCOPES)}")
        data, derived = self._coefficients()
        ctx = VerifyContext(SCOPES[scope_name], self.settings, data, derived)
        results = []
        for name, suite, needs_data in SUITES:
            if only and name not in only:
                continue
            results.append(self._run_suite(name, suite, needs_data, ctx))
        report = {
            "scope": scope_name,
            "coefficients": data.provenance if data else None,
            "injected_b1": str(self.inject_b1) if self.inject_b1 is not None else None,
            "passed": all(r.status != FAIL for r in results),
            "suites": [r.to_dict() for r in results],
        }
        return report

    def _run_suite(self, name: str, suite, needs_data: bool, ctx: VerifyContext) -> SuiteResult:
        announce(f"🧪 Suite {name} ({ctx.scope.name})...")
        start = time.perf_counter()
        if needs_data and ctx.data is None:
            result = SuiteResult(name, FAIL, counterexample={"error": "b₁(4) unavailable"})
        else:
            try:
                outcome = suite(ctx)
            except QuadraticFieldError as e:
                outcome = (0, {"error": e.to_dict()}, {})
            if outcome is None:
                result = SuiteResult(name, SKIPPED)
            else:
                checked, counterexample, details = outcome
                status = PASS if counterexample is None else FAIL
                result = SuiteResult(name, status, checked, counterexample, details=details)
        result.seconds = time.perf_counter() - start

        level = {PASS: "ok", FAIL: "error", SKIPPED: "warn"}[result.status]
        announce(f"   {result.status.upper()} {name}: {result.checked} vérifiés en {result.seconds:.1f}s", level)
        log_computation(
            component=self.name,
            action=ActionType.VERIFICATION,
            details={"inputs": {"suite": name, "scope": ctx.scope.name},
                     "result": {"status": result.status, "checked": result.checked,
                                "counterexample": result.counterexample}},
            status={PASS: "SUCCESS", FAIL: "FAILURE", SKIPPED: "SKIPPED"}[result.status],
        )
        return result
