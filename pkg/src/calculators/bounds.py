"""
Explicit bounds for the rank of universal quadratic forms.

Real quantities are mpmath intervals evaluated at the ambient `iv.prec`;
a comparison the current precision cannot decide is retried at higher
precision through `decide`.
"""
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import ceil, comb
from typing import Dict, List, Optional, Sequence

from mpmath import iv

from src.calculators.zeta import SiegelData, s_ell, trace_level_codifferent, zeta_minus1_siegel
from src.tools.arith import is_squarefree, r_d
from src.tools.cfrac import fundamental_unit
from src.tools.codec import ReportCodec
from src.tools.ideals import different_codifferent, narrow_class_reps
from src.tools.intervals import (DEFAULT_BITS, decide, imax, imin, interval_precision, midpoint,
                                 rational, to_json)
from src.tools.lattice import count_points, is_positive_definite, leading_minors
from src.tools.qfield import FieldElement, QuadraticField
from src.utils.errors import (DegreeTooLarge, DegreeTooSmall, DomainError, MissingCoefficient,
                              NoCoefficientOfRequiredSign, NotInCodifferent, NotPositiveDefinite)
from src.utils.logger import ActionType, announce, log_computation
from src.utils.parallel import parallel_map

ROBIN_CONSTANT = "0.6483"
MAX_LIFTING_DEGREE = 43


def cap_C(R: int, i: int) -> int:
    """2·binom(R+4i−1, 4i−1) − 1; cap_C(0, i) is taken as 1."""
    if R == 0:
        return 1
    if R < 0 or i < 1:
        raise ValueError("cap_C needs R ≥ 0 and i ≥ 1")
    return 2 * comb(R + 4 * i - 1, 4 * i - 1) - 1


# --- divisor bounds ---

def _robin_expression(x):
    loglog = iv.ln(iv.ln(x))
    return iv.exp(iv.euler) * x * loglog + iv.mpf(ROBIN_CONSTANT) * x / loglog


def robin_bound(n: int):
    """e^γ₀·n·log log n + 0.6483·n/log log n, valid for n ≥ 3."""
    if n < 3:
        raise DomainError(f"Robin's bound needs n ≥ 3, got {n}")
    return _robin_expression(iv.mpf(n))


def g_bound(ell: int, d: int, disc: int):
    x = Fraction(ell ** d * disc, d ** d)
    if x < 3:
        return iv.mpf(4)
    return imax(iv.mpf(4), _robin_expression(rational(x)))


def G_of(disc: int, d: int):
    r = r_d(d)
    if r == 0:
        raise DegreeTooSmall(f"r_d({d}) = 0")
    return imin(*(1 / g_bound(ell, d, disc) for ell in range(1, r + 1)))


def B_of(d: int, data: SiegelData) -> Fraction:
    """min 1/b_ℓ over b_ℓ > 0 for even d, min 1/(−b_ℓ) over b_ℓ < 0 for odd d."""
    if data.d != d:
        raise MissingCoefficient(f"coefficients are for d = {data.d}, not d = {d}")
    wanted = [b for b in data.coeffs if (b > 0 if d % 2 == 0 else b < 0)]
    if not wanted:
        raise NoCoefficientOfRequiredSign(f"no b_ℓ({2 * d}) of the required sign")
    return min(1 / abs(b) for b in wanted)


def main_rhs(disc: int, d: int, data: SiegelData):
    """G(Δ)/(B(d)·2^d) · Δ^{3/2} · (4π)^{−d}."""
    if disc < 1:
        raise DomainError("Δ must be positive")
    D = iv.mpf(disc)
    return G_of(disc, d) / (rational(B_of(d, data)) * 2 ** d) * D * iv.sqrt(D) / (4 * iv.pi) ** d


def _cap_below_rhs(cap: int, disc: int, d: int, data: SiegelData, bits: int) -> bool:
    """Certified cap ≤ main_rhs(Δ)."""
    return decide(lambda: iv.mpf(cap) <= main_rhs(disc, d, data), bits, f"C ≤ rhs at Δ={disc}")


def min_rank_bound(disc: int, d: int, data: SiegelData, bits: int = DEFAULT_BITS) -> int:
    """1 + the largest R ≥ 0 with cap_C(R·d, r_d) ≤ rhs; ranks up to it are impossible."""
    r = r_d(d)
    R = 0
    while _cap_below_rhs(cap_C((R + 1) * d, r), disc, d, data, bits):
        R += 1
    return R + 1


# --- discriminant threshold ---

def _increase_margin(y):
    """0.5·log y·ψ(L) − (e^γ − c/L²) with L = log log y; positive ⇔ y^{3/2}/φ(y) increasing."""
    L = iv.ln(iv.ln(y))
    c = iv.mpf(ROBIN_CONSTANT)
    eg = iv.exp(iv.euler)
    return iv.ln(y) * (eg * L + c / L) / 2 - (eg - c / (L * L))


@lru_cache(maxsize=None)
def certify_growth(step: str = "0.05", tail_start: str = "5.3") -> bool:
    """
    Certify that y ↦ y^{3/2}/φ(y), φ(y) = e^γ·y·log log y + 0.6483·y/log log y,
    is increasing on [3, ∞): interval evaluation on [3, tail_start], and for
    y ≥ tail_start the AM–GM bound log y·√(e^γ·c) > e^γ.
    """
    with interval_precision(DEFAULT_BITS):
        lo, width, end = iv.mpf(3), iv.mpf(step), iv.mpf(tail_start)
        while (lo < end) is not False:
            hi = lo + width
            piece = iv.mpf([lo.a, hi.b])
            if not (_increase_margin(piece) > 0):
                return False
            lo = hi
        eg = iv.exp(iv.euler)
        tail = iv.ln(end) * iv.sqrt(eg * iv.mpf(ROBIN_CONSTANT)) > eg
        # φ ≥ 4 beyond y = 3, so the max{4, ·} in g never switches back
        floor = _robin_expression(iv.mpf(3)) > 4
        return bool(tail) and bool(floor)


def monotonicity_point(d: int) -> int:
    """Smallest Δ with Δ/d^d ≥ 3; beyond it main_rhs is increasing in Δ."""
    if not certify_growth():
        raise ArithmeticError("growth certificate for Δ^{3/2}/g failed")
    return 3 * d ** d


def disc_threshold(d: int, R: int, data: SiegelData, bits: int = DEFAULT_BITS) -> int:
    """Certified Δ₀ such that min_rank_bound(Δ) > R for every Δ > Δ₀."""
    cap = cap_C(R * d, r_d(d))
    lo = monotonicity_point(d)
    if _cap_below_rhs(cap, lo, d, data, bits):
        return lo - 1
    hi = 2 * lo
    while not _cap_below_rhs(cap, hi, d, data, bits):
        lo, hi = hi, 2 * hi
    # invariant: predicate false at lo, true at hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _cap_below_rhs(cap, mid, d, data, bits):
            hi = mid
        else:
            lo = mid
    return hi - 1


# --- lifting bound ---

def lifting_disc_bound(d: int, data: Optional[SiegelData]):
    """|b_{r_d}(2d)·(4π²)^d·d|^{2/3}."""
    if d > MAX_LIFTING_DEGREE:
        raise DegreeTooLarge(f"lifting bound holds for d ≤ {MAX_LIFTING_DEGREE}, got {d}")
    if data is None or data.d != d:
        raise MissingCoefficient(f"b_{r_d(d)}({2 * d}) is not available")
    b = data.b(r_d(d))
    if b == 0:
        raise MissingCoefficient(f"b_{r_d(d)}({2 * d}) is zero")
    base = abs(rational(b) * (4 * iv.pi ** 2) ** d * d)
    return iv.exp(iv.ln(base) * 2 / 3)


def radicand_of(disc: int) -> Optional[int]:
    """D with Δ(Q(√D)) = disc, or None when disc is not a real quadratic discriminant."""
    if disc < 5:
        return None
    if disc % 4 == 1 and is_squarefree(disc):
        return disc
    if disc % 4 == 0 and (disc // 4) % 4 in (2, 3) and is_squarefree(disc // 4):
        return disc // 4
    return None


def fundamental_discriminants_below(bound) -> List[int]:
    """Real quadratic discriminants Δ with Δ < bound (those not certainly above it)."""
    return [disc for disc in range(5, int(ceil(float(bound.b))) + 1)
            if (iv.mpf(disc) < bound) is not False and radicand_of(disc) is not None]


def discriminants_between(lo: int, hi: int) -> List[int]:
    return [disc for disc in range(max(lo, 5), hi + 1) if radicand_of(disc) is not None]


def min_codifferent_trace(field: QuadraticField) -> int:
    ell = 1
    while not trace_level_codifferent(field, ell):
        ell += 1
    return ell


# --- lattices ---

class IntGram:
    """Positive definite Gram matrix with 2G integral (classical iff G integral)."""

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = [[Fraction(x) for x in row] for row in rows]
        n = len(self.rows)
        if any(len(row) != n for row in self.rows):
            raise NotPositiveDefinite("Gram matrix must be square")
        if any(row[i].denominator != 1 for i, row in enumerate(self.rows)) \
                or any((2 * x).denominator != 1 for row in self.rows for x in row):
            raise NotPositiveDefinite("Gram matrix must have integral diagonal and 2G integral")
        if not is_positive_definite(self.rows):
            raise NotPositiveDefinite(f"leading minors {leading_minors(self.rows)} not all positive")

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def is_classical(self) -> bool:
        return all(x.denominator == 1 for row in self.rows for x in row)

    def doubled(self) -> List[List[int]]:
        return [[int(2 * x) for x in row] for row in self.rows]

    def determinant(self) -> Fraction:
        return leading_minors(self.rows)[-1]

    def to_list(self) -> List[List[str]]:
        return [[str(x) for x in row] for row in self.rows]


def count_short_vectors(gram: IntGram, bound: int) -> int:
    """#{v : q(v) ≤ bound}, zero vector included."""
    if gram.is_classical:
        return count_points(gram.rows, bound)
    return count_points(gram.doubled(), 2 * bound)


def theorem_bound(gram: IntGram, i: int) -> int:
    """cap_C(rank, i), applied at 2i after doubling a non-classical Gram."""
    return cap_C(gram.rank, i if gram.is_classical else 2 * i)


def _field_leading_minors(gram: Sequence[Sequence[FieldElement]]) -> List[FieldElement]:
    n = len(gram)
    M = [list(row) for row in gram]
    minors, acc = [], None
    for i in range(n):
        pivot = M[i][i]
        if not pivot:
            minors.append(pivot)
            return minors
        acc = pivot if acc is None else acc * pivot
        minors.append(acc)
        for r in range(i + 1, n):
            factor = M[r][i] / pivot
            for c in range(i, n):
                M[r][c] = M[r][c] - factor * M[i][c]
    return minors


def trace_transfer(field: QuadraticField, gram: Sequence[Sequence[FieldElement]], delta: FieldElement) -> IntGram:
    """The 2R×2R Gram of q(x) = Tr(δ·Q(x)) in the Z-basis (1, ω) of each coordinate."""
    _, codifferent = different_codifferent(field)
    if not codifferent.contains(delta) or not delta.is_totally_positive():
        raise NotInCodifferent(f"{delta} is not a totally positive element of the codifferent")
    R = len(gram)
    if any(len(row) != R for row in gram) or any(gram[i][j] != gram[j][i] for i in range(R) for j in range(R)):
        raise NotPositiveDefinite("Gram matrix over O_K must be square and symmetric")
    if not all(m.is_totally_positive() for m in _field_leading_minors(gram)):
        raise NotPositiveDefinite("Gram matrix over O_K is not totally positive definite")
    basis = (field.one, field.omega)
    rows = [[(delta * basis[k] * basis[l] * gram[i][j]).trace()
             for j in range(R) for l in range(2)]
            for i in range(R) for k in range(2)]
    return IntGram(rows)


def counting_chain(field: QuadraticField, gram, delta: FieldElement) -> Dict:
    """Nonzero counts on both sides of #{w : q(w) ≤ r} ≥ #{γ ∈ O^{∨,+} : Tr γ ≤ r}."""
    r = r_d(2)
    q = trace_transfer(field, gram, delta)
    lhs = count_short_vectors(q, r) - 1
    rhs = sum(len(trace_level_codifferent(field, ell)) for ell in range(1, r + 1))
    return {"lhs": lhs, "rhs": rhs, "cap": theorem_bound(q, r) - 1, "holds": rhs <= lhs <= theorem_bound(q, r) - 1}


def verify_counting_chain(field: QuadraticField, gram, delta: FieldElement) -> bool:
    return counting_chain(field, gram, delta)["holds"]


# --- reports ---

@dataclass
class BoundReport:
    d: int
    disc: int
    r: int
    G: object
    B: Fraction
    rhs: object
    R_min: int
    notes: List[str] = dc_field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "d": self.d,
            "disc": self.disc,
            "r_d": self.r,
            "G": to_json(self.G),
            "B": ReportCodec.rational(self.B),
            "rhs": to_json(self.rhs),
            "R_min": self.R_min,
            "notes": self.notes,
        }


def rank_report(disc: int, d: int, data: SiegelData, bits: int = DEFAULT_BITS) -> BoundReport:
    with interval_precision(bits):
        report = BoundReport(d, disc, r_d(d), G_of(disc, d), B_of(d, data),
                             main_rhs(disc, d, data), min_rank_bound(disc, d, data, bits))
    if report.R_min == 1:
        report.notes.append("no rank is excluded at this discriminant")
    report.notes.append(f"coefficients: {data.provenance}")
    return report


def scan_row(args) -> Dict:
    """One row of the discriminant scan; module level so that it pickles."""
    disc, data, bits = args
    field = QuadraticField(radicand_of(disc))
    with interval_precision(bits):
        rhs = main_rhs(disc, 2, data)
    return {
        "D": field.D,
        "Δ": disc,
        "h⁺": len(narrow_class_reps(field)),
        "N(ε)": fundamental_unit(field).norm,
        "s₁": s_ell(field, 1),
        "ζ(−1)": ReportCodec.rational(zeta_minus1_siegel(field, data)),
        "rhs": midpoint(rhs),
        "R_min": min_rank_bound(disc, 2, data, bits),
    }


class BoundCalculator:
    """Rank bounds, discriminant thresholds and the lifting bound"""

    def __init__(self, bits: int = DEFAULT_BITS):
        self.name = "Bounds"
        self.bits = bits
        announce(f"✅ {self.name} initialisé ({bits} bits)")

    def rankbound(self, disc: int, d: int, data: SiegelData, rank: Optional[int] = None) -> Dict:
        announce(f"🔍 Borne de rang pour Δ={disc}, d={d}...")
        result = rank_report(disc, d, data, self.bits).to_dict()
        if rank is not None:
            threshold = disc_threshold(d, rank, data, self.bits)
            result["threshold"] = {
                "rank": rank,
                "disc0": threshold,
                "monotone_from": monotonicity_point(d),
                "R_min_above": min_rank_bound(threshold + 1, d, data, self.bits),
            }
        self._log({"disc": disc, "d": d, "rank": rank}, {"R_min": result["R_min"]})
        return result

    def lift(self, d: int, data: Optional[SiegelData]) -> Dict:
        with interval_precision(self.bits):
            bound = lifting_disc_bound(d, data)
            admissible = fundamental_discriminants_below(bound) if d == 2 else None
        result = {"d": d, "bound": to_json(bound), "coefficients": data.provenance}
        if admissible is not None:
            result["admissible_discriminants"] = admissible
            result["min_codifferent_trace"] = {
                str(disc): min_codifferent_trace(QuadraticField(radicand_of(disc)))
                for disc in admissible
            }
        self._log({"d": d}, {"bound": result["bound"]})
        return result

    def scan(self, lo: int, hi: int, data: SiegelData, workers: int = 1) -> List[Dict]:
        discs = discriminants_between(lo, hi)
        announce(f"🔍 Balayage de {len(discs)} discriminants dans [{lo}, {hi}] ({workers} worker(s))...")
        rows = parallel_map(scan_row, [(disc, data, self.bits) for disc in discs], workers)
        self._log({"disc_range": [lo, hi], "d": 2}, {"rows": len(rows), "max_R_min": max((r["R_min"] for r in rows), default=None)})
        return rows

    def _log(self, inputs: Dict, result: Dict):
        log_computation(
            component=self.name,
            action=ActionType.EVALUATION,
            details={"inputs": inputs, "result": result},
            status="SUCCESS",
        )
