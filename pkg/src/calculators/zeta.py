"""
ζ_K(−1) through Siegel's trace-level formula, checked against the
generalized Bernoulli number B_{2,χ}, and a certified enclosure of ζ_K(2)
for the functional equation.
"""
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import isqrt, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from mpmath import iv

from src.tools.arith import ceil_div, is_squarefree, kronecker, r_d
from src.tools.codec import ReportCodec
from src.tools.ideals import FracIdeal, different_codifferent, sigma_ideal
from src.tools.intervals import interval_precision, radius, rational, upper
from src.tools.qfield import FieldElement, QuadraticField
from src.utils.errors import DegreeUnsupported, InconsistentSample, MalformedInput
from src.utils.logger import ActionType, announce, log_computation

DERIVED = "derived"
EXTERNAL = "external"


@dataclass(frozen=True)
class SiegelData:
    d: int
    coeffs: Tuple[Fraction, ...]
    provenance: str

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        if self.provenance not in (DERIVED, EXTERNAL):
            raise MalformedInput(f"unknown provenance {self.provenance!r}")
        if len(self.coeffs) != r_d(self.d):
            raise MalformedInput(f"d={self.d} needs {r_d(self.d)} coefficients, got {len(self.coeffs)}")

    def b(self, ell: int) -> Fraction:
        return self.coeffs[ell - 1]


def external_data(table: Dict[int, List[Fraction]]) -> Dict[int, SiegelData]:
    return {d: SiegelData(d, tuple(coeffs), EXTERNAL) for d, coeffs in table.items()}


# --- trace-level enumeration in the codifferent ---

def dual_basis(field: QuadraticField) -> Tuple[FieldElement, FieldElement]:
    """Trace-dual of (1, ω): w1* = ((t²−2n) − tω)/Δ, w2* = (2ω − t)/Δ."""
    t, n, disc = field.trace_omega, field.norm_omega, field.disc
    omega = field.omega
    return (field.one * (t * t - 2 * n) - omega * t) / disc, (omega * 2 - t) / disc


def trace_level_codifferent(field: QuadraticField, ell: int) -> List[FieldElement]:
    """Every totally positive γ ∈ O_K^∨ with Tr(γ) = ℓ, ordered by the w2*-coordinate."""
    if ell < 1:
        raise ValueError("trace level must be ≥ 1")
    w1, w2 = dual_basis(field)
    base = w1 * ell
    # γ = base + c·w2 is totally positive iff |y0 + c·y1| < ℓ/(2√D);
    # with m·y0 = A, m·y1 = B this is 4D·(A + cB)² < ℓ²m²
    m = lcm(base.y.denominator, w2.y.denominator)
    A, B = int(base.y * m), int(w2.y * m)
    if B < 0:
        A, B = -A, -B
    T = isqrt((ell * ell * m * m - 1) // (4 * field.D))
    lo, hi = ceil_div(-T - A, B), (T - A) // B
    return [gamma for gamma in (base + w2 * c for c in range(lo, hi + 1)) if gamma.is_totally_positive()]


def s_ell(field: QuadraticField, ell: int) -> int:
    different, _ = different_codifferent(field)
    total = 0
    for gamma in trace_level_codifferent(field, ell):
        J = FracIdeal.principal(gamma) * different
        if not J.is_integral():
            raise ArithmeticError(f"(γ)·𝔡 not integral for γ = {gamma}")
        total += sigma_ideal(J)
    return total


# --- ζ_K(−1) ---

def zeta_minus1_siegel(field: QuadraticField, data: SiegelData) -> Fraction:
    if data.d != 2:
        raise DegreeUnsupported(f"exact Siegel evaluation is implemented for d = 2, not d = {data.d}")
    return 4 * data.b(1) * s_ell(field, 1)


def bernoulli_b2_chi(disc: int) -> Fraction:
    """B_{2,χ} = Δ·Σ_{a=1}^{Δ} χ(a)·B₂(a/Δ) with χ = (Δ|·)."""
    total = Fraction(0)
    for a in range(1, disc + 1):
        chi = kronecker(disc, a)
        if chi:
            x = Fraction(a, disc)
            total += chi * (x * x - x + Fraction(1, 6))
    return disc * total


def zeta_minus1_oracle(field: QuadraticField) -> Fraction:
    # ζ(−1) = −1/12 and L(−1, χ) = −B_{2,χ}/2
    return Fraction(-1, 12) * (-bernoulli_b2_chi(field.disc) / 2)


def derive_b1(sample: Sequence[QuadraticField]) -> Fraction:
    if not sample:
        raise InconsistentSample("empty sample")
    values = {}
    for K in sample:
        values[K.D] = zeta_minus1_oracle(K) / (4 * s_ell(K, 1))
    distinct = set(values.values())
    if len(distinct) != 1:
        raise InconsistentSample(f"b₁(4) differs across the sample: {values}")
    return distinct.pop()


def default_sample(size: int) -> List[QuadraticField]:
    """Q(√5), Q(√2), Q(√3) followed by the next squarefree D."""
    head = [5, 2, 3]
    rest = (D for D in range(6, 10 ** 6) if is_squarefree(D))
    Ds = head[:size] + [next(rest) for _ in range(max(0, size - len(head)))]
    return [QuadraticField(D) for D in Ds]


@lru_cache(maxsize=None)
def derived_data(sample_size: int = 23) -> SiegelData:
    return SiegelData(2, (derive_b1(default_sample(sample_size)),), DERIVED)


# --- ζ_K(2) ---

def _l2_enclosure(disc: int, K: int):
    """L(2, χ_Δ) summed over k < K per residue, plus the convex tail sandwich."""
    total = iv.mpf(0)
    for a in range(1, disc + 1):
        chi = kronecker(disc, a)
        if not chi:
            continue
        partial = iv.mpf(0)
        for k in range(K):
            partial += iv.mpf(1) / ((k * disc + a) ** 2)
        u = K * disc + a
        tail_lo = iv.mpf(1) / (disc * u) + iv.mpf(1) / (2 * u * u)
        # ∫_{K−1/2}^∞ (xΔ + a)^−2 dx = 2/(Δ(2u − Δ))
        tail_hi = iv.mpf(2) / (disc * (2 * u - disc))
        tail = iv.mpf([tail_lo.a, tail_hi.b])
        total += chi * (partial + tail)
    return total


def zeta2_numeric(field: QuadraticField, abs_err: float, bits: int = 96):
    """Interval of width ≤ 2·abs_err around ζ_K(2) = ζ(2)·L(2, χ_Δ), lower end > 1."""
    if abs_err <= 0:
        raise ValueError("abs_err must be positive")
    disc = field.disc
    bits = max(bits, int(-math.log2(abs_err)) + 40)
    with interval_precision(bits):
        zeta2 = iv.pi ** 2 / 6
        K = max(2, math.ceil((1 / (4 * disc * abs_err)) ** (1 / 3)))
        while True:
            value = zeta2 * _l2_enclosure(disc, K)
            if value.delta <= 2 * abs_err and value.a > 1:
                return value
            K *= 2


@dataclass
class FunctionalEquationCheck:
    residual: float
    slack: float
    passed: bool
    rhs: object
    zeta2: object

    def __iter__(self):
        yield self.residual
        yield self.passed


def functional_eq_check(field: QuadraticField, tol: float, abs_err: float = 1e-9,
                        data: Optional[SiegelData] = None, bits: int = 96) -> FunctionalEquationCheck:
    """
    residual = |ζ_Siegel(−1) − mid(Δ^{3/2}·ζ_K(2)/(4π⁴))|, slack = radius of
    that interval; the check passes when residual + slack ≤ tol.
    """
    data = data or derived_data()
    siegel = zeta_minus1_siegel(field, data)
    zeta2 = zeta2_numeric(field, abs_err, bits)
    with interval_precision(max(bits, 64)):
        disc = iv.mpf(field.disc)
        rhs = disc * iv.sqrt(disc) / (4 * iv.pi ** 4) * zeta2
        residual = upper(abs(rational(siegel) - rhs.mid))
        slack = radius(rhs)
    return FunctionalEquationCheck(residual, slack, residual + slack <= tol, rhs, zeta2)


@dataclass
class ZetaReport:
    field: QuadraticField
    s_values: List[Tuple[int, int]]
    trace_elements: List[FieldElement]
    b1: Fraction
    zeta_minus1: Fraction
    oracle_minus1: Fraction
    zeta2: object
    fe: FunctionalEquationCheck
    notes: List[str] = dc_field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "D": self.field.D,
            "disc": self.field.disc,
            "s_values": [{"ell": ell, "s": s} for ell, s in self.s_values],
            "trace_one": [ReportCodec.element(g) for g in self.trace_elements],
            "b1": ReportCodec.rational(self.b1),
            "zeta_minus1": ReportCodec.rational(self.zeta_minus1),
            "oracle_minus1": ReportCodec.rational(self.oracle_minus1),
            "agree": self.zeta_minus1 == self.oracle_minus1,
            "zeta2": ReportCodec.interval(self.zeta2),
            "fe_residual": self.fe.residual,
            "fe_slack": self.fe.slack,
            "fe_pass": self.fe.passed,
            "notes": self.notes,
        }


class ZetaCalculator:
    """Special values ζ_K(−1), ζ_K(2) and the derived coefficient b₁(4)"""

    def __init__(self, sample_size: int = 23, bits: int = 96):
        self.name = "Zeta"
        self.sample_size = sample_size
        self.bits = bits
        announce(f"✅ {self.name} initialisé (échantillon b₁: {sample_size} corps)")

    def derive(self, data_override: Optional[SiegelData] = None) -> SiegelData:
        if data_override is not None:
            return data_override
        try:
            data = derived_data(self.sample_size)
        except InconsistentSample as e:
            log_computation(
                component=self.name,
                action=ActionType.DERIVATION,
                details={"inputs": {"sample_size": self.sample_size}, "result": None, "error": str(e)},
                status="FAILURE",
            )
            raise
        log_computation(
            component=self.name,
            action=ActionType.DERIVATION,
            details={"inputs": {"sample_size": self.sample_size}, "result": str(data.b(1))},
            status="SUCCESS",
        )
        return data

    def report(self, field: QuadraticField, tol: float, abs_err: float,
               data: Optional[SiegelData] = None) -> ZetaReport:
        data = self.derive(data)
        announce(f"🔍 ζ_K(−1) et ζ_K(2) pour {field}...")
        siegel = zeta_minus1_siegel(field, data)
        oracle = zeta_minus1_oracle(field)
        fe = functional_eq_check(field, tol, abs_err, data, self.bits)
        report = ZetaReport(
            field=field,
            s_values=[(1, s_ell(field, 1))],
            trace_elements=trace_level_codifferent(field, 1),
            b1=data.b(1),
            zeta_minus1=siegel,
            oracle_minus1=oracle,
            zeta2=fe.zeta2,
            fe=fe,
        )
        if siegel != oracle:
            report.notes.append("Siegel value disagrees with the Bernoulli oracle")
        if not fe.passed:
            report.notes.append(f"functional equation residual {fe.residual:.3e} + slack {fe.slack:.3e} exceeds tol {tol:.1e}")
        log_computation(
            component=self.name,
            action=ActionType.EVALUATION,
            details={"inputs": {"D": field.D, "tol": tol, "abs_err": abs_err},
                     "result": {"zeta_minus1": str(siegel), "oracle": str(oracle), "fe_pass": fe.passed}},
            status="SUCCESS" if siegel == oracle and fe.passed else "PARTIAL",
        )
        return report
