"""
Indecomposables and the κ(I) generator counts.

The continued fraction of ξ_D gives the indecomposables of O_K (odd-index
semiconvergents) and of O_K^(+,−) (even-index ones); the brute-force path
enumerates I^+ below the norm bound Δ·N(I)² and filters by decomposability.
"""
import random
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Tuple

from src.tools.cfrac import fundamental_unit, partial_quotient_sum, semiconvergents
from src.tools.codec import ReportCodec
from src.tools.ideals import (PLUS_PLUS, FracIdeal, narrow_class_reps, principal_generator,
                              reduce_to_window, short_elements, tp_generator, window_elements)
from src.tools.qfield import FieldElement, QuadraticField
from src.utils.errors import NotIntegral, NotInIdealPlus, NotPrincipal
from src.utils.logger import ActionType, announce, log_computation


@dataclass(frozen=True)
class IndecClass:
    representative: FieldElement
    source: str
    ideal: FracIdeal

    def to_dict(self) -> Dict:
        n, t = self.representative.norm_trace()
        return {
            "representative": ReportCodec.element(self.representative),
            "norm": str(n),
            "trace": str(t),
            "source": self.source,
        }


@dataclass
class KappaBound:
    lower: int
    upper: int
    certificates: List[Dict] = dc_field(default_factory=list)


def _order_key(alpha: FieldElement):
    return alpha.trace(), alpha.y


def _check_member(alpha: FieldElement, I: FracIdeal):
    if alpha.field != I.field or not I.contains(alpha) or not alpha.is_totally_positive():
        raise NotInIdealPlus(f"{alpha} is not a totally positive element of {I}")


def is_decomposable(alpha: FieldElement, I: FracIdeal) -> Optional[Tuple[FieldElement, FieldElement]]:
    """
    A split α = β + γ with β, γ ∈ I^+, or None.

    Any β in the box 0 < β < α, 0 < β' < α' satisfies Tr((α'β)²) < 2N(α)²,
    so the box is covered by one ellipse of the lattice I.
    """
    _check_member(alpha, I)
    n = alpha.norm()
    weight = alpha.conj() * alpha.conj()
    for beta in short_elements(I, weight, 2 * n * n):
        if beta.is_totally_positive() and alpha.succ(beta):
            return beta, alpha - beta
    return None


def find_square_below(alpha: FieldElement, I: FracIdeal) -> Optional[FieldElement]:
    """β ∈ I \\ {0} with α ≻ β², searched inside Tr(α'β²) < 2N(α)."""
    _check_member(alpha, I)
    for beta in short_elements(I, alpha.conj(), 2 * alpha.norm()):
        if alpha.succ(beta * beta):
            return beta
    return None


def _dedupe(classes: Iterable[IndecClass]) -> List[IndecClass]:
    seen, out = set(), []
    for c in classes:
        if c.representative not in seen:
            seen.add(c.representative)
            out.append(c)
    return out


def _ring_indices(s: int) -> range:
    # α_{s-1,r} = ε·α_{-1,r}, so even periods stop before i = s − 1
    return range(-1, 2 * s - 1, 2) if s % 2 else range(-1, s - 1, 2)


def _pm_indices(s: int) -> range:
    return range(0, 2 * s - 1, 2) if s % 2 else range(0, s - 1, 2)


def _cf_classes(field: QuadraticField, indices: range) -> List[IndecClass]:
    unit = fundamental_unit(field)
    O = FracIdeal.unit(field)
    return _dedupe(
        IndecClass(reduce_to_window(alpha, unit.eps_plus), f"cf(i={i},r={r})", O)
        for i, r, alpha in semiconvergents(unit.expansion, indices)
    )


def indecomposables_ring(field: QuadraticField) -> List[IndecClass]:
    return _cf_classes(field, _ring_indices(fundamental_unit(field).expansion.s))


def indecomposables_pm(field: QuadraticField) -> List[IndecClass]:
    return _cf_classes(field, _pm_indices(fundamental_unit(field).expansion.s))


def i_indecomposables(I: FracIdeal) -> List[IndecClass]:
    if not I.is_integral():
        raise NotIntegral(f"{I} must be rescaled to an integral ideal first")
    bound = I.field.disc * I.norm() ** 2
    candidates = sorted(window_elements(I, bound, PLUS_PLUS), key=_order_key)
    return [IndecClass(alpha, "brute", I) for alpha in candidates if is_decomposable(alpha, I) is None]


def integral_rescale(I: FracIdeal) -> Tuple[FracIdeal, int]:
    """(m·I, m) for the least positive integer m making m·I integral."""
    m = I.scale.denominator
    return I.scaled(m), m


def kappa_upper_cf(I: FracIdeal) -> int:
    found = principal_generator(I)
    if found is None:
        raise NotPrincipal(f"{I} has no generator")
    _, signature = found
    expansion = fundamental_unit(I.field).expansion
    return partial_quotient_sum(expansion, "odd" if signature == PLUS_PLUS else "even")


def kappa_upper_classcount(I: FracIdeal) -> int:
    J, _ = integral_rescale(I)
    return len(i_indecomposables(J))


def kappa_is_one(I: FracIdeal) -> bool:
    return tp_generator(I) is not None


def kappa_field_bound(field: QuadraticField) -> KappaBound:
    bound = KappaBound(lower=1, upper=1)
    for R in narrow_class_reps(field):
        cert = {"ideal": ReportCodec.ideal(R)}
        generator = tp_generator(R)
        if generator is not None:
            cert.update(kappa=1, tp_generator=ReportCodec.element(generator))
            value = 1
        else:
            # I^{+,0} = δ·O^{+,0} would make δ a totally positive generator
            bound.lower = 2
            count = kappa_upper_classcount(R)
            cert.update(tp_generator=None, classcount=count)
            value = count
            if principal_generator(R) is not None:
                cf = kappa_upper_cf(R)
                cert["cf_bound"] = cf
                value = min(value, cf)
        cert["upper"] = value
        bound.upper = max(bound.upper, value)
        bound.certificates.append(cert)
    return bound


def _match_class(piece: FieldElement, classes: List[IndecClass]) -> IndecClass:
    normal = reduce_to_window(piece)
    for c in classes:
        if c.representative == normal:
            return c
    raise ArithmeticError(f"indecomposable {piece} matches no listed class")


def express_as_sum(w: FieldElement, I: FracIdeal, classes: List[IndecClass]) -> List[Tuple[FieldElement, FieldElement]]:
    """w = Σ α_k·β_k with α_k class representatives and β_k totally positive units."""
    _check_member(w, I)
    pieces, stack = [], [w]
    while stack:
        x = stack.pop()
        split = is_decomposable(x, I)
        if split is None:
            pieces.append(x)
        else:
            stack.extend(split)
    terms = []
    for piece in sorted(pieces, key=_order_key):
        c = _match_class(piece, classes)
        terms.append((c.representative, piece / c.representative))
    return terms


def norm_class_counts(field: QuadraticField, bounds: List[int]) -> Dict[int, int]:
    """#V_X: totally positive integers of norm ≤ X modulo squares of units."""
    eps = fundamental_unit(field).epsilon
    top = max(bounds)
    norms = [alpha.norm() for alpha in window_elements(FracIdeal.unit(field), top, PLUS_PLUS, eps * eps)]
    return {X: sum(1 for n in norms if n <= X) for X in bounds}


def check_norm_bound(I: FracIdeal, samples: int = 0, rng: Optional[random.Random] = None) -> Dict:
    """
    Elements of I^+ above Δ·N(I)² are decomposable: exhaustively on the band
    (X, 2X], and with a square witness β² ≺ α for random α from that band.
    """
    X = I.field.disc * I.norm() ** 2
    band = [alpha for alpha in window_elements(I, 2 * X, PLUS_PLUS) if alpha.norm() > X]
    checked = 0
    for alpha in band:
        checked += 1
        if find_square_below(alpha, I) is None and is_decomposable(alpha, I) is None:
            return {"checked": checked, "counterexample": str(alpha)}
    rng = rng or random.Random(0)
    for alpha in rng.sample(band, min(samples, len(band))):
        checked += 1
        if find_square_below(alpha, I) is None:
            return {"checked": checked, "counterexample": str(alpha), "kind": "no square witness"}
    return {"checked": checked, "counterexample": None}


class IndecomposableCalculator:
    """Indecomposable classes and κ bounds, with one log entry per request"""

    def __init__(self):
        self.name = "Indecomposables"
        announce(f"✅ {self.name} initialisé")

    def analyze_field(self, field: QuadraticField) -> Dict:
        unit = fundamental_unit(field)
        ring, pm = indecomposables_ring(field), indecomposables_pm(field)
        result = {
            "D": field.D,
            "disc": field.disc,
            "period": list(unit.expansion.period),
            "eps_plus": ReportCodec.element(unit.eps_plus),
            "ring": {"count": len(ring), "classes": [c.to_dict() for c in ring]},
            "plus_minus": {"count": len(pm), "classes": [c.to_dict() for c in pm]},
        }
        self._log({"D": field.D}, {"ring": len(ring), "plus_minus": len(pm)})
        return result

    def analyze_ideal(self, I: FracIdeal) -> Dict:
        J, m = integral_rescale(I)
        announce(f"🔍 I-indécomposables de {J} (norme {J.norm()})...")
        classes = i_indecomposables(J)
        result = {
            "D": I.field.D,
            "ideal": ReportCodec.ideal(I),
            "rescale": m,
            "integral_ideal": ReportCodec.ideal(J),
            "norm_bound": str(I.field.disc * J.norm() ** 2),
            "count": len(classes),
            "classes": [c.to_dict() for c in classes],
            "kappa_is_one": kappa_is_one(J),
        }
        if principal_generator(J) is not None:
            result["kappa_upper_cf"] = kappa_upper_cf(J)
        self._log({"ideal": ReportCodec.ideal(I)}, {"count": len(classes)})
        return result

    def kappa(self, field: QuadraticField) -> Dict:
        announce(f"🔍 κ({field}) sur les classes restreintes...")
        bound = kappa_field_bound(field)
        result = {
            "D": field.D,
            "narrow_class_number": len(bound.certificates),
            "lower": bound.lower,
            "upper": bound.upper,
            "classes": bound.certificates,
        }
        self._log({"D": field.D}, {"lower": bound.lower, "upper": bound.upper})
        return result

    def _log(self, inputs: Dict, result: Dict):
        log_computation(
            component=self.name,
            action=ActionType.ENUMERATION,
            details={"inputs": inputs, "result": result},
            status="SUCCESS",
        )
