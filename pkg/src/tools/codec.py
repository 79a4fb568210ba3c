"""
JSON encoding of field objects.

Exact rationals travel as "p/q" strings, never as JSON numbers.
"""
from fractions import Fraction
from typing import Dict

from src.tools.intervals import to_json as interval_to_json
from src.tools.qfield import FieldElement, format_element
from src.utils.errors import MalformedInput


class ReportCodec:

    @staticmethod
    def rational(q) -> str:
        return str(Fraction(q))

    @staticmethod
    def parse_rational(text: str) -> Fraction:
        try:
            return Fraction(str(text))
        except (ValueError, ZeroDivisionError):
            raise MalformedInput(f"not a rational: {text!r}")

    @staticmethod
    def element(e: FieldElement) -> Dict:
        u, v = e.coords()
        first, second = e.approx()
        return {
            "text": format_element(e),
            "coords": [str(u), str(v)],
            "approx": [first, second],
        }

    @staticmethod
    def ideal(I) -> Dict:
        return {"scale": str(I.scale), "a": I.a, "b": I.b, "D": I.field.D}

    @staticmethod
    def factorization(F) -> list:
        return [{"ideal": ReportCodec.ideal(P), "exponent": e} for P, e in F.factors]

    @staticmethod
    def interval(x) -> Dict:
        return interval_to_json(x)
