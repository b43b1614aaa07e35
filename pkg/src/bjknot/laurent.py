"""Integer Laurent polynomials in one variable.

Exponents may be negative.  Coefficients are arbitrary-precision ints,
so bracket and Alexander computations stay exact at any crossing count
this package handles.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


class LaurentPolynomial:
    """Immutable sparse Laurent polynomial with int coefficients.

    Internally a sorted tuple of (exponent, coefficient) pairs with no
    zero coefficients.  The variable is anonymous; printing and parsing
    take a variable name.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        acc: dict[int, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, coeff in items:
            if coeff:
                acc[exp] = acc.get(exp, 0) + coeff
                if not acc[exp]:
                    del acc[exp]
        object.__setattr__(self, "_terms", tuple(sorted(acc.items())))

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPolynomial is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPolynomial":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPolynomial":
        return cls({0: 1})

    @classmethod
    def monomial(cls, coeff: int, exp: int) -> "LaurentPolynomial":
        return cls({exp: coeff})

    # -- inspection --------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[int, int], ...]:
        return self._terms

    def coefficient(self, exp: int) -> int:
        for e, c in self._terms:
            if e == exp:
                return c
        return 0

    def is_zero(self) -> bool:
        return not self._terms

    def min_exponent(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return self._terms[0][0]

    def max_exponent(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return self._terms[-1][0]

    def span(self) -> int:
        """max exponent minus min exponent; 0 for monomials and zero."""
        if not self._terms:
            return 0
        return self._terms[-1][0] - self._terms[0][0]

    # -- arithmetic --------------------------------------------------

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        acc = dict(self._terms)
        for e, c in other._terms:
            acc[e] = acc.get(e, 0) + c
        return LaurentPolynomial(acc)

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        acc = dict(self._terms)
        for e, c in other._terms:
            acc[e] = acc.get(e, 0) - c
        return LaurentPolynomial(acc)

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial({e: -c for e, c in self._terms})

    def __mul__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        acc: dict[int, int] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                e = e1 + e2
                acc[e] = acc.get(e, 0) + c1 * c2
        return LaurentPolynomial(acc)

    def scale(self, coeff: int, exp: int = 0) -> "LaurentPolynomial":
        """self times coeff * x^exp."""
        return LaurentPolynomial({e + exp: c * coeff for e, c in self._terms})

    def __pow__(self, k: int) -> "LaurentPolynomial":
        if k < 0:
            raise ValueError("negative powers are not defined here")
        out = LaurentPolynomial.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divexact(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        """Exact division; raises ValueError on a nonzero remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LaurentPolynomial.zero()
        rem = dict(self._terms)
        lead_e, lead_c = other._terms[-1]
        # exact quotients cannot reach below this exponent; descending
        # past it means a nonzero remainder (and would never terminate)
        low = self._terms[0][0] - other._terms[0][0]
        out: dict[int, int] = {}
        while rem:
            e = max(rem)
            if e - lead_e < low:
                raise ValueError("nonzero remainder")
            c = rem[e]
            q, r = divmod(c, lead_c)
            if r:
                raise ValueError("inexact coefficient division")
            out[e - lead_e] = q
            for oe, oc in other._terms:
                key = e - lead_e + oe
                rem[key] = rem.get(key, 0) - q * oc
                if not rem[key]:
                    del rem[key]
        return LaurentPolynomial(out)

    def substitute_reciprocal(self) -> "LaurentPolynomial":
        """x -> 1/x."""
        return LaurentPolynomial({-e: c for e, c in self._terms})

    def substitute_power(self, k: int) -> "LaurentPolynomial":
        """x -> x^k for nonzero integer k (negative allowed)."""
        if k == 0:
            raise ValueError("substituting x^0 collapses the variable")
        return LaurentPolynomial({e * k: c for e, c in self._terms})

    def evaluate(self, x: Fraction | int) -> Fraction | int:
        x = Fraction(x) if not isinstance(x, int) else x
        total: Fraction | int = 0
        for e, c in self._terms:
            if e >= 0:
                total += c * x**e
            else:
                total += Fraction(c, 1) * Fraction(1, x) ** (-e)
        return total

    # -- comparisons and hashing -------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    # -- text --------------------------------------------------------

    def serialize(self) -> str:
        """Sorted 'exponent:coefficient' pairs, comma separated."""
        return ",".join(f"{e}:{c}" for e, c in self._terms)

    @classmethod
    def deserialize(cls, text: str) -> "LaurentPolynomial":
        text = text.strip()
        if not text:
            return cls.zero()
        pairs = []
        for chunk in text.split(","):
            e, _, c = chunk.partition(":")
            pairs.append((int(e), int(c)))
        return cls(pairs)

    def format(self, var: str = "t") -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in reversed(self._terms):
            if e == 0:
                body = str(abs(c))
            else:
                head = "" if abs(c) == 1 else str(abs(c)) + "*"
                body = f"{head}{var}" if e == 1 else f"{head}{var}^{e}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"LaurentPolynomial({dict(self._terms)!r})"

    def __str__(self) -> str:
        return self.format()
