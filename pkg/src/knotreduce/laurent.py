"""Integer Laurent polynomials in one variable.

Knot invariants in this package (bracket, Jones, Alexander) are all values
of this type.  Coefficients are exact Python ints; exponents may be negative.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction, complex, float]


class LaurentPolynomial:
    """Immutable sparse Laurent polynomial with integer coefficients.

    Zero coefficients are never stored, so two polynomials are equal exactly
    when their coefficient maps are equal.  ``var`` is used for display only
    and takes no part in equality or arithmetic.
    """

    __slots__ = ("_coeffs", "var", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None, var: str = "t"):
        clean: dict[int, int] = {}
        for exp, c in (coeffs or {}).items():
            if int(exp) != exp or int(c) != c:
                raise TypeError("exponents and coefficients must be integers")
            if c:
                clean[int(exp)] = int(c)
        self._coeffs = dict(sorted(clean.items()))
        self.var = var
        self._hash = None

    # construction helpers

    @classmethod
    def constant(cls, c: int, var: str = "t") -> "LaurentPolynomial":
        return cls({0: c}, var)

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1, var: str = "t") -> "LaurentPolynomial":
        return cls({exp: coeff}, var)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int]], var: str = "t") -> "LaurentPolynomial":
        """Build from ``(exponent, coefficient)`` pairs, summing repeats."""
        acc: dict[int, int] = {}
        for exp, c in terms:
            acc[exp] = acc.get(exp, 0) + c
        return cls(acc, var)

    # inspection

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._coeffs)

    def coefficient(self, exp: int) -> int:
        return self._coeffs.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def min_exp(self) -> int:
        if not self._coeffs:
            raise ValueError("zero polynomial has no exponents")
        return next(iter(self._coeffs))

    @property
    def max_exp(self) -> int:
        if not self._coeffs:
            raise ValueError("zero polynomial has no exponents")
        return next(reversed(self._coeffs))

    def terms(self) -> list[tuple[int, int]]:
        return list(self._coeffs.items())

    def is_symmetric(self) -> bool:
        """True iff coefficient(e) == coefficient(-e) for every exponent."""
        return all(self._coeffs.get(-e, 0) == c for e, c in self._coeffs.items())

    # arithmetic

    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            return other
        if isinstance(other, int):
            return LaurentPolynomial.constant(other, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._coeffs)
        for e, c in other._coeffs.items():
            acc[e] = acc.get(e, 0) + c
        return LaurentPolynomial(acc, self.var)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial({e: -c for e, c in self._coeffs.items()}, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[int, int] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(acc, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPolynomial":
        if n < 0:
            if len(self._coeffs) != 1:
                raise ValueError("only monomials have Laurent inverses")
            ((e, c),) = self._coeffs.items()
            if c not in (1, -1):
                raise ValueError("monomial with non-unit coefficient is not invertible")
            return LaurentPolynomial({e * n: c ** (-n)}, self.var)
        result = LaurentPolynomial.constant(1, self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPolynomial":
        """Multiply by ``var**k``."""
        return LaurentPolynomial({e + k: c for e, c in self._coeffs.items()}, self.var)

    def scale_exponents(self, factor: Fraction | int, var: str | None = None) -> "LaurentPolynomial":
        """Substitute ``var -> new_var**factor``; every resulting exponent must be integral."""
        out: dict[int, int] = {}
        for e, c in self._coeffs.items():
            ne = Fraction(e) * factor
            if ne.denominator != 1:
                raise ValueError(f"exponent {e} does not scale to an integer by {factor}")
            out[int(ne)] = c
        return LaurentPolynomial(out, var or self.var)

    def symmetrized(self) -> "LaurentPolynomial":
        """Shift so the exponent range is centred on zero (span must be even)."""
        if not self._coeffs:
            return self
        span = self.min_exp + self.max_exp
        if span % 2:
            raise ValueError("odd exponent span cannot be centred")
        return self.shift(-span // 2)

    def __call__(self, x: Number) -> Number:
        if isinstance(x, int) and any(e < 0 for e in self._coeffs):
            x = Fraction(x)
        total: Number = 0
        for e, c in self._coeffs.items():
            total += c * x**e
        if isinstance(total, Fraction) and total.denominator == 1:
            return int(total)
        return total

    # comparison / hashing

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._coeffs.items()))
        return self._hash

    # serialization

    def to_json(self) -> dict[str, int]:
        """Exponent strings to coefficients, ascending exponent order."""
        return {str(e): c for e, c in self._coeffs.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, int], var: str = "t") -> "LaurentPolynomial":
        return cls({int(e): int(c) for e, c in data.items()}, var)

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self._coeffs!r}, var={self.var!r})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for e, c in sorted(self._coeffs.items(), reverse=True):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                power = self.var if e == 1 else f"{self.var}^{e}"
                body = power if mag == 1 else f"{mag}*{power}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text
