"""Exact multivariate polynomials over the rationals.

Coefficients are `fractions.Fraction`, monomials are exponent tuples stored
sparsely (zero coefficients are never kept).  Wherever an order matters --
text output, serialized results -- terms are sorted graded-lexicographically,
so identical inputs always render identically.

Variables are written ``x1 .. xd`` in text form.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction
Exponents = tuple[int, ...]
Scalar = Union[int, Fraction]

__all__ = [
    "Rational",
    "Polynomial",
    "PolyError",
    "ParseError",
    "parse_polynomial",
]


class PolyError(ValueError):
    pass


class ParseError(ValueError):
    """Malformed polynomial text; carries the offending position (0-based)."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected a rational scalar, got {type(value).__name__}")


class Polynomial:
    """A polynomial in x1..xd with exact rational coefficients."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[Exponents, Scalar] | None = None):
        if dim < 0:
            raise PolyError("dimension must be >= 0")
        clean: dict[Exponents, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(exps)
                if len(exps) != dim or any(e < 0 for e in exps):
                    raise PolyError(f"bad exponent tuple {exps!r} for dim {dim}")
                frac = _as_fraction(coeff)
                if frac:
                    clean[exps] = frac
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # keep instances effectively immutable
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "Polynomial":
        return cls(dim, {})

    @classmethod
    def constant(cls, dim: int, value: Scalar) -> "Polynomial":
        return cls(dim, {(0,) * dim: _as_fraction(value)})

    @classmethod
    def one(cls, dim: int) -> "Polynomial":
        return cls.constant(dim, 1)

    @classmethod
    def variable(cls, dim: int, index: int) -> "Polynomial":
        """x_index, 1-based."""
        if not 1 <= index <= dim:
            raise PolyError(f"variable index {index} out of range 1..{dim}")
        exps = tuple(1 if i == index - 1 else 0 for i in range(dim))
        return cls(dim, {exps: Fraction(1)})

    @classmethod
    def monomial(cls, dim: int, exps: Sequence[int], coeff: Scalar = 1) -> "Polynomial":
        return cls(dim, {tuple(exps): _as_fraction(coeff)})

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Largest monomial degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.dim, Fraction(0))

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Graded-lexicographic order, lowest degree first."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    # -- arithmetic --------------------------------------------------------

    def _check_dim(self, other: "Polynomial") -> None:
        if self.dim != other.dim:
            raise PolyError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.dim, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_dim(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = terms.get(exps, Fraction(0)) + coeff
            if acc:
                terms[exps] = acc
            else:
                terms.pop(exps, None)
        return Polynomial(self.dim, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.dim, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            k = _as_fraction(other)
            if not k:
                return Polynomial.zero(self.dim)
            return Polynomial(self.dim, {e: c * k for e, c in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_dim(other)
        terms: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                acc = terms.get(key, Fraction(0)) + c1 * c2
                if acc:
                    terms[key] = acc
                else:
                    terms.pop(key, None)
        return Polynomial(self.dim, terms)

    __rmul__ = __mul__

    def __pow__(self, power: int):
        if not isinstance(power, int) or power < 0:
            raise PolyError("exponent must be a non-negative integer")
        result = Polynomial.one(self.dim)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    # -- calculus ----------------------------------------------------------

    def derive(self, index: int, times: int = 1) -> "Polynomial":
        """Partial derivative with respect to x_index (1-based)."""
        if not 1 <= index <= self.dim:
            raise PolyError(f"variable index {index} out of range 1..{self.dim}")
        poly = self
        for _ in range(times):
            terms: dict[Exponents, Fraction] = {}
            for exps, coeff in poly.terms.items():
                e = exps[index - 1]
                if e:
                    key = exps[: index - 1] + (e - 1,) + exps[index:]
                    terms[key] = terms.get(key, Fraction(0)) + coeff * e
            poly = Polynomial(self.dim, terms)
            if poly.is_zero():
                break
        return poly

    def derive_multi(self, orders: Sequence[int]) -> "Polynomial":
        """Apply d^orders[i]/dx_{i+1}^orders[i] for every variable."""
        if len(orders) != self.dim:
            raise PolyError("derivative multi-index has wrong length")
        poly = self
        for i, k in enumerate(orders, start=1):
            if k:
                poly = poly.derive(i, k)
                if poly.is_zero():
                    break
        return poly

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.dim:
            raise PolyError("evaluation point has wrong length")
        pt = [_as_fraction(v) for v in point]
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            val = coeff
            for base, e in zip(pt, exps):
                if e:
                    val *= base**e
            total += val
        return total

    def substitute(self, index: int, replacement: Union["Polynomial", Scalar]) -> "Polynomial":
        """Substitute x_index := replacement (a scalar or same-dim polynomial)."""
        if not 1 <= index <= self.dim:
            raise PolyError(f"variable index {index} out of range 1..{self.dim}")
        if isinstance(replacement, (int, Fraction)):
            replacement = Polynomial.constant(self.dim, replacement)
        self._check_dim(replacement)
        result = Polynomial.zero(self.dim)
        for exps, coeff in self.terms.items():
            e = exps[index - 1]
            rest = Polynomial.monomial(
                self.dim, exps[: index - 1] + (0,) + exps[index:], coeff
            )
            result = result + rest * replacement**e
        return result

    # -- text form ---------------------------------------------------------

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for exps, coeff in sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), kv[0])):
            factors = []
            for i, e in enumerate(exps, start=1):
                if e == 1:
                    factors.append(f"x{i}")
                elif e > 1:
                    factors.append(f"x{i}^{e}")
            if not factors:
                body = str(abs(coeff))
            else:
                mono = "*".join(factors)
                mag = abs(coeff)
                body = mono if mag == 1 else f"{mag}*{mono}"
            sign = "-" if coeff < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Polynomial(d={self.dim}, {self.to_text()})"


# -- parsing ---------------------------------------------------------------
#
# Grammar (whitespace insignificant):
#   expr   := term (('+' | '-') term)*
#   term   := factor ('*' factor)*
#   factor := atom ('^' INT)?
#   atom   := RATIONAL | VARIABLE | '(' expr ')' | ('+' | '-') factor
#   RATIONAL := INT ('/' INT)?     VARIABLE := 'x' INT


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self._skip_ws()
        if self.pos >= len(self.text):
            return None, self.pos
        return self.text[self.pos], self.pos

    def take_int(self) -> int:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected an integer", start)
        return int(self.text[start : self.pos])


class _Parser:
    def __init__(self, text: str, dim: int | None):
        self.tok = _Tokenizer(text)
        self.dim = dim
        self.max_var = 0
        # with unknown dim we collect raw terms keyed by {var: exponent}
        self.raw_mode = dim is None

    def parse(self):
        value = self._expr()
        ch, pos = self.tok.peek()
        if ch is not None:
            raise ParseError(f"unexpected character {ch!r}", pos)
        return value

    def _expr(self):
        value = self._term()
        while True:
            ch, _ = self.tok.peek()
            if ch == "+":
                self.tok.pos += 1
                value = self._radd(value, self._term())
            elif ch == "-":
                self.tok.pos += 1
                value = self._radd(value, self._rscale(self._term(), Fraction(-1)))
            else:
                return value

    def _term(self):
        value = self._factor()
        while True:
            ch, _ = self.tok.peek()
            if ch == "*":
                self.tok.pos += 1
                value = self._rmul(value, self._factor())
            else:
                return value

    def _factor(self):
        value = self._atom()
        ch, _ = self.tok.peek()
        if ch == "^":
            self.tok.pos += 1
            power = self.tok.take_int()
            value = self._rpow(value, power)
        return value

    def _atom(self):
        ch, pos = self.tok.peek()
        if ch is None:
            raise ParseError("unexpected end of input", pos)
        if ch == "(":
            self.tok.pos += 1
            value = self._expr()
            ch2, pos2 = self.tok.peek()
            if ch2 != ")":
                raise ParseError("expected ')'", pos2)
            self.tok.pos += 1
            return value
        if ch in "+-":
            self.tok.pos += 1
            value = self._factor()
            return value if ch == "+" else self._rscale(value, Fraction(-1))
        if ch == "x":
            self.tok.pos += 1
            index = self.tok.take_int()
            if index < 1:
                raise ParseError("variable indices start at 1", pos)
            if self.dim is not None and index > self.dim:
                raise ParseError(f"variable x{index} exceeds dimension {self.dim}", pos)
            self.max_var = max(self.max_var, index)
            return {((index, 1),): Fraction(1)}
        if ch.isdigit():
            num = self.tok.take_int()
            ch2, _ = self.tok.peek()
            if ch2 == "/":
                self.tok.pos += 1
                den_pos = self.tok.pos
                den = self.tok.take_int()
                if den == 0:
                    raise ParseError("zero denominator", den_pos)
                return {(): Fraction(num, den)}
            return {(): Fraction(num)}
        raise ParseError(f"unexpected character {ch!r}", pos)

    # raw term representation: dict[ tuple[(var, exp), ...] sorted ] -> Fraction
    @staticmethod
    def _radd(a, b):
        out = dict(a)
        for key, coeff in b.items():
            acc = out.get(key, Fraction(0)) + coeff
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        return out

    @staticmethod
    def _rscale(a, k):
        return {key: coeff * k for key, coeff in a.items()}

    @staticmethod
    def _rmul(a, b):
        out: dict = {}
        for k1, c1 in a.items():
            for k2, c2 in b.items():
                merged: dict[int, int] = {}
                for var, e in k1 + k2:
                    merged[var] = merged.get(var, 0) + e
                key = tuple(sorted(merged.items()))
                acc = out.get(key, Fraction(0)) + c1 * c2
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
        return out

    @classmethod
    def _rpow(cls, a, power):
        result = {(): Fraction(1)}
        base = a
        while power:
            if power & 1:
                result = cls._rmul(result, base)
            base = cls._rmul(base, base)
            power >>= 1
        return result


def parse_polynomial(text: str, dim: int | None = None) -> Polynomial:
    """Parse polynomial text (variables x1..xd, rationals p/q, operators + - * ^).

    With ``dim=None`` the dimension is inferred as the largest variable index
    present (0 for a constant).
    """
    parser = _Parser(text, dim)
    raw = parser.parse()
    final_dim = dim if dim is not None else parser.max_var
    terms: dict[Exponents, Fraction] = {}
    for key, coeff in raw.items():
        exps = [0] * final_dim
        for var, e in key:
            exps[var - 1] = e
        terms[tuple(exps)] = coeff
    return Polynomial(final_dim, terms)
