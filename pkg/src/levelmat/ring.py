"""Coefficient fields, standard graded polynomial rings and sparse polynomials.

A polynomial is an immutable map from exponent tuples to nonzero
coefficients.  Over the rationals coefficients are ``int`` or
``Fraction``; over GF(p) they are ints in ``range(p)``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from operator import add
from typing import Iterable, Mapping, Sequence

from .errors import CharacteristicError, ParseError, RingMismatchError
from .claims import claims

DEFAULT_MODULUS = 32003
MAX_EXPONENT = 2**31 - 1
MINUS_INFINITY = float("-inf")

_VAR_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class _AnyDegree:
    """Marker returned by :func:`is_homogeneous` for the zero polynomial."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ANY_DEGREE"


ANY_DEGREE = _AnyDegree()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Either the rationals (``p == 0``) or the prime field GF(p), 2 < p < 2**31."""

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p:
            if not (2 < p < 2**31) or not is_prime(p):
                raise ValueError(f"modulus must be a prime with 2 < p < 2^31, got {p}")
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int = DEFAULT_MODULUS) -> "Field":
        return cls(p)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_prime_field(self) -> bool:
        return self.p != 0

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"GF({self.p})" if self.p else "QQ"

    def __call__(self, value) -> int | Fraction:
        """Coerce an int, Fraction or numeric string into the field."""
        if isinstance(value, str):
            value = Fraction(value)
        p = self.p
        if not p:
            if isinstance(value, Fraction):
                return value.numerator if value.denominator == 1 else value
            return int(value)
        if isinstance(value, Fraction):
            den = value.denominator % p
            if den == 0:
                raise CharacteristicError(f"denominator {value.denominator} is not invertible mod {p}")
            return value.numerator * pow(den, -1, p) % p
        return int(value) % p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(a, -1, self.p)
        return 1 / Fraction(a)

    def div(self, a, b):
        if self.p:
            return a * self.inv(b) % self.p
        q = Fraction(a) / Fraction(b)
        return q.numerator if q.denominator == 1 else q

    def neg(self, a):
        return (-a) % self.p if self.p else -a

    def format(self, c) -> str:
        """Shortest readable representative; symmetric residues over GF(p)."""
        if self.p and c > self.p // 2:
            c = c - self.p
        return str(c)

    def random_element(self, rng, nonzero: bool = True):
        if self.p:
            return rng.randrange(1 if nonzero else 0, self.p)
        while True:
            c = rng.randint(-(2**15), 2**15)
            if c or not nonzero:
                return c

    def to_json(self) -> dict:
        return {"field": "fp", "modulus": self.p} if self.p else {"field": "qq"}


QQ = Field(0)


def degrevlex_key(exp: Sequence[int]):
    """Sort key realising degree reverse lexicographic order (larger key = larger monomial)."""
    return (sum(exp), tuple(-e for e in reversed(exp)))


class PolyRing:
    """Standard graded polynomial ring k[x_1..x_n] with every variable of degree one."""

    __slots__ = ("variables", "field", "n", "_index")

    def __init__(self, variables: Sequence[str] | str, field: Field = QQ):
        if isinstance(variables, str):
            variables = [v.strip() for v in variables.replace(",", " ").split()]
        variables = tuple(variables)
        if not variables:
            raise ValueError("a ring needs at least one variable")
        for v in variables:
            if not isinstance(v, str) or not _VAR_RE.match(v):
                raise ValueError(f"invalid variable name {v!r}")
        if len(set(variables)) != len(variables):
            raise ValueError("variable names must be distinct")
        self.variables = variables
        self.field = field
        self.n = len(variables)
        self._index = {v: i for i, v in enumerate(variables)}

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.variables == other.variables and self.field == other.field

    def __hash__(self):
        return hash((self.variables, self.field))

    def __repr__(self):
        return f"{self.field!r}[{','.join(self.variables)}]"

    def index(self, var: str) -> int:
        try:
            return self._index[var]
        except KeyError:
            raise ValueError(f"unknown variable {var!r} in {self!r}") from None

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {}, _trusted=True)

    @property
    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {(0,) * self.n: c} if c else {}, _trusted=True)

    def gen(self, var: str | int) -> "Polynomial":
        i = var if isinstance(var, int) else self.index(var)
        exp = [0] * self.n
        exp[i] = 1
        return Polynomial(self, {tuple(exp): 1}, _trusted=True)

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.n)]

    def monomial(self, exp: Sequence[int], coeff=1) -> "Polynomial":
        return Polynomial(self, {tuple(exp): coeff})

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring != self:
                return value.change_ring(self)
            return value
        if isinstance(value, str):
            return self.parse(value)
        return self.constant(value)

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()

    def with_field(self, field: Field) -> "PolyRing":
        return PolyRing(self.variables, field)

    def monomials(self, degree: int) -> list[tuple[int, ...]]:
        """All exponent vectors of the given total degree, degrevlex-descending."""
        if degree < 0:
            return []
        out = []

        def rec(prefix, remaining, slots):
            if slots == 1:
                out.append(prefix + (remaining,))
                return
            for e in range(remaining, -1, -1):
                rec(prefix + (e,), remaining - e, slots - 1)

        rec((), degree, self.n)
        out.sort(key=degrevlex_key, reverse=True)
        return out

    def to_json(self) -> dict:
        return {"vars": list(self.variables), **self.field.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "PolyRing":
        field = field_from_options(data.get("field", "qq"), data.get("modulus"))
        return cls(data.get("vars", ["x", "y", "z"]), field)


def field_from_options(kind: str = "qq", modulus: int | None = None) -> Field:
    kind = (kind or "qq").lower()
    if kind in ("qq", "q", "rationals"):
        return QQ
    if kind in ("fp", "gf", "prime"):
        return Field(modulus or DEFAULT_MODULUS)
    raise ValueError(f"unknown field {kind!r}")


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping | None = None, *, _trusted: bool = False):
        self.ring = ring
        if _trusted:
            self.terms = terms
        else:
            field = ring.field
            clean = {}
            for exp, c in (terms or {}).items():
                exp = tuple(exp)
                if len(exp) != ring.n or any(e < 0 for e in exp):
                    raise ValueError(f"bad exponent vector {exp} for {ring!r}")
                if any(e > MAX_EXPONENT for e in exp):
                    raise OverflowError("exponent exceeds machine range")
                c = field(c)
                if c:
                    clean[exp] = c
            self.terms = clean
        self._hash = None

    # basic queries

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def degree(self):
        if not self.terms:
            return MINUS_INFINITY
        return max(sum(e) for e in self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coefficient(self):
        return self.terms.get((0,) * self.ring.n, 0)

    def coefficient(self, exp: Sequence[int]):
        return self.terms.get(tuple(exp), 0)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        """Terms in degrevlex-descending order."""
        return sorted(self.terms.items(), key=lambda t: degrevlex_key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=degrevlex_key)
        return exp, self.terms[exp]

    def homogeneous_degree(self):
        return is_homogeneous(self)

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _combine(self, other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _combine(self, other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _combine(other, self, -1)

    def __neg__(self):
        f = self.ring.field
        return Polynomial(self.ring, {e: f.neg(c) for e, c in self.terms.items()}, _trusted=True)

    def __pos__(self):
        return self

    def scale(self, c) -> "Polynomial":
        field = self.ring.field
        c = field(c)
        if not c:
            return self.ring.zero
        p = field.p
        if p:
            return Polynomial(self.ring, {e: v * c % p for e, v in self.terms.items()}, _trusted=True)
        return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return self.ring.zero
        if self.degree() + other.degree() > MAX_EXPONENT:
            raise OverflowError("exponent exceeds machine range")
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(map(add, ea, eb))
                out[e] = get(e, 0) + ca * cb
        p = self.ring.field.p
        if p:
            out = {e: c % p for e, c in out.items() if c % p}
        else:
            out = {e: c for e, c in out.items() if c}
        return Polynomial(self.ring, out, _trusted=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if other.is_constant() and other:
                other = other.constant_coefficient()
            else:
                return self.exact_div(other)
        field = self.ring.field
        try:
            c = field(other)
        except CharacteristicError as exc:
            raise ZeroDivisionError(str(exc)) from None
        return self.scale(field.inv(c))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        if self.terms and self.degree() * k > MAX_EXPONENT:
            raise OverflowError("exponent exceeds machine range")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def exact_div(self, divisor: "Polynomial") -> "Polynomial":
        """Quotient of an exact division; raises ``ArithmeticError`` when a remainder is left."""
        divisor = self._coerce(divisor)
        if not divisor:
            raise ZeroDivisionError("division by the zero polynomial")
        field = self.ring.field
        lt, lc = divisor.leading_term()
        inv = field.inv(lc)
        rem = dict(self.terms)
        quot: dict = {}
        p = field.p
        while rem:
            e = max(rem, key=degrevlex_key)
            if any(x < y for x, y in zip(e, lt)):
                raise ArithmeticError("division is not exact")
            q = tuple(x - y for x, y in zip(e, lt))
            c = rem[e] * inv
            if p:
                c %= p
            quot[q] = c
            for de, dc in divisor.terms.items():
                k = tuple(map(add, de, q))
                v = rem.get(k, 0) - c * dc
                if p:
                    v %= p
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return Polynomial(self.ring, quot, _trusted=True)

    def diff(self, var: str | int) -> "Polynomial":
        i = var if isinstance(var, int) else self.ring.index(var)
        p = self.ring.field.p
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                v = c * e[i]
                if p:
                    v %= p
                if v:
                    ne = list(e)
                    ne[i] -= 1
                    out[tuple(ne)] = v
        return Polynomial(self.ring, out, _trusted=True)

    def evaluate(self, point: Sequence | Mapping):
        """Value at a point of k^n (sequence in variable order or mapping name -> value)."""
        if isinstance(point, Mapping):
            point = [point[v] for v in self.ring.variables]
        field = self.ring.field
        vals = [field(v) for v in point]
        total = 0
        p = field.p
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t = t * (pow(v, k, p) if p else v**k)
            total += t
            if p:
                total %= p
        return field(total) if not p else total

    def change_ring(self, ring: PolyRing) -> "Polynomial":
        """Reinterpret in a ring with the same variables (for instance reduce mod p)."""
        if ring.variables != self.ring.variables:
            raise RingMismatchError("rings have different variables")
        if ring == self.ring:
            return self
        return Polynomial(ring, self.terms)

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        _, lc = self.leading_term()
        return self.scale(self.ring.field.inv(lc))

    def primitive(self) -> "Polynomial":
        """Over QQ, the integral primitive multiple with positive leading coefficient."""
        if not self.terms or self.ring.field.p:
            return self.monic()
        coeffs = [Fraction(c) for c in self.terms.values()]
        den = math.lcm(*(c.denominator for c in coeffs))
        num = math.gcd(*(int(c * den) for c in coeffs))
        f = self.scale(Fraction(den, num))
        return -f if f.leading_term()[1] < 0 else f

    # comparison, hashing, printing

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            try:
                return self.terms == self.ring.constant(other).terms
            except CharacteristicError:
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self!s})"

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.variables
        field = self.ring.field
        parts = []
        for exp, c in self.sorted_terms():
            cs = field.format(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(exp) if k
            )
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                body = f"{cs}*{mono}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)


def _combine(f: Polynomial, g: Polynomial, sign: int) -> Polynomial:
    out = dict(f.terms)
    p = f.ring.field.p
    for e, c in g.terms.items():
        v = out.get(e, 0) + (c if sign > 0 else -c)
        if p:
            v %= p
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return Polynomial(f.ring, out, _trusted=True)


@claims("homogeneous-generators")
def is_homogeneous(f: Polynomial):
    """Common total degree of all terms, ``None`` if mixed, ``ANY_DEGREE`` for zero."""
    if not f.terms:
        return ANY_DEGREE
    degs = {sum(e) for e in f.terms}
    return degs.pop() if len(degs) == 1 else None


def poly_op(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    if f.ring != g.ring:
        raise RingMismatchError(f"{f.ring!r} vs {g.ring!r}")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def parse_poly(ring: PolyRing, text: str) -> Polynomial:
    return ring.parse(text)


@claims("jacobian-ideal")
def partial_derivative(f: Polynomial, var: str) -> Polynomial:
    return f.diff(var)


# parsing

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


class _Parser:
    """Recursive descent over: expr := term (('+'|'-') term)*;
    term := unary (('*'|'/') unary)*; unary := ('+'|'-') unary | power;
    power := atom ('^' INT)?; atom := INT | VAR | '(' expr ')'."""

    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None or m.end() == pos:
                break
            start = m.start(m.lastindex) if m.lastindex else pos
            if m.group(1) is not None:
                self.tokens.append(("int", m.group(1), start))
            elif m.group(2) is not None:
                self.tokens.append(("var", m.group(2), start))
            elif m.group(3) is not None:
                ch = m.group(3)
                if ch not in "+-*/^()":
                    raise ParseError(f"unexpected character {ch!r}", start, text)
                self.tokens.append(("op", ch, start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ParseError("empty expression", 0, self.text)
        f = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r} (implicit multiplication is not allowed)", pos, self.text)
        return f

    def expr(self) -> Polynomial:
        f = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                g = self.term()
                f = f + g if val == "+" else f - g
            else:
                return f

    def term(self) -> Polynomial:
        f = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                g = self.unary()
                if val == "*":
                    f = f * g
                else:
                    if not g.is_constant() or not g:
                        raise ParseError("division by non-unit constant", pos, self.text)
                    f = f.scale(self.ring.field.inv(g.constant_coefficient()))
            else:
                return f

    def unary(self) -> Polynomial:
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            f = self.unary()
            return -f if val == "-" else f
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer literal", pos, self.text)
            k = int(val)
            if k > MAX_EXPONENT:
                raise OverflowError("exponent exceeds machine range")
            return base**k
        return base

    def atom(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "int":
            try:
                return self.ring.constant(int(val))
            except CharacteristicError as exc:  # pragma: no cover - ints always coerce
                raise ParseError(str(exc), pos, self.text) from None
        if kind == "var":
            if val not in self.ring._index:
                raise ParseError(f"unknown variable {val!r}", pos, self.text)
            return self.ring.gen(val)
        if kind == "op" and val == "(":
            f = self.expr()
            kind, val, pos2 = self.take()
            if kind != "op" or val != ")":
                raise ParseError("expected ')'", pos2, self.text)
            return f
        if kind == "end":
            raise ParseError("unexpected end of input", pos, self.text)
        raise ParseError(f"unexpected {val!r}", pos, self.text)
