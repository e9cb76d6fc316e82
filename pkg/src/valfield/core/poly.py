"""Dense univariate polynomials over an arbitrary exact field.

Coefficients are stored lowest degree first.  A field object only has to
provide ``zero``, ``one`` and ``__call__`` (coercion of ints and of elements
of its subfields); coefficients must support the usual arithmetic operators.
"""

from __future__ import annotations

from fractions import Fraction

NEG_INF = float("-inf")


def sort_key(c):
    """A deterministic ordering key for a field element."""
    if isinstance(c, Fraction):
        return (c.numerator, c.denominator)
    if isinstance(c, int):
        return (c, 1)
    return c.sort_key()


class Poly:
    __slots__ = ("field", "coeffs", "var", "_hash")

    def __init__(self, field, coeffs=(), var="x"):
        cs = [field(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)
        self.var = var
        self._hash = None

    @classmethod
    def _raw(cls, field, coeffs, var):
        # trusted constructor: coefficients already in the field
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        p = object.__new__(cls)
        p.field = field
        p.coeffs = tuple(cs)
        p.var = var
        p._hash = None
        return p

    @classmethod
    def gen(cls, field, var="x"):
        return cls._raw(field, (field.zero, field.one), var)

    @classmethod
    def constant(cls, field, c, var="x"):
        return cls._raw(field, (field(c),), var)

    @classmethod
    def monomial(cls, field, n, c=None, var="x"):
        c = field.one if c is None else field(c)
        return cls._raw(field, (field.zero,) * n + (c,), var)

    # -- basic queries ---------------------------------------------------

    def degree(self):
        """Degree; the zero polynomial has degree ``NEG_INF``."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def is_constant(self):
        return len(self.coeffs) <= 1

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if not self.coeffs:
            return other == 0
        return len(self.coeffs) == 1 and self.coeffs[0] == other

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def sort_key(self):
        return (len(self.coeffs),) + tuple(sort_key(c) for c in reversed(self.coeffs))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        return Poly._raw(self.field, (self.field(other),), self.var)

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly._raw(self.field, out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.field, [-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.field(other)
            if not c:
                return Poly._raw(self.field, (), self.var)
            return Poly._raw(self.field, [c * a for a in self.coeffs], self.var)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(self.field, (), self.var)
        zero = self.field.zero
        out = [zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return Poly._raw(self.field, out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly._raw(self.field, (self.field.one,), self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        inv = self.field.one / other.coeffs[-1]
        if len(rem) - 1 < db:
            return Poly._raw(self.field, (), self.var), self
        quo = [self.field.zero] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if not c:
                continue
            q = c * inv
            quo[k - db] = q
            for j in range(db + 1):
                rem[k - db + j] = rem[k - db + j] - q * bc[j]
        return Poly._raw(self.field, quo, self.var), Poly._raw(self.field, rem[:db], self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        if isinstance(other, Poly):
            q, r = divmod(self, other)
            if r:
                raise ValueError("inexact polynomial division")
            return q
        return self * (self.field.one / self.field(other))

    # -- evaluation and transforms ----------------------------------------

    def __call__(self, value):
        if isinstance(value, Poly):
            return self.compose(value)
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * value + c
        if acc is None:
            return self.field.zero
        return acc

    def compose(self, other):
        acc = Poly._raw(self.field, (), other.var)
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def derivative(self):
        f = self.field
        return Poly._raw(f, [f(i) * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def monic(self):
        if not self.coeffs or self.coeffs[-1] == self.field.one:
            return self
        return self * (self.field.one / self.coeffs[-1])

    def map_coeffs(self, fn, field=None, var=None):
        field = self.field if field is None else field
        return Poly._raw(field, [field(fn(c)) for c in self.coeffs], self.var if var is None else var)

    def change_field(self, field):
        return Poly._raw(field, [field(c) for c in self.coeffs], self.var)

    def with_var(self, var):
        return Poly._raw(self.field, self.coeffs, var)

    def powmod(self, n, modulus):
        result = Poly._raw(self.field, (self.field.one,), self.var)
        base = self % modulus
        while n:
            if n & 1:
                result = (result * base) % modulus
            n >>= 1
            if n:
                base = (base * base) % modulus
        return result

    def valuation_at_zero(self):
        """Index of the lowest nonzero coefficient (``None`` for zero)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    # -- rendering --------------------------------------------------------

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            terms.append(_render_term(c, i, self.var, self.field))
        out = terms[0]
        for t in terms[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out


def _render_coeff(c):
    s = str(c)
    if any(ch in s[1:] for ch in "+-/ ") or (s.startswith("-") and "/" in s):
        return f"({s})"
    return s


def _render_term(c, i, var, field):
    mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
    if not mono:
        return _render_coeff(c)
    if c == field.one:
        return mono
    if c == -field.one:
        return "-" + mono
    return f"{_render_coeff(c)}*{mono}"


def poly_divmod(a: Poly, b: Poly):
    """Quotient and remainder with ``a == q*b + r`` and ``deg r < deg b``."""
    return divmod(a, b)


def poly_xgcd(a: Poly, b: Poly):
    """Return ``(g, s, t)`` with ``g = s*a + t*b`` and ``g`` monic (or zero)."""
    f = a.field
    one = Poly._raw(f, (f.one,), a.var)
    zero = Poly._raw(f, (), a.var)
    r0, r1, s0, s1, t0, t1 = a, b, one, zero, zero, one
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0:
        inv = f.one / r0.lc()
        return r0 * inv, s0 * inv, t0 * inv
    return r0, s0, t0


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; ``gcd(a, 0) == monic(a)``."""
    while b:
        a, b = b, a % b
    return a.monic()
