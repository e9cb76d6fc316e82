"""Exact coefficient fields: Q, F_{p^k}, rational function fields and simple extensions.

Every field object is callable and coerces integers and elements of its
subfields.  Elements are immutable and hashable.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache

from .poly import Poly, poly_gcd, poly_xgcd, sort_key


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


class RationalField:
    """The field Q; elements are :class:`fractions.Fraction`."""

    characteristic = 0
    order = None
    is_finite = False
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def __contains__(self, x):
        return isinstance(x, (Fraction, int))

    def random_element(self, rng, size=5):
        return Fraction(rng.randint(-size, size), rng.randint(1, size))

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


# --------------------------------------------------------------------------
# Finite fields
# --------------------------------------------------------------------------


class FFElem:
    """Element of F_{p^k}: coordinates over F_p in the power basis of the field's modulus."""

    __slots__ = ("field", "c")

    def __init__(self, field, c):
        self.field = field
        self.c = c

    def _other(self, other):
        if isinstance(other, FFElem) and other.field is self.field:
            return other
        return self.field(other)

    def __add__(self, other):
        o = self._other(other)
        p = self.field.p
        return FFElem(self.field, tuple((a + b) % p for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FFElem(self.field, tuple((-a) % p for a in self.c))

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if isinstance(other, Poly):
            return NotImplemented
        o = self._other(other)
        return FFElem(self.field, self.field._mul(self.c, o.c))

    __rmul__ = __mul__

    def inverse(self):
        if not any(self.c):
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.field._inv(self)

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def __rtruediv__(self, other):
        return self._other(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, FFElem):
            return self.c == other.c and self.field == other.field
        if isinstance(other, int):
            return self.c == self.field(other).c
        return NotImplemented

    def __hash__(self):
        if len(self.c) == 1:
            return hash(self.c[0])
        return hash(self.c)

    def sort_key(self):
        return tuple(reversed(self.c))

    def __repr__(self):
        return str(self)

    def __str__(self):
        if len(self.c) == 1:
            return str(self.c[0])
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if not a:
                continue
            mono = "" if i == 0 else "a" if i == 1 else f"a^{i}"
            if not mono:
                terms.append(str(a))
            elif a == 1:
                terms.append(mono)
            else:
                terms.append(f"{a}*{mono}")
        return " + ".join(terms) if terms else "0"


def _irreducible_mod_p(coeffs, p):
    """Trial division irreducibility test for a monic polynomial over F_p (low first)."""
    n = len(coeffs) - 1
    for d in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = list(tail) + [1]
            rem = list(coeffs)
            for k in range(n, d - 1, -1):
                q = rem[k] % p
                if q:
                    for j in range(d + 1):
                        rem[k - d + j] = (rem[k - d + j] - q * div[j]) % p
            if not any(r % p for r in rem[:d]):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, k: int) -> tuple:
    """Lexicographically least monic irreducible of degree ``k`` over F_p.

    Candidates x^k + c_{k-1}x^{k-1} + ... + c_0 are ordered by the integer
    sum c_i p^i, i.e. lexicographically on (c_{k-1}, ..., c_0).
    """
    for code in range(p ** k):
        coeffs = []
        v = code
        for _ in range(k):
            coeffs.append(v % p)
            v //= p
        coeffs.append(1)
        if k == 1 or (coeffs[0] != 0 and _irreducible_mod_p(coeffs, p)):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FiniteField:
    """F_{p^k} with the lexicographically least irreducible modulus."""

    is_finite = True

    def __init__(self, p: int, k: int = 1):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be positive")
        self.p = p
        self.k = k
        self.characteristic = p
        self.order = p ** k
        self.modulus = least_irreducible(p, k)
        self.zero = FFElem(self, (0,) * k)
        self.one = FFElem(self, (1,) + (0,) * (k - 1))

    def __call__(self, x):
        if isinstance(x, FFElem):
            if x.field is self or x.field == self:
                return x if x.field is self else FFElem(self, x.c)
            raise TypeError(f"cannot coerce {x!r} into {self!r}")
        if isinstance(x, int):
            return FFElem(self, (x % self.p,) + (0,) * (self.k - 1))
        if isinstance(x, Fraction):
            return self(x.numerator) / self(x.denominator)
        raise TypeError(f"cannot coerce {x!r} into {self!r}")

    def from_coords(self, coords):
        coords = [c % self.p for c in coords]
        coords += [0] * (self.k - len(coords))
        return FFElem(self, tuple(coords))

    def gen(self):
        """The class of the indeterminate modulo the field modulus."""
        if self.k == 1:
            return self.from_coords([-self.modulus[0]])
        return self.from_coords([0, 1])

    def __contains__(self, x):
        return isinstance(x, FFElem) and x.field == self

    def _mul(self, a, b):
        p, k = self.p, self.k
        if k == 1:
            return ((a[0] * b[0]) % p,)
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        m = self.modulus
        for d in range(2 * k - 2, k - 1, -1):
            q = prod[d] % p
            if q:
                for j in range(k + 1):
                    prod[d - k + j] -= q * m[j]
        return tuple(c % p for c in prod[:k])

    def _inv(self, a):
        if self.k == 1:
            return FFElem(self, (pow(a.c[0], -1, self.p),))
        return a ** (self.order - 2)

    def elements(self):
        for coords in itertools.product(range(self.p), repeat=self.k):
            yield FFElem(self, tuple(coords))

    def random_element(self, rng, size=None):
        return FFElem(self, tuple(rng.randrange(self.p) for _ in range(self.k)))

    def pth_root(self, a):
        return a ** (self.order // self.p)

    def is_pth_power(self, a):
        return True

    def frobenius_inverse(self, a):
        return self.pth_root(a)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash(("GF", self.p, self.k))

    def __repr__(self):
        return f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"


@lru_cache(maxsize=None)
def GF(p: int, k: int = 1) -> FiniteField:
    return FiniteField(p, k)


# --------------------------------------------------------------------------
# Rational function fields
# --------------------------------------------------------------------------


class RatFunc:
    """Reduced fraction num/den with monic denominator."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field, num, den=None, _reduced=False):
        self.field = field
        self._hash = None
        if den is None:
            self.num = num
            self.den = Poly.constant(field.const, 1, field.var)
            return
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            g = poly_gcd(num, den)
            if g.degree() > 0:
                num, den = num // g, den // g
            lc = den.lc()
            if lc != field.const.one:
                inv = field.const.one / lc
                num, den = num * inv, den * inv
        self.num = num
        self.den = den

    def _other(self, other):
        if isinstance(other, RatFunc) and other.field is self.field:
            return other
        return self.field(other)

    def __add__(self, other):
        o = self._other(other)
        if self.den == o.den:
            return RatFunc(self.field, self.num + o.num, self.den)
        return RatFunc(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.field, -self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if isinstance(other, Poly):
            return NotImplemented
        o = self._other(other)
        return RatFunc(self.field, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.field, self.den, self.num)

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def __rtruediv__(self, other):
        return self._other(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.field, self.num ** n, self.den ** n, _reduced=True)

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        try:
            o = self.field(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            if self.den.degree() == 0:
                self._hash = hash(self.num) if self.num.degree() > 0 else hash(self.num[0])
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    def sort_key(self):
        return (self.den.sort_key(), self.num.sort_key())

    def is_constant(self):
        return self.num.degree() <= 0 and self.den.degree() == 0

    def __repr__(self):
        return str(self)

    def __str__(self):
        if self.den.degree() == 0:
            return str(self.num)
        n = str(self.num)
        if self.num.degree() > 0 and len(self.num.coeffs) - self.num.coeffs.count(self.field.const.zero) > 1:
            n = f"({n})"
        d = str(self.den)
        if len(self.den.coeffs) - self.den.coeffs.count(self.field.const.zero) > 1:
            d = f"({d})"
        return f"{n}/{d}"


class RatFuncField:
    """The rational function field ``const(var)``."""

    is_finite = False
    order = None

    def __init__(self, const, var="t"):
        self.const = const
        self.var = var
        self.characteristic = const.characteristic
        self.zero = RatFunc(self, Poly(const, (), var))
        self.one = RatFunc(self, Poly(const, (1,), var))

    def __call__(self, x):
        if isinstance(x, RatFunc):
            if x.field is self:
                return x
            if x.field == self:
                return RatFunc(self, x.num, x.den, _reduced=True)
            return RatFunc(self, Poly.constant(self.const, self.const(x), self.var))
        if isinstance(x, Poly):
            if x.var == self.var and x.field == self.const:
                return RatFunc(self, x)
            raise TypeError(f"cannot coerce {x!r} into {self!r}")
        return RatFunc(self, Poly.constant(self.const, self.const(x), self.var))

    def gen(self):
        return RatFunc(self, Poly.gen(self.const, self.var))

    def __contains__(self, x):
        return isinstance(x, RatFunc) and x.field == self

    def random_element(self, rng, size=3):
        def rp(d):
            return Poly(self.const, [self.const.random_element(rng) for _ in range(d + 1)], self.var)

        num = rp(rng.randint(0, size))
        den = rp(rng.randint(0, size))
        while not den:
            den = rp(rng.randint(0, size))
        return RatFunc(self, num, den)

    def is_pth_power(self, a):
        p = self.characteristic
        for poly in (a.num, a.den):
            for i, c in enumerate(poly.coeffs):
                if c and (i % p or not self.const.is_pth_power(c)):
                    return False
        return True

    def pth_root(self, a):
        p = self.characteristic

        def root(poly):
            cs = [self.const.pth_root(c) for c in poly.coeffs[::p]]
            return Poly(self.const, cs, self.var)

        return RatFunc(self, root(a.num), root(a.den))

    def __eq__(self, other):
        return isinstance(other, RatFuncField) and self.var == other.var and self.const == other.const

    def __hash__(self):
        return hash(("RatFunc", self.const, self.var))

    def __repr__(self):
        return f"{self.const!r}({self.var})"


# --------------------------------------------------------------------------
# Simple algebraic extensions
# --------------------------------------------------------------------------


class ExtElem:
    __slots__ = ("field", "p")

    def __init__(self, field, p):
        self.field = field
        self.p = p

    def _other(self, other):
        if isinstance(other, ExtElem) and other.field is self.field:
            return other
        return self.field(other)

    def __add__(self, other):
        return ExtElem(self.field, self.p + self._other(other).p)

    __radd__ = __add__

    def __neg__(self):
        return ExtElem(self.field, -self.p)

    def __sub__(self, other):
        return ExtElem(self.field, self.p - self._other(other).p)

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if isinstance(other, Poly):
            return NotImplemented
        return ExtElem(self.field, (self.p * self._other(other).p) % self.field.modulus)

    __rmul__ = __mul__

    def inverse(self):
        if not self.p:
            raise ZeroDivisionError("inverse of zero in an extension field")
        g, s, _ = poly_xgcd(self.p, self.field.modulus)
        return ExtElem(self.field, s % self.field.modulus)

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def __rtruediv__(self, other):
        return self._other(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return ExtElem(self.field, self.p.powmod(n, self.field.modulus))

    def __bool__(self):
        return bool(self.p)

    def __eq__(self, other):
        if isinstance(other, ExtElem) and other.field == self.field:
            return self.p == other.p
        try:
            o = self.field(other)
        except TypeError:
            return NotImplemented
        return self.p == o.p

    def __hash__(self):
        if self.p.degree() <= 0:
            return hash(self.p[0])
        return hash(self.p)

    def sort_key(self):
        return self.p.sort_key()

    def in_base(self):
        """Return the element as a base-field element if it lies there, else None."""
        if self.p.degree() <= 0:
            return self.p[0]
        return None

    def __repr__(self):
        return str(self)

    def __str__(self):
        return f"[{self.p}]"


class ExtField:
    """``base[z]/(modulus)`` for a monic irreducible ``modulus``."""

    def __init__(self, base, modulus: Poly, name="z"):
        if modulus.degree() < 2:
            raise ValueError("extension modulus must have degree >= 2")
        self.base = base
        self.modulus = modulus.monic().with_var(name)
        self.degree = modulus.degree()
        self.name = name
        self.characteristic = base.characteristic
        self.is_finite = base.is_finite
        self.order = base.order ** self.degree if base.is_finite else None
        self.zero = ExtElem(self, Poly(base, (), name))
        self.one = ExtElem(self, Poly(base, (1,), name))

    def __call__(self, x):
        if isinstance(x, ExtElem):
            if x.field is self:
                return x
            if x.field == self:
                return ExtElem(self, x.p)
        if isinstance(x, Poly) and x.field == self.base:
            return ExtElem(self, x.with_var(self.name) % self.modulus)
        return ExtElem(self, Poly.constant(self.base, self.base(x), self.name))

    def gen(self):
        return ExtElem(self, Poly.gen(self.base, self.name))

    def contains_field(self, other):
        f = self
        while True:
            if f == other:
                return True
            if not isinstance(f, ExtField):
                return False
            f = f.base

    def __contains__(self, x):
        return isinstance(x, ExtElem) and x.field == self

    def random_element(self, rng, size=None):
        return ExtElem(self, Poly(self.base, [self.base.random_element(rng) for _ in range(self.degree)], self.name))

    def pth_root(self, a):
        if not self.is_finite:
            raise NotImplementedError("p-th roots only in finite extension fields")
        return a ** (self.order // self.characteristic)

    def is_pth_power(self, a):
        if self.is_finite:
            return True
        raise NotImplementedError("p-th power test over non-perfect extension fields")

    def prime_field(self):
        f = self
        while isinstance(f, ExtField):
            f = f.base
        return f

    def __eq__(self, other):
        return isinstance(other, ExtField) and self.base == other.base and self.modulus == other.modulus

    def __hash__(self):
        return hash(("Ext", self.base, self.modulus))

    def __repr__(self):
        return f"{self.base!r}[{self.name}]/({self.modulus})"


def element_sort_key(c):
    return sort_key(c)


def default_rng(seed=0):
    return random.Random(seed)
