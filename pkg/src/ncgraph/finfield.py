"""Exact arithmetic in GF(p^k) and polynomials over it.

Field elements are encoded as integers ``0 <= v < q``: the base-p digits of
``v`` are the coefficients (lowest degree first) of a polynomial in the
generator ``x`` reduced modulo the field's defining polynomial.  The defining
polynomial is the least monic irreducible of degree k under the same
integer encoding, so the same ``(p, k)`` always yields the same field.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache, reduce
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceeded, PreconditionError

MAX_FIELD_ORDER = 1 << 16
MAX_FACTOR_Q = 128


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    r = math.isqrt(n)
    for d in range(3, r + 1, 2):
        if n % d == 0:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``, or raise ValueError."""
    ps = prime_factors(q) if q > 1 else []
    if len(ps) != 1:
        raise PreconditionError(f"{q} is not a prime power")
    p = ps[0]
    k = round(math.log(q, p))
    if p**k != q:
        raise PreconditionError(f"{q} is not a prime power")
    return p, k


# -- raw polynomial helpers over GF(p), coefficient lists lowest degree first --

def _gfp_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    k = len(mod) - 1
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for j in range(k + 1):
                prod[d - k + j] = (prod[d - k + j] - c * mod[j]) % p
    return prod[:k] + [0] * max(0, k - len(prod))


def _gfp_has_root_or_factor(mod: Sequence[int], p: int) -> bool:
    """True when the monic GF(p) polynomial ``mod`` is reducible (trial division)."""
    k = len(mod) - 1
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = list(tail) + [1]
            rem = list(mod)
            for top in range(k, d - 1, -1):
                c = rem[top]
                if c:
                    for j in range(d + 1):
                        rem[top - d + j] = (rem[top - d + j] - c * div[j]) % p
            if not any(rem[:d]):
                return True
    return False


def _least_irreducible(p: int, k: int) -> tuple[int, ...]:
    if k == 1:
        return (0, 1)
    for code in range(p**k):
        low = [(code // p**i) % p for i in range(k)]
        cand = low + [1]
        if cand[0] == 0:
            continue
        if not _gfp_has_root_or_factor(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # unreachable


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(p^k) with a fixed defining polynomial."""

    p: int
    k: int
    modulus: tuple[int, ...] = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and (self.p, self.k, self.modulus) == (
            other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __str__(self) -> str:
        return f"GF({self.q})"

    # -- tables -----------------------------------------------------------

    @cached_property
    def digits(self) -> np.ndarray:
        v = np.arange(self.q, dtype=np.int64)
        return np.stack([(v // self.p**i) % self.p for i in range(self.k)], axis=1)

    @cached_property
    def _place(self) -> np.ndarray:
        return np.array([self.p**i for i in range(self.k)], dtype=np.int64)

    def _encode(self, coeffs: Sequence[int]) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(coeffs))

    def _slow_mul(self, a: int, b: int) -> int:
        da = [int(x) for x in self.digits[a]]
        db = [int(x) for x in self.digits[b]]
        return self._encode(_gfp_mulmod(da, db, self.modulus, self.p))

    @cached_property
    def generator(self) -> int:
        """Least (in integer encoding) element of multiplicative order q - 1."""
        q = self.q
        if q == 2:
            return 1
        cofactors = [(q - 1) // r for r in prime_factors(q - 1)]
        for g in range(2, q):
            if all(self._slow_pow(g, e) != 1 for e in cofactors):
                return g
        raise AssertionError("field has no primitive element")  # unreachable

    def _slow_pow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._slow_mul(result, base)
            base = self._slow_mul(base, base)
            e >>= 1
        return result

    @cached_property
    def exp_table(self) -> np.ndarray:
        """``exp_table[i] = g**i`` for ``0 <= i < 2(q-1)``."""
        n = self.q - 1
        out = np.empty(2 * n, dtype=np.int64)
        cur = 1
        g = self.generator
        if self.k == 1:
            for i in range(n):
                out[i] = cur
                cur = cur * g % self.p
        else:
            for i in range(n):
                out[i] = cur
                cur = self._slow_mul(cur, g)
        out[n:] = out[:n]
        return out

    @cached_property
    def log_table(self) -> np.ndarray:
        log = np.full(self.q, -1, dtype=np.int64)
        log[self.exp_table[: self.q - 1]] = np.arange(self.q - 1)
        return log

    @cached_property
    def add_table(self) -> np.ndarray | None:
        if self.q > 1024:
            return None
        d = self.digits
        s = (d[:, None, :] + d[None, :, :]) % self.p
        return (s * self._place).sum(axis=2)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return (((-self.digits) % self.p) * self._place).sum(axis=1)

    @cached_property
    def inv_table(self) -> np.ndarray:
        inv = np.zeros(self.q, dtype=np.int64)
        n = self.q - 1
        inv[1:] = self.exp_table[(n - self.log_table[1:]) % n]
        return inv

    # -- scalar operations on encoded ints --------------------------------

    @cached_property
    def _lists(self):
        q = self.q
        exp = self.exp_table.tolist()
        log = self.log_table.tolist()
        neg = self.neg_table.tolist()
        inv = self.inv_table.tolist()
        if self.k == 1 or self.p == 2 or q > 1024:
            add = None
        else:
            add = self.add_table.reshape(-1).tolist()
        return exp, log, neg, inv, add

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        add = self._lists[4]
        if add is not None:
            return add[a * self.q + b]
        return int(((self.digits[a] + self.digits[b]) % self.p) @ self._place)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self._lists[2][a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % self.p
        exp, log = self._lists[0], self._lists[1]
        return exp[log[a] + log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.k == 1:
            return pow(a, -1, self.p)
        return self._lists[3][a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        if self.k == 1:
            return pow(a, e, self.p)
        n = self.q - 1
        exp, log = self._lists[0], self._lists[1]
        return exp[(log[a] * e) % n]

    def from_int(self, c: int) -> int:
        """Image of the integer ``c`` under the ring map Z -> GF(q)."""
        return c % self.p

    def frobenius(self, a: int, times: int = 1) -> int:
        return self.pow(a, self.p**times)

    # -- vectorised operations ------------------------------------------

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        t = self.add_table
        if t is not None:
            return t[a, b]
        return (((self.digits[a] + self.digits[b]) % self.p) * self._place).sum(axis=-1)

    def vneg(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return (-a) % self.p
        return self.neg_table[a]

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return a * b % self.p
        la = self.log_table[a]
        lb = self.log_table[b]
        out = self.exp_table[np.where((a == 0) | (b == 0), 0, la + lb)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vsum(self, a: np.ndarray, axis: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return a.sum(axis=axis) % self.p
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        d = self.digits[a].sum(axis=axis if axis >= 0 else axis - 1) % self.p
        return (d * self._place).sum(axis=-1)

    def vpow(self, a: np.ndarray, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        n = self.q - 1
        out = self.exp_table[(self.log_table[a] * e) % n]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    # -- element constructors ------------------------------------------

    def __call__(self, value: int) -> "FieldElement":
        if not 0 <= value < self.q:
            raise PreconditionError(f"{value} is not an element code of {self}")
        return FieldElement(self, int(value))

    def elements(self) -> Iterator["FieldElement"]:
        for v in range(self.q):
            yield FieldElement(self, v)

    def nonzero(self) -> Iterator["FieldElement"]:
        for v in range(1, self.q):
            yield FieldElement(self, v)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)


@lru_cache(maxsize=None)
def field_make(p: int, k: int = 1) -> FieldSpec:
    """Construct GF(p^k) with its deterministic defining polynomial."""
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if k < 1:
        raise PreconditionError("extension degree must be positive")
    if p**k >= 1 << 63:
        raise OverflowError(f"{p}^{k} does not fit in 64 bits")
    if p**k > MAX_FIELD_ORDER:
        raise CapExceeded(f"GF({p}^{k}) exceeds the field-order cap {MAX_FIELD_ORDER}")
    return FieldSpec(p, k, _least_irreducible(p, k))


def gf(q: int) -> FieldSpec:
    """GF(q) for a prime power q."""
    p, k = prime_power(q)
    return field_make(p, k)


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise PreconditionError("elements of different fields")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.spec.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.spec, self.spec.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.spec, self.spec.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.spec, self.spec.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.spec, self.spec.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.spec, self.spec.div(self.value, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.spec, self.spec.div(o, self.value))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.spec}({self.value})"


def primitive_element(spec: FieldSpec) -> FieldElement:
    return FieldElement(spec, spec.generator)


def element_order(x: FieldElement) -> int:
    if x.value == 0:
        raise PreconditionError("zero has no multiplicative order")
    n = x.spec.q - 1
    order = n
    for r in prime_factors(n):
        while order % r == 0 and x.spec.pow(x.value, order // r) == 1:
            order //= r
    return order


class Poly:
    """Immutable univariate polynomial over a :class:`FieldSpec`.

    ``coeffs[i]`` is the encoded coefficient of ``x**i``; the leading
    coefficient is nonzero unless the polynomial is zero (empty tuple).
    """

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs: Iterable[int | FieldElement]):
        cs = [c.value if isinstance(c, FieldElement) else int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def x(cls, spec: FieldSpec) -> "Poly":
        return cls(spec, (0, 1))

    @classmethod
    def constant(cls, spec: FieldSpec, c: int) -> "Poly":
        return cls(spec, (c,))

    @classmethod
    def monomial(cls, spec: FieldSpec, degree: int, c: int = 1) -> "Poly":
        return cls(spec, [0] * degree + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.spec, self.coeffs))

    def __add__(self, other: "Poly") -> "Poly":
        f = self.spec
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(f, [f.add(self[i], other[i]) for i in range(n)])

    def __neg__(self) -> "Poly":
        return Poly(self.spec, [self.spec.neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        f = self.spec
        if isinstance(other, (int, FieldElement)):
            c = other.value if isinstance(other, FieldElement) else f.from_int(other)
            return Poly(f, [f.mul(a, c) for a in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return Poly(f, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Poly(f, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        result = Poly(self.spec, (1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        f = self.spec
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        inv_lead = f.inv(other.lead())
        quot = [0] * max(0, len(rem) - d)
        for top in range(len(rem) - 1, d - 1, -1):
            c = rem[top]
            if c:
                c = f.mul(c, inv_lead)
                quot[top - d] = c
                for j, b in enumerate(other.coeffs):
                    rem[top - d + j] = f.sub(rem[top - d + j], f.mul(c, b))
        return Poly(f, quot), Poly(f, rem[:d])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * self.spec.inv(self.lead())

    def __call__(self, x: int | FieldElement) -> FieldElement:
        f = self.spec
        v = x.value if isinstance(x, FieldElement) else int(x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, v), c)
        return FieldElement(f, acc)

    def powmod(self, e: int, mod: "Poly") -> "Poly":
        result = Poly(self.spec, (1,)) % mod
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if c == 1 and i:
                terms.append(mono)
            elif i:
                terms.append(f"{c}*{mono}")
            else:
                terms.append(str(c))
        return " + ".join(terms)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def monic_polys(spec: FieldSpec, degree: int) -> Iterator[Poly]:
    """All monic polynomials of the given degree, in integer-encoding order."""
    for tail in itertools.product(range(spec.q), repeat=degree):
        yield Poly(spec, tuple(reversed(tail)) + (1,))


def _trial_division_feasible(spec: FieldSpec, degree: int, budget: int = 5_000) -> bool:
    total = sum(spec.q**d for d in range(1, degree // 2 + 1))
    return total <= budget


def _irreducible_by_trial_division(f: Poly) -> bool:
    for d in range(1, f.degree // 2 + 1):
        for g in monic_polys(f.spec, d):
            if (f % g).is_zero():
                return False
    return True


def _irreducible_by_rabin(f: Poly) -> bool:
    # x^(q^n) = x mod f, and gcd(x^(q^(n/r)) - x, f) = 1 for primes r | n.
    spec = f.spec
    n = f.degree
    x = Poly.x(spec)
    powers = [x % f]
    for _ in range(n):
        powers.append(powers[-1].powmod(spec.q, f))
    if not (powers[n] - x % f).is_zero():
        return False
    for r in prime_factors(n):
        g = poly_gcd(f, powers[n // r] - x)
        if g.degree > 0:
            return False
    return True


def poly_is_irreducible(f: Poly) -> bool:
    """Irreducibility over the coefficient field of a monic polynomial.

    Exhaustive trial division is used whenever the candidate space is small;
    larger degrees fall back to Rabin's gcd criterion.
    """
    if not f.is_monic():
        raise PreconditionError("poly_is_irreducible expects a monic polynomial")
    if f.degree < 1:
        raise PreconditionError("constant polynomials are neither irreducible nor reducible")
    if f.degree == 1:
        return True
    if _trial_division_feasible(f.spec, f.degree):
        return _irreducible_by_trial_division(f)
    return _irreducible_by_rabin(f)


def binomial_factors(spec: FieldSpec, a: FieldElement | int) -> set[Poly]:
    """Irreducible factors of ``x^(q-1) - a`` over GF(q).

    They are the binomials ``x^r - b`` with ``r`` the multiplicative order of
    ``a`` and ``b`` ranging over the ``(q-1)/r`` solutions of
    ``b^((q-1)/r) = a``.
    """
    av = a.value if isinstance(a, FieldElement) else int(a)
    if av == 0:
        raise PreconditionError("binomial_factors needs a nonzero constant")
    if spec.q > MAX_FACTOR_Q:
        raise CapExceeded(f"factorisation capped at q <= {MAX_FACTOR_Q}")
    r = element_order(FieldElement(spec, av))
    t = (spec.q - 1) // r
    out = set()
    for b in range(1, spec.q):
        if spec.pow(b, t) == av:
            out.add(Poly(spec, [spec.neg(b)] + [0] * (r - 1) + [1]))
    return out


def binomial(spec: FieldSpec, degree: int, a: int) -> Poly:
    """The polynomial ``x^degree - a``."""
    return Poly(spec, [spec.neg(a)] + [0] * (degree - 1) + [1])


def product(polys: Iterable[Poly], spec: FieldSpec) -> Poly:
    return reduce(lambda u, v: u * v, polys, Poly(spec, (1,)))


def rref(spec: FieldSpec, rows: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over ``spec``; returns (matrix, pivot columns)."""
    m = np.array(rows, dtype=np.int64, copy=True)
    if m.ndim != 2:
        raise PreconditionError("rref expects a 2-d array")
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = spec.vmul(m[r], spec.inv(int(m[r, c])))
        for i in range(nrows):
            if i != r and m[i, c]:
                m[i] = spec.vadd(m[i], spec.vneg(spec.vmul(m[r], int(m[i, c]))))
        pivots.append(c)
        r += 1
    return m, pivots


def nullspace(spec: FieldSpec, mat: np.ndarray) -> np.ndarray:
    """Basis (as rows) of ``{v : mat @ v = 0}``."""
    mat = np.asarray(mat, dtype=np.int64)
    red, pivots = rref(spec, mat)
    ncols = mat.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = np.zeros(ncols, dtype=np.int64)
        v[fcol] = 1
        for i, pc in enumerate(pivots):
            v[pc] = spec.neg(int(red[i, fcol]))
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), ncols)
