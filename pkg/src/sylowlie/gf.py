"""Exact arithmetic in GF(p^n) and its quadratic extension.

Elements are stored as integers ``0 <= i < q`` whose base-``p`` digits are the
polynomial-basis coordinates (lowest degree first).  Every field owns dense
addition and multiplication tables, so all arithmetic is table lookup and
works elementwise on numpy integer arrays as well as on scalars.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, DomainError, UsageError

MAX_FIELD_ORDER = 256


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def _poly_divides(divisor: tuple[int, ...], poly: tuple[int, ...], p: int) -> bool:
    # divisor is monic
    rem = list(poly)
    dd = len(divisor) - 1
    for top in range(len(rem) - 1, dd - 1, -1):
        c = rem[top] % p
        if c:
            for k, dk in enumerate(divisor):
                rem[top - dd + k] = (rem[top - dd + k] - c * dk) % p
    return not any(rem[:dd])


def _monic_polys(p: int, degree: int):
    for lower in itertools.product(range(p), repeat=degree):
        # product() varies the last slot fastest; reverse so index order is
        # sum(c_i p^i) with c_0 fastest
        yield tuple(reversed(lower)) + (1,)


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= n/2."""
    n = len(modulus) - 1
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for f in _monic_polys(p, d):
            if _poly_divides(f, modulus, p):
                return False
    return True


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """Least monic irreducible of degree ``n`` over GF(p), coefficients low degree first.

    For ``n == 1`` the sentinel ``x`` is returned (prime field, no reduction needed).
    """
    if not is_prime(p) or n < 1:
        raise ConfigurationError(f"unsupported field parameters p={p}, n={n}")
    if p**n > MAX_FIELD_ORDER:
        raise ConfigurationError(
            f"GF({p}^{n}) exceeds the supported table size {MAX_FIELD_ORDER}; pass a modulus"
            " explicitly only for fields within that bound"
        )
    if n == 1:
        return (0, 1)
    for f in _monic_polys(p, n):
        if f[0] != 0 and is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")  # unreachable


@dataclass(frozen=True)
class FieldParams:
    p: int
    n: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ConfigurationError(f"{self.p} is not prime")
        if self.n < 1:
            raise ConfigurationError("extension degree must be positive")
        mod = tuple(int(c) % self.p for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != self.n + 1 or mod[-1] != 1:
            raise ConfigurationError(f"modulus {mod} is not monic of degree {self.n}")
        if self.p**self.n > MAX_FIELD_ORDER:
            raise ConfigurationError(f"GF({self.p}^{self.n}) is larger than {MAX_FIELD_ORDER}")
        if not is_irreducible(mod, self.p):
            raise ConfigurationError(f"modulus {mod} is reducible over GF({self.p})")

    @property
    def q(self) -> int:
        return self.p**self.n

    @classmethod
    def default(cls, p: int, n: int = 1) -> FieldParams:
        return cls(p, n, default_modulus(p, n))

    @classmethod
    def for_order(cls, q: int, modulus=None) -> FieldParams:
        p, n = prime_power(q)
        if modulus is None:
            return cls.default(p, n)
        return cls(p, n, tuple(modulus))


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` as ``p**n``; raise ConfigurationError otherwise."""
    if q < 2:
        raise ConfigurationError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    n, r = 0, q
    while r % p == 0:
        r //= p
        n += 1
    if r != 1:
        raise ConfigurationError(f"{q} is not a prime power")
    return p, n


class GF:
    """Finite field with lookup tables; obtain instances through :func:`field`."""

    def __init__(self, params: FieldParams):
        self.params = params
        self.p, self.n, self.q = params.p, params.n, params.q
        p, n, q = self.p, self.n, self.q
        idx = np.arange(q)
        self.digits = np.stack([(idx // p**i) % p for i in range(n)], axis=1)
        self.weights = p ** np.arange(n)

        self.add_t = self._encode((self.digits[:, None, :] + self.digits[None, :, :]) % p)
        self.neg_t = self._encode((-self.digits) % p)
        self.sub_t = self.add_t[:, self.neg_t]

        prod = np.zeros((q, q, 2 * n - 1), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                prod[:, :, i + j] += self.digits[:, None, i] * self.digits[None, :, j]
        if n > 1:
            mod = params.modulus
            for d in range(2 * n - 2, n - 1, -1):
                c = prod[:, :, d] % p
                for k in range(n):
                    prod[:, :, d - n + k] -= c * mod[k]
                prod[:, :, d] = 0
        self.mul_t = self._encode(prod[:, :, :n] % p)

        self.inv_t = np.full(q, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.mul_t == 1)
        self.inv_t[rows] = cols
        for t in (self.add_t, self.neg_t, self.sub_t, self.mul_t, self.inv_t):
            t.setflags(write=False)

    def _encode(self, digits: np.ndarray) -> np.ndarray:
        return (digits * self.weights).sum(axis=-1).astype(np.int64)

    def __repr__(self):
        return f"GF({self.p}^{self.n})"

    # scalar interface -------------------------------------------------
    def __call__(self, value) -> Fq:
        """Element from an index, a coordinate list, or an existing element."""
        if isinstance(value, Fq):
            if value.field is not self:
                raise UsageError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple, np.ndarray)):
            coords = [int(c) % self.p for c in value]
            if len(coords) > self.n:
                raise DomainError(f"{len(coords)} coordinates for a degree-{self.n} field")
            coords += [0] * (self.n - len(coords))
            return Fq(self, int(np.dot(coords, self.weights)))
        value = int(value)
        if not 0 <= value < self.q:
            raise DomainError(f"index {value} outside GF({self.q})")
        return Fq(self, value)

    def from_int(self, k: int) -> Fq:
        """Image of the integer ``k`` in the prime subfield."""
        return Fq(self, int(k) % self.p)

    @property
    def zero(self) -> Fq:
        return Fq(self, 0)

    @property
    def one(self) -> Fq:
        return Fq(self, 1)

    @property
    def gen(self) -> Fq:
        """The class of ``x`` modulo the defining polynomial."""
        return Fq(self, self.p if self.n > 1 else 1)

    def elements(self) -> list[Fq]:
        return [Fq(self, i) for i in range(self.q)]

    def coords(self, i: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self.digits[i])

    # vectorised interface (operands are index arrays) ---------------------
    def add(self, a, b):
        return self.add_t[a, b]

    def sub(self, a, b):
        return self.sub_t[a, b]

    def neg(self, a):
        return self.neg_t[a]

    def mul(self, a, b):
        return self.mul_t[a, b]

    def scale(self, k: int, a):
        """Multiply by the integer ``k`` (an element of the prime field)."""
        return self.mul_t[int(k) % self.p, a]

    def pow(self, a, e: int):
        a = np.asarray(a)
        if e < 0:
            if np.any(a == 0):
                raise DomainError("negative power of zero")
            a, e = self.inv_t[a], -e
        result = np.ones_like(a)
        base = a
        while e:
            if e & 1:
                result = self.mul_t[result, base]
            base = self.mul_t[base, base]
            e >>= 1
        return result

    def frobenius_power(self, a, k: int = 1):
        """``a ** (p ** k)``, an automorphism of the field."""
        return self.pow(a, self.p**k)


@lru_cache(maxsize=None)
def field(params: FieldParams) -> GF:
    return GF(params)


def gf(q: int, modulus=None) -> GF:
    """Convenience constructor: ``gf(9)`` is GF(9) with the default modulus."""
    return field(FieldParams.for_order(q, modulus))


class Fq:
    """A single field element; arithmetic goes through the owning field's tables."""

    __slots__ = ("field", "index")

    def __init__(self, field_: GF, index: int):
        self.field = field_
        self.index = int(index)

    @property
    def coords(self) -> tuple[int, ...]:
        return self.field.coords(self.index)

    def _check(self, other) -> Fq:
        if isinstance(other, int):
            return self.field.from_int(other)
        if not isinstance(other, Fq):
            return NotImplemented
        if other.field is not self.field:
            raise UsageError(f"operands live in {self.field} and {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Fq(self.field, self.field.add_t[self.index, other.index])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Fq(self.field, self.field.sub_t[self.index, other.index])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Fq(self.field, self.field.neg_t[self.index])

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Fq(self.field, self.field.mul_t[self.index, other.index])

    __rmul__ = __mul__

    def inverse(self) -> Fq:
        if self.index == 0:
            raise DomainError("zero has no multiplicative inverse")
        return Fq(self.field, self.field.inv_t[self.index])

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, e: int):
        return Fq(self.field, int(self.field.pow(self.index, int(e))))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.index == other % self.field.p
        return isinstance(other, Fq) and other.field is self.field and other.index == self.index

    def __hash__(self):
        return hash((self.field.params, self.index))

    def __bool__(self):
        return self.index != 0

    def __int__(self):
        return self.index

    def __repr__(self):
        if self.field.n == 1:
            return f"{self.index}"
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                coef = "" if (c == 1 and i) else str(c)
                terms.append(coef + mono)
        return " + ".join(reversed(terms)) if terms else "0"


# functional interface ------------------------------------------------------------

def add(a: Fq, b: Fq) -> Fq:
    return a + b


def neg(a: Fq) -> Fq:
    return -a


def mul(a: Fq, b: Fq) -> Fq:
    return a * b


def inv(a: Fq) -> Fq:
    return a.inverse()


def pow(a: Fq, k: int) -> Fq:  # noqa: A001 - mirrors the operation name
    return a**k


# quadratic extensions --------------------------------------------------------

class QuadraticExtension:
    """GF(q^2) together with a fixed embedding of GF(q).

    The embedding sends the generator of the subfield to the least-index root
    of the subfield's modulus inside the big field, so it is deterministic for
    a given pair of moduli.
    """

    def __init__(self, sub: GF, big: GF):
        if big.p != sub.p or big.n != 2 * sub.n:
            raise ConfigurationError(f"{big} is not a quadratic extension of {sub}")
        self.sub, self.big = sub, big
        q = sub.q
        if sub.n == 1:
            embed = np.arange(q, dtype=np.int64)
        else:
            root = self._least_root(sub.params.modulus)
            powers = [1]
            for _ in range(1, sub.n):
                powers.append(int(big.mul_t[powers[-1], root]))
            embed = np.zeros(q, dtype=np.int64)
            for i in range(q):
                acc = 0
                for c, r in zip(sub.digits[i], powers):
                    acc = big.add_t[acc, big.scale(int(c), r)]
                embed[i] = acc
        self.embed = embed
        self.restrict = np.full(big.q, -1, dtype=np.int64)
        self.restrict[embed] = np.arange(q)
        all_big = np.arange(big.q)
        self.frob = big.pow(all_big, q)
        self.trace_big = big.add_t[all_big, self.frob]
        self.norm_big = big.mul_t[all_big, self.frob]
        if np.any(self.restrict[self.trace_big] < 0) or np.any(self.restrict[self.norm_big] < 0):
            raise AssertionError("trace or norm left the subfield")
        self.trace_t = self.restrict[self.trace_big]
        self.norm_t = self.restrict[self.norm_big]
        for t in (self.embed, self.restrict, self.frob, self.trace_t, self.norm_t):
            t.setflags(write=False)

    def _least_root(self, modulus):
        big = self.big
        xs = np.arange(big.q)
        val = np.zeros(big.q, dtype=np.int64)
        for c in reversed(modulus):  # Horner
            val = big.add_t[big.mul_t[val, xs], int(c)]
        roots = np.nonzero(val == 0)[0]
        return int(roots[0])

    def in_subfield(self, a) -> np.ndarray:
        return self.restrict[a] >= 0

    def to_sub(self, a: Fq) -> Fq:
        r = int(self.restrict[a.index])
        if r < 0:
            raise DomainError(f"{a} is not in the subfield {self.sub}")
        return Fq(self.sub, r)

    def to_big(self, a: Fq) -> Fq:
        return Fq(self.big, int(self.embed[a.index]))


@lru_cache(maxsize=None)
def quadratic_extension(sub_params: FieldParams, big_params: FieldParams | None = None) -> QuadraticExtension:
    if big_params is None:
        big_params = FieldParams.default(sub_params.p, 2 * sub_params.n)
    return QuadraticExtension(field(sub_params), field(big_params))


def _extension_of(a: Fq, sub_params: FieldParams | None) -> QuadraticExtension:
    big = a.field
    if big.n % 2:
        raise DomainError(f"{big} is not a quadratic extension of any subfield")
    if sub_params is None:
        sub_params = FieldParams.default(big.p, big.n // 2)
    return quadratic_extension(sub_params, big.params)


def frobenius(a: Fq) -> Fq:
    """The involution ``a -> a**q`` of GF(q^2)."""
    big = a.field
    if big.n % 2:
        raise DomainError(f"{big} is not a quadratic extension")
    return Fq(big, int(big.frobenius_power(a.index, big.n // 2)))


def trace(a: Fq, sub_params: FieldParams | None = None) -> Fq:
    """``a + a**q`` as an element of the subfield of order q."""
    ext = _extension_of(a, sub_params)
    return Fq(ext.sub, int(ext.trace_t[a.index]))


def norm(a: Fq, sub_params: FieldParams | None = None) -> Fq:
    """``a * a**q`` as an element of the subfield of order q."""
    ext = _extension_of(a, sub_params)
    return Fq(ext.sub, int(ext.norm_t[a.index]))
