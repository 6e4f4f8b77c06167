"""Exact arithmetic in F_q = F_p[X]/(m(X)) and the cube-root-of-unity machinery.

Elements are plain ints holding their *rank*: the residue itself for prime
fields, and the base-p value of the little-endian coefficient vector for
extension fields (so ``3 + x^2`` over F_7 has rank ``3 + 0*7 + 1*49 = 52``).
Ranks are canonical, so equality of elements is equality of ints.

:class:`FieldElement` wraps a rank together with its field for operator
syntax; the hot paths (evaluation tables, sweeps) work on ranks and numpy
arrays of ranks directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    FieldMismatch,
    NotInMu3,
    NotIrreducible,
    NotOneModThree,
    NotPrime,
    OrderTooLarge,
)

MAX_ORDER = 2**31

# extension fields up to this order get discrete log/antilog tables
LOG_TABLE_LIMIT = 2**20

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


# ---------------------------------------------------------------------------
# integer helpers
# ---------------------------------------------------------------------------

def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n >= 1, ascending (trial division)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, n) with q = p**n, or None if q is not a prime power."""
    if q < 2:
        return None
    fs = prime_factors(q)
    if len(fs) != 1:
        return None
    p = fs[0]
    n = 0
    while q > 1:
        q //= p
        n += 1
    return p, n


def prime_powers(lo: int, hi: int) -> list[int]:
    return [q for q in range(max(lo, 2), hi + 1) if prime_power(q) is not None]


# ---------------------------------------------------------------------------
# polynomials over F_p: little-endian int lists, trailing zeros trimmed
# ---------------------------------------------------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    lead_inv = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        coef = a[-1] * lead_inv % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * mc) % p
        _trim(a)
    return a


def poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def poly_powmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = poly_mod(a, m, p)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, p), m, p)
        base = poly_mod(poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def has_root(coeffs, p: int) -> bool:
    for x in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % p
        if acc == 0:
            return True
    return False


def is_irreducible(coeffs, p: int) -> bool:
    """Irreducibility over F_p of a polynomial given little-endian.

    Degrees 2 and 3 use root absence; higher degrees use Rabin's test
    (``x^(p^n) = x mod m`` and ``gcd(x^(p^(n/l)) - x, m) = 1`` for primes l | n).
    """
    m = _trim([c % p for c in coeffs])
    n = len(m) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if n <= 3:
        return not has_root(m, p)
    return rabin_irreducible(m, p)


def rabin_irreducible(m: list[int], p: int) -> bool:
    n = len(m) - 1

    def frobenius_iter(k):
        h = [0, 1]
        for _ in range(k):
            h = poly_powmod(h, p, m, p)
        return h

    xq = frobenius_iter(n)
    if poly_mod(xq, m, p) != poly_mod([0, 1], m, p):
        return False
    for ell in prime_factors(n):
        h = frobenius_iter(n // ell)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        if len(poly_gcd(_trim(diff), m, p)) != 1:
            return False
    return True


def first_irreducible(p: int, n: int) -> tuple[int, ...]:
    """First monic irreducible of degree n, constant term varying fastest."""
    for idx in range(p**n):
        low = []
        v = idx
        for _ in range(n):
            low.append(v % p)
            v //= p
        cand = low + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError(f"no irreducible of degree {n} over F_{p}")  # cannot happen


# ---------------------------------------------------------------------------
# the field
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """F_q with q = p**n. ``modulus`` is little-endian and monic (None for n = 1)."""

    p: int
    n: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.n < 1:
            raise ValueError("extension degree must be >= 1")
        if self.p**self.n > MAX_ORDER:
            raise OrderTooLarge(f"{self.p}^{self.n} exceeds 2^31")
        if self.n == 1:
            if self.modulus is not None:
                raise ValueError("prime fields take no modulus")
            return
        m = self.modulus
        if m is None or len(m) != self.n + 1 or m[-1] != 1:
            raise NotIrreducible("modulus must be monic of degree n")
        if any(not 0 <= c < self.p for c in m) or not is_irreducible(m, self.p):
            raise NotIrreducible(f"{m} is not irreducible over F_{self.p}")

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def is_prime_field(self) -> bool:
        return self.n == 1

    def __str__(self):
        return str(self.p) if self.n == 1 else f"{self.p}^{self.n}"

    def __repr__(self):
        return f"FieldSpec({self})"

    # -- encoding ----------------------------------------------------------

    def digits(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def from_digits(self, ds) -> int:
        ds = list(ds)
        if len(ds) > self.n:
            raise ValueError(f"too many digits for F_{self.q}")
        v = 0
        for d in reversed(ds):
            v = v * self.p + d % self.p
        return v

    def format(self, a: int) -> str:
        """I/O encoding: the residue for prime fields, little-endian digits otherwise."""
        if self.n == 1:
            return str(a)
        return ",".join(map(str, self.digits(a)))

    def parse(self, text) -> int:
        """Inverse of :meth:`format`.

        Python ints are taken as ranks. A digit-free string such as ``"2"``
        denotes that integer in the prime subfield.
        """
        if isinstance(text, (int, np.integer)):
            if not 0 <= text < self.q:
                raise ValueError(f"{text} is not a rank in [0, {self.q})")
            return int(text)
        text = str(text).strip()
        if "," in text:
            return self.from_digits(int(t) for t in text.split(","))
        return int(text) % self.p

    def element(self, value) -> FieldElement:
        return FieldElement(self, self.parse(value))

    def to_json(self) -> dict:
        out = {"field": str(self), "p": self.p, "n": self.n, "q": self.q}
        if self.modulus is not None:
            out["modulus"] = list(self.modulus)
        return out

    # -- scalar arithmetic on ranks ---------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        p, out, w = self.p, 0, 1
        for _ in range(self.n):
            out += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def neg(self, a: int) -> int:
        if self.n == 1:
            return -a % self.p
        return self.from_digits(-d for d in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.n == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        tables = self._log_tables
        if tables is not None:
            log, exp = tables
            return int(exp[(log[a] + log[b]) % (self.q - 1)])
        return self._poly_mul(a, b)

    def _poly_mul(self, a: int, b: int) -> int:
        prod = poly_mul(list(self.digits(a)), list(self.digits(b)), self.p)
        return self.from_digits(poly_mod(prod, list(self.modulus), self.p))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.n == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 1 if e == 0 else 0
        tables = self._log_tables
        if tables is not None:
            log, exp = tables
            return int(exp[int(log[a]) * (e % (self.q - 1)) % (self.q - 1)])
        result, base = 1, a
        while e:
            if e & 1:
                result = self._poly_mul(result, base)
            base = self._poly_mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.n == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # -- structure ---------------------------------------------------------

    @cached_property
    def primitive_element(self) -> int:
        """Smallest-rank generator of F_q^*."""
        order = self.q - 1
        cofactors = [order // ell for ell in prime_factors(order)]
        for g in range(1, self.q):
            if all(self._slow_pow(g, c) != 1 for c in cofactors):
                return g
        raise AssertionError("F_q^* has no generator")  # cannot happen

    def _slow_pow(self, a, e):
        # table-free power, used while the log tables are being built
        if self.n == 1:
            return pow(a, e, self.p)
        result, base = 1, a
        while e:
            if e & 1:
                result = self._poly_mul(result, base)
            base = self._poly_mul(base, base)
            e >>= 1
        return result

    @cached_property
    def _log_tables(self):
        if self.n == 1 or self.q > LOG_TABLE_LIMIT:
            return None
        g = self.primitive_element
        exp = np.empty(self.q - 1, dtype=np.int64)
        log = np.full(self.q, -1, dtype=np.int64)
        x = 1
        for i in range(self.q - 1):
            exp[i] = x
            log[x] = i
            x = self._poly_mul(x, g)
        return log, exp

    def element_of_order(self, d: int) -> int:
        """Some element of exact multiplicative order d (requires d | q-1)."""
        if (self.q - 1) % d:
            raise ValueError(f"{d} does not divide q-1 = {self.q - 1}")
        cof = (self.q - 1) // d
        ells = prime_factors(d)
        for x in range(1, self.q):
            y = self.pow(x, cof)
            if all(self.pow(y, d // ell) != 1 for ell in ells):
                return y
        raise AssertionError("no element of the requested order")  # cannot happen

    # -- vectorised arithmetic over numpy arrays of ranks -------------------

    def all_elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def vec_add(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        p = self.p
        if self.n == 1:
            return (a + b) % p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        w = 1
        for _ in range(self.n):
            out += ((a // w % p + b // w % p) % p) * w
            w *= p
        return out

    def vec_mul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return a * b % self.p
        tables = self._log_tables
        if tables is None:
            return np.vectorize(self.mul, otypes=[np.int64])(a, b)
        log, exp = tables
        out = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vec_pow(self, a, e: int) -> np.ndarray:
        """Elementwise a**e by square-and-multiply (prime fields) or logs."""
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        if self.n == 1:
            p = self.p
            result = np.ones_like(a)
            base = a % p
            while e:
                if e & 1:
                    result = result * base % p
                base = base * base % p
                e >>= 1
            return result
        tables = self._log_tables
        if tables is None:
            return np.vectorize(lambda x: self.pow(int(x), e), otypes=[np.int64])(a)
        log, exp = tables
        out = exp[log[a] * (e % (self.q - 1)) % (self.q - 1)]
        return np.where(a == 0, 0, out)


def make_field(p: int, n: int = 1) -> FieldSpec:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if n < 1:
        raise ValueError("extension degree must be >= 1")
    if p**n > MAX_ORDER:
        raise OrderTooLarge(f"{p}^{n} exceeds 2^31")
    if n == 1:
        return FieldSpec(p)
    return FieldSpec(p, n, first_irreducible(p, n))


def field_of_order(q: int) -> FieldSpec:
    pp = prime_power(q)
    if pp is None:
        raise NotPrime(f"{q} is not a prime power")
    return make_field(*pp)


def parse_field(text: str) -> FieldSpec:
    """``"p"`` or ``"p^n"``."""
    text = text.strip()
    if "^" in text:
        p, n = text.split("^", 1)
        return make_field(int(p), int(n))
    return make_field(int(text), 1)


# ---------------------------------------------------------------------------
# element wrapper
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    value: int

    def _other(self, b) -> int:
        if isinstance(b, FieldElement):
            if b.field != self.field:
                raise FieldMismatch(f"F_{self.field.q} vs F_{b.field.q}")
            return b.value
        if isinstance(b, int):
            # integer constants act through the prime subfield
            return b % self.field.p
        return self.field.parse(b)

    def __add__(self, b):
        return FieldElement(self.field, self.field.add(self.value, self._other(b)))

    __radd__ = __add__

    def __sub__(self, b):
        return FieldElement(self.field, self.field.sub(self.value, self._other(b)))

    def __rsub__(self, b):
        return FieldElement(self.field, self.field.sub(self._other(b), self.value))

    def __mul__(self, b):
        return FieldElement(self.field, self.field.mul(self.value, self._other(b)))

    __rmul__ = __mul__

    def __truediv__(self, b):
        return FieldElement(self.field, self.field.div(self.value, self._other(b)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inv(self):
        return FieldElement(self.field, self.field.inv(self.value))

    @property
    def digits(self):
        return self.field.digits(self.value)

    def __int__(self):
        return self.value

    def __str__(self):
        return self.field.format(self.value)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inv()


def power(a: FieldElement, e: int) -> FieldElement:
    if e < 0:
        raise ValueError("exponent must be non-negative")
    return a**e


def element_rank(spec: FieldSpec, x) -> int:
    """Position of x in [0, q): the residue, or the base-p value of its digits."""
    if isinstance(x, FieldElement):
        if x.field != spec:
            raise FieldMismatch("element belongs to another field")
        return x.value
    if isinstance(x, (tuple, list)):
        return spec.from_digits(x)
    if not 0 <= x < spec.q:
        raise ValueError(f"{x} is not a canonical element of F_{spec.q}")
    return int(x)


# ---------------------------------------------------------------------------
# cube roots of unity, projection, fibers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mu3Context:
    """The order-3 subgroup (1, omega, omega^2) of F_q^* and the map x -> x^s."""

    field: FieldSpec
    s: int
    omega: int

    @property
    def mu3(self) -> tuple[int, int, int]:
        w = self.omega
        return (1, w, self.field.mul(w, w))

    def index(self, u: int) -> int:
        try:
            return self.mu3.index(u)
        except ValueError:
            raise NotInMu3(f"{self.field.format(u)} is not a cube root of unity") from None

    @cached_property
    def projection_table(self) -> np.ndarray:
        """Index of x^s in mu3 for every rank x; -1 at x = 0."""
        F = self.field
        powers = F.vec_pow(F.all_elements(), self.s)
        out = np.full(F.q, -1, dtype=np.int64)
        for i, u in enumerate(self.mu3):
            out[powers == u] = i
        if (out[1:] < 0).any():
            raise AssertionError("x^s left mu3")  # cannot happen
        out[0] = -1
        return out

    @cached_property
    def kernel(self) -> np.ndarray:
        return fiber_elements(self, 0)


def cube_roots_of_unity(spec: FieldSpec) -> tuple[int, int]:
    """The two roots of X^2 + X + 1, ascending by rank."""
    if (spec.q - 1) % 3:
        raise NotOneModThree(f"q = {spec.q} is not 1 mod 3")
    w = spec.element_of_order(3)
    return tuple(sorted((w, spec.mul(w, w))))


def make_mu3(spec: FieldSpec, omega=None) -> Mu3Context:
    """Build the context; ``omega`` overrides the canonical (smallest-rank) root."""
    roots = cube_roots_of_unity(spec)
    if omega is None:
        w = roots[0]
    else:
        w = spec.parse(omega) if not isinstance(omega, FieldElement) else omega.value
        if w not in roots:
            raise NotInMu3(f"{spec.format(w)} is not a primitive cube root of unity")
    return Mu3Context(spec, (spec.q - 1) // 3, w)


def project(ctx: Mu3Context, x) -> int:
    """Index i with x^s = mu3[i]."""
    x = x.value if isinstance(x, FieldElement) else int(x)
    if x == 0:
        raise ZeroDivisionError("projection is defined on F_q^* only")
    return ctx.index(ctx.field.pow(x, ctx.s))


def fiber_elements(ctx: Mu3Context, u_index: int) -> np.ndarray:
    """Ranks of all x with x^s = mu3[u_index], ascending (a coset of the kernel)."""
    return np.flatnonzero(ctx.projection_table == u_index).astype(np.int64)


def fiber_representative(ctx: Mu3Context, u_index: int) -> int:
    """Smallest-rank element of the fiber."""
    return int(fiber_elements(ctx, u_index)[0])

