"""Prime-power finite fields F_q with q = p^m.

Elements are integer codes in [0, q).  The base-p digits of a code are the
coefficients of a polynomial over F_p (least significant digit = constant
term), reduced modulo a fixed irreducible polynomial.  The modulus is the
lexicographically least monic irreducible of degree m, comparing
coefficients from the constant term upward, so every field is rebuilt
bit-identically from (p, m) alone.

All arithmetic methods accept Python ints or integer numpy arrays and
broadcast like numpy ufuncs.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

from .errors import DegreeZero, DivisionByZero, FieldTooLarge, NotPrime

MAX_ORDER = 1 << 16


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


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomials over F_p as coefficient lists, constant term first ---------


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    b = _trim(list(b))
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for t, bt in enumerate(b):
            a[shift + t] = (a[shift + t] - coef * bt) % p
        _trim(a)
    return a


def is_irreducible(coeffs: list[int] | tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    m = len(coeffs) - 1
    for deg in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if not _poly_rem(coeffs, list(low) + [1], p):
                return False
    return True


def least_irreducible(p: int, m: int) -> tuple[int, ...]:
    if m == 1:
        return (0, 1)
    # product() varies the last slot fastest, so the constant term is the
    # most significant key, as required by the ordering convention.
    for low in itertools.product(range(p), repeat=m):
        cand = list(low) + [1]
        if cand[0] == 0:
            continue  # divisible by x
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError(f"no irreducible polynomial of degree {m} over F_{p}")


class GF:
    """The finite field F_{p^m}.

    Build through :func:`field_create`, which caches instances; instances are
    immutable and safe to share between threads and processes.
    """

    def __init__(self, p: int, m: int = 1):
        if m < 1:
            raise DegreeZero(f"extension degree must be >= 1, got {m}")
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p**m > MAX_ORDER:
            raise FieldTooLarge(f"q = {p}^{m} exceeds the supported cap {MAX_ORDER}")
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = least_irreducible(p, m)
        self._weights = p ** np.arange(m, dtype=np.int64)
        codes = np.arange(self.q, dtype=np.int64)
        self._digits = (codes[:, None] // self._weights[None, :]) % p
        self.primitive = self._find_primitive()
        self._build_tables()

    # --- construction helpers -------------------------------------------

    def _slow_mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da = [int(v) for v in self._digits[a]]
        db = [int(v) for v in self._digits[b]]
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = _poly_rem(prod, list(self.modulus), p) if m > 1 else prod[:1]
        rem = rem + [0] * (m - len(rem))
        return sum(int(c) * p**t for t, c in enumerate(rem[:m]))

    def _slow_pow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._slow_mul(result, base)
            base = self._slow_mul(base, base)
            e >>= 1
        return result

    def _find_primitive(self) -> int:
        n = self.q - 1
        factors = prime_factors(n)
        for g in range(1, self.q):
            if all(self._slow_pow(g, n // r) != 1 for r in factors):
                return g
        raise AssertionError("multiplicative group has no generator")

    def _mul_by_const_matrix(self, g: int) -> np.ndarray:
        # Row t holds the digits of x^t * g; multiplication by g is F_p-linear.
        return np.array([self._digits[self._slow_mul(self.p**t, g)] for t in range(self.m)],
                        dtype=np.int64) if self.m > 1 else np.array([[g % self.p]], dtype=np.int64)

    def _build_tables(self) -> None:
        p, n = self.p, self.q - 1
        step = self._mul_by_const_matrix(self.primitive)
        block = min(n, 256)
        digits = np.zeros((n, self.m), dtype=np.int64)
        digits[0, 0] = 1
        for t in range(1, block):
            digits[t] = digits[t - 1] @ step % p
        jump = np.eye(self.m, dtype=np.int64)
        for _ in range(block):
            jump = jump @ step % p
        for start in range(block, n, block):
            stop = min(start + block, n)
            digits[start:stop] = digits[start - block:stop - block] @ jump % p
        exp = digits @ self._weights
        self._exp = np.concatenate([exp, exp]).astype(np.int64)
        self._log = np.zeros(self.q, dtype=np.int64)
        self._log[exp] = np.arange(n, dtype=np.int64)
        if len(set(exp.tolist())) != n:
            raise AssertionError("primitive element does not generate the multiplicative group")

    # --- identity -------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self):
        return hash((self.p, self.m))

    def __repr__(self):
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (field_create, (self.p, self.m))

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    # --- arithmetic -----------------------------------------------------

    @staticmethod
    def _wrap(x, *inputs):
        if all(isinstance(v, (int, np.integer)) for v in inputs):
            return int(x)
        return x

    def _from_digits(self, d):
        return d @ self._weights

    def add(self, a, b):
        if self.p == 2:
            return self._wrap(np.bitwise_xor(a, b), a, b)
        if self.m == 1:
            return self._wrap(np.add(a, b) % self.p, a, b)
        return self._wrap(self._from_digits((self._digits[a] + self._digits[b]) % self.p), a, b)

    def neg(self, a):
        if self.p == 2:
            return a
        if self.m == 1:
            return self._wrap(np.negative(a) % self.p, a)
        return self._wrap(self._from_digits((-self._digits[a]) % self.p), a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.m == 1:
            return self._wrap(np.multiply(a, b) % self.p, a, b)
        a_ = np.asarray(a, dtype=np.int64)
        b_ = np.asarray(b, dtype=np.int64)
        out = self._exp[self._log[a_] + self._log[b_]]
        out = np.where((a_ == 0) | (b_ == 0), 0, out)
        return self._wrap(out, a, b)

    def inv(self, a):
        a_ = np.asarray(a, dtype=np.int64)
        if np.any(a_ == 0):
            raise DivisionByZero("inverse of zero")
        out = self._exp[(self.q - 1 - self._log[a_]) % (self.q - 1)]
        return self._wrap(out, a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        a = int(a)
        if a == 0:
            if e < 0:
                raise DivisionByZero("negative power of zero")
            return 1 if e == 0 else 0
        return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise DivisionByZero("zero has no multiplicative order")
        n = self.q - 1
        return n // np.gcd(int(self._log[a]), n) if n > 1 else 1

    # --- vector/matrix helpers -----------------------------------------

    def matmul(self, A, B) -> np.ndarray:
        """Matrix product over the field for 2-d integer arrays."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[1] == 0:
            return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        if self.m == 1:
            return (A @ B) % self.p
        prod = self.mul(A[:, :, None], B[None, :, :])
        return self.sum(prod, axis=1)

    def sum(self, X, axis: int) -> np.ndarray:
        X = np.asarray(X, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(X, axis=axis)
        if self.m == 1:
            return X.sum(axis=axis) % self.p
        return self._from_digits(self._digits[X].sum(axis=axis) % self.p)

    def random(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.integers(0, self.q, size=size, dtype=np.int64)


@functools.lru_cache(maxsize=None)
def field_create(p: int, m: int = 1) -> GF:
    """Deterministic F_{p^m}; raises NotPrime / DegreeZero on bad input."""
    return GF(p, m)


def field_from_order(q: int) -> GF:
    for p in range(2, q + 1):
        if q % p == 0:
            m, rest = 0, q
            while rest % p == 0:
                rest //= p
                m += 1
            if rest != 1:
                raise NotPrime(f"{q} is not a prime power")
            return field_create(p, m)
    raise NotPrime(f"{q} is not a prime power")


def field_arith(ctx: GF, op: str, a, b=None):
    """Dispatch ``op`` in {add, sub, mul, inv, pow}; ``b`` is the exponent for pow."""
    if op == "add":
        return ctx.add(a, b)
    if op == "sub":
        return ctx.sub(a, b)
    if op == "mul":
        return ctx.mul(a, b)
    if op == "inv":
        return ctx.inv(a)
    if op == "pow":
        return ctx.pow(a, b)
    raise ValueError(f"unknown field operation {op!r}")


def primitive_element(ctx: GF) -> int:
    """Least code whose multiplicative order is q - 1."""
    return ctx.primitive


class ExtensionField:
    """F_{q^D} built as F_q[y]/(g), g the least monic irreducible of degree D over F_q.

    Only used to flatten extension-field codes into F_q-additive codes: an
    element is its coordinate vector over the basis 1, y, ..., y^(D-1), and
    multiplication by a fixed element is an F_q-linear map.
    """

    def __init__(self, base: GF, degree: int):
        if degree < 1:
            raise DegreeZero(f"extension degree must be >= 1, got {degree}")
        if base.q**degree > MAX_ORDER:
            raise FieldTooLarge(f"q^D = {base.q}^{degree} exceeds the supported cap {MAX_ORDER}")
        self.base = base
        self.degree = degree
        self.order = base.q**degree
        self.modulus = self._least_irreducible()

    def _poly_rem(self, a: list[int], b: list[int]) -> list[int]:
        F = self.base
        a = _trim(list(a))
        lead_inv = F.inv(b[-1])
        while len(a) >= len(b):
            coef = F.mul(a[-1], lead_inv)
            shift = len(a) - len(b)
            for t, bt in enumerate(b):
                a[shift + t] = F.sub(a[shift + t], F.mul(coef, bt))
            _trim(a)
        return a

    def _least_irreducible(self) -> tuple[int, ...]:
        D, q = self.degree, self.base.q
        if D == 1:
            return (0, 1)
        for low in itertools.product(range(q), repeat=D):
            cand = list(low) + [1]
            if cand[0] == 0:
                continue
            if all(self._poly_rem(cand, list(div) + [1])
                   for deg in range(1, D // 2 + 1)
                   for div in itertools.product(range(q), repeat=deg)):
                return tuple(cand)
        raise AssertionError("no irreducible polynomial found")

    def coords(self, code: int) -> list[int]:
        q = self.base.q
        return [(code // q**t) % q for t in range(self.degree)]

    def element(self, coords) -> int:
        q = self.base.q
        return sum(int(c) * q**t for t, c in enumerate(coords))

    def mul(self, a: int, b: int) -> int:
        F, D = self.base, self.degree
        ca, cb = self.coords(a), self.coords(b)
        prod = [0] * (2 * D - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = F.add(prod[i + j], F.mul(x, y))
        rem = self._poly_rem(prod, list(self.modulus)) if D > 1 else prod[:1]
        return self.element(rem + [0] * (D - len(rem)))

    def pow(self, a: int, e: int) -> int:
        result = 1
        for _ in range(e):
            result = self.mul(result, a)
        return result

    def mul_matrix(self, beta: int) -> np.ndarray:
        """D x D matrix over the base field with coords(beta*z) = M @ coords(z)."""
        D, q = self.degree, self.base.q
        return np.array([self.coords(self.mul(beta, q**t)) for t in range(D)], dtype=np.int64).T
