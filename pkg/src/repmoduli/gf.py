"""Finite field arithmetic GF(p^n) with a designated generator.

Elements are encoded as integers in [0, q): the base-p digits are the
coefficients of the polynomial representative.  Field data is deterministic:
the modulus is the lexicographically first irreducible monic polynomial of
degree n, and the generator is the first element of multiplicative order
q - 1 in encoding order, so every derived table is reproducible.
"""

from __future__ import annotations

from functools import lru_cache

from .cyclo import factorize


class FieldError(ValueError):
    pass


# -- polynomial helpers over GF(p), little-endian coefficient tuples --------

def _pol_trim(a):
    i = len(a)
    while i and a[i - 1] == 0:
        i -= 1
    return a[:i]


def _pol_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pol_trim(tuple(out))


def _pol_mod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] % p
        if c:
            factor = (c * inv_lead) % p
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - factor * f[j]) % p
    return _pol_trim(tuple(a))


def _pol_powmod(a, e, f, p):
    result = (1,)
    base = _pol_mod(a, f, p)
    while e:
        if e & 1:
            result = _pol_mod(_pol_mul(result, base, p), f, p)
        base = _pol_mod(_pol_mul(base, base, p), f, p)
        e >>= 1
    return result


def _pol_gcd(a, b, p):
    while b:
        a, b = b, _pol_mod(a, b, p)
    return a


def _is_irreducible(f, p):
    # Rabin test: x^(p^n) == x mod f, and x^(p^(n/r)) - x coprime to f for
    # every prime r | n.
    n = len(f) - 1
    x = (0, 1)
    if _pol_powmod(x, p ** n, f, p) != _pol_mod(x, f, p):
        return False
    for r, _ in factorize(n):
        g = _pol_powmod(x, p ** (n // r), f, p)
        diff = list(g) + [0] * max(0, 2 - len(g))
        diff[1] = (diff[1] - 1) % p
        d = _pol_gcd(f, _pol_trim(tuple(diff)), p)
        if len(d) > 1:
            return False
    return True


def _find_modulus(p, n):
    if n == 1:
        return (0, 1)
    for low in range(p ** n):
        coeffs = []
        v = low
        for _ in range(n):
            coeffs.append(v % p)
            v //= p
        f = tuple(coeffs) + (1,)
        if _is_irreducible(f, p):
            return f
    raise FieldError(f"no irreducible modulus found for GF({p}^{n})")


def _is_prime(p):
    return p >= 2 and factorize(p) == ((p, 1),)


_TABLE_LIMIT = 256        # dense add tables only for small fields
_LOG_LIMIT = 1 << 14      # log/exp multiplication tables


class FieldSpec:
    """GF(p^n) with modulus, generator, and fast arithmetic tables."""

    def __init__(self, p, n):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        if n < 1:
            raise FieldError("n must be a positive integer")
        self.p = p
        self.n = n
        self.q = p ** n
        if self.q > _LOG_LIMIT:
            raise FieldError(f"field size {self.q} above supported bound")
        self.modulus = _find_modulus(p, n)
        self._digits = [self._int_to_pol(v) for v in range(self.q)] \
            if self.q <= _TABLE_LIMIT else None
        self.generator = self._find_generator()
        self._build_log_tables()
        self._add_table = None
        if self.q <= _TABLE_LIMIT:
            self._add_table = [
                [self._add_slow(a, b) for b in range(self.q)]
                for a in range(self.q)
            ]

    # -- encoding ------------------------------------------------------------

    def _int_to_pol(self, v):
        out = []
        while v:
            out.append(v % self.p)
            v //= self.p
        return tuple(out)

    def _pol_to_int(self, a):
        v = 0
        for c in reversed(a):
            v = v * self.p + c
        return v

    # -- raw arithmetic on int encodings --------------------------------------

    def _add_slow(self, a, b):
        if self.p == 2:
            return a ^ b
        out = 0
        mult = 1
        while a or b:
            out += ((a + b) % self.p) * mult
            a //= self.p
            b //= self.p
            mult *= self.p
        return out

    def _mul_slow(self, a, b):
        prod = _pol_mul(self._int_to_pol(a), self._int_to_pol(b), self.p)
        return self._pol_to_int(_pol_mod(prod, self.modulus, self.p))

    def _find_generator(self):
        target = self.q - 1
        prime_divs = [r for r, _ in factorize(target)] if target > 1 else []
        for g in range(1, self.q):
            if any(self._pow_slow(g, target // r) == 1 for r in prime_divs):
                continue
            if self._pow_slow(g, target) == 1:
                return g
        raise FieldError("no generator found")

    def _pow_slow(self, a, e):
        acc = 1
        base = a
        while e:
            if e & 1:
                acc = self._mul_slow(acc, base)
            base = self._mul_slow(base, base)
            e >>= 1
        return acc

    def _build_log_tables(self):
        exp = [1] * (self.q - 1)
        cur = 1
        for i in range(1, self.q - 1):
            cur = self._mul_slow(cur, self.generator)
            exp[i] = cur
        log = [0] * self.q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = exp
        self._log = log

    # -- public int-level ops (hot path for group enumeration) ----------------

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_slow(a, b)

    def neg(self, a):
        if self.p == 2:
            return a
        out = 0
        mult = 1
        while a:
            out += (-a % self.p) % self.p * mult
            a //= self.p
            mult *= self.p
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow(self, a, e):
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("inverse of zero field element")
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def theta(self, a):
        """The twisting endomorphism x -> x^(2^((n+1)/2)); theta^2 = squaring."""
        if self.p != 2 or self.n % 2 == 0:
            raise FieldError("theta requires p = 2 and odd n")
        return self.pow(a, 1 << ((self.n + 1) // 2))

    def element_order(self, a):
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        d = self._log[a]
        m = self.q - 1
        from math import gcd
        return m // gcd(m, d)

    # -- element objects -------------------------------------------------------

    def element(self, v):
        return FieldElement(self, v % self.q if isinstance(v, int) else v)

    def elements(self):
        return [FieldElement(self, v) for v in range(self.q)]

    def one(self):
        return FieldElement(self, 1)

    def zero(self):
        return FieldElement(self, 0)

    def gen(self):
        return FieldElement(self, self.generator)

    def __repr__(self):
        return f"FieldSpec(GF({self.p}^{self.n}), modulus={self.modulus})"


class FieldElement:
    __slots__ = ("spec", "val")

    def __init__(self, spec, val):
        self.spec = spec
        self.val = val

    def __add__(self, other):
        return FieldElement(self.spec, self.spec.add(self.val, _val(other)))

    def __sub__(self, other):
        return FieldElement(self.spec, self.spec.sub(self.val, _val(other)))

    def __mul__(self, other):
        return FieldElement(self.spec, self.spec.mul(self.val, _val(other)))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.val))

    def __pow__(self, e):
        return FieldElement(self.spec, self.spec.pow(self.val, e))

    def inv(self):
        return FieldElement(self.spec, self.spec.inv(self.val))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.val == other % self.spec.p  # prime-field constants
        return self.spec is other.spec and self.val == other.val

    def __hash__(self):
        return hash((id(self.spec), self.val))

    def __repr__(self):
        return f"<{self.val} in GF({self.spec.p}^{self.spec.n})>"


def _val(x):
    return x.val if isinstance(x, FieldElement) else x


@lru_cache(maxsize=None)
def gf_make(p, n=1):
    return FieldSpec(p, n)


def gf_theta(x):
    return FieldElement(x.spec, x.spec.theta(x.val))
