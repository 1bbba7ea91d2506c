"""Exact arithmetic in the finite field GF(p^m).

An element is a digit vector (c0, ..., c_{m-1}) over Z/p, understood as
c0 + c1*w + ... modulo a monic irreducible polynomial in w whose
coefficients are listed constant term first, leading 1 included.
Internally a digit vector is packed into the integer sum(c_k * p^k),
and fields with at most 256 elements get full multiplication and
inverse tables, so the hot paths are table lookups.
"""

from __future__ import annotations

from .errors import DivisionByZero, FieldMismatch, OutOfRange

# Default monic irreducibles (constant term first): for each (p, m) the
# lexicographically first irreducible found by trial division.
_IRREDUCIBLE = {
    (2, 1): (0, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 1): (0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (5, 1): (0, 1),
    (5, 2): (2, 0, 1),
    (5, 3): (1, 1, 0, 1),
    (5, 4): (2, 0, 0, 0, 1),
    (7, 1): (0, 1),
    (7, 2): (1, 0, 1),
    (7, 3): (2, 0, 0, 1),
    (7, 4): (1, 1, 0, 0, 1),
}

_TABLE_LIMIT = 256
_MAX_DEGREE = 8


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def default_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Built-in modulus for GF(p^m); p in {2,3,5,7}, m <= 4."""
    try:
        return _IRREDUCIBLE[(p, m)]
    except KeyError:
        raise OutOfRange(
            f"no built-in irreducible for (p={p}, m={m}); pass irr explicitly"
        ) from None


def _poly_divmod(num: list[int], den: list[int], p: int) -> tuple[list[int], list[int]]:
    num = list(num)
    dn = len(den) - 1
    inv = pow(den[-1], -1, p)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i] * inv % p
        if c:
            for j, dj in enumerate(den):
                num[i - dn + j] = (num[i - dn + j] - c * dj) % p
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return num[dn:], num


def _is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    # Exhaustive absence of monic factors of degree <= deg/2.
    deg = len(coeffs) - 1
    if deg == 1:
        return True
    f = list(coeffs)
    for d in range(1, deg // 2 + 1):
        for t in range(p**d):
            tail, tt = [], t
            for _ in range(d):
                tail.append(tt % p)
                tt //= p
            g = tail + [1]
            rem = list(f)
            dn = d
            for i in range(len(rem) - 1, dn - 1, -1):
                c = rem[i]
                if c:
                    for j, gj in enumerate(g):
                        rem[i - dn + j] = (rem[i - dn + j] - c * gj) % p
            if all(c == 0 for c in rem[:dn]):
                return False
    return True


class FieldSpec:
    """GF(p^m) with a fixed irreducible modulus.

    Value object: two specs are equal iff (p, m, irr) coincide.  All
    arithmetic is exposed both on packed integers (the *_i methods,
    used throughout the package) and on FieldElement wrappers.
    """

    __slots__ = ("p", "m", "irr", "q", "_red", "_mul_table", "_inv_table", "_hash")

    def __init__(self, p: int, m: int = 1, irr=None):
        if not is_prime(p):
            raise OutOfRange(f"p = {p} is not prime")
        if not 1 <= m <= _MAX_DEGREE:
            raise OutOfRange(f"extension degree m = {m} outside 1..{_MAX_DEGREE}")
        if irr is None:
            irr = default_irreducible(p, m)
        irr = tuple(int(c) % p for c in irr)
        if len(irr) != m + 1 or irr[-1] != 1:
            raise OutOfRange("irr must be monic of degree m, constant term first")
        if not _is_irreducible(irr, p):
            raise OutOfRange(f"modulus {list(irr)} is reducible over GF({p})")
        self.p = p
        self.m = m
        self.irr = irr
        self.q = p**m
        self._hash = hash((p, m, irr))
        # Reduction rows: digits of w^(m+t) mod irr for t = 0..m-2.
        red = []
        prev = [(-c) % p for c in irr[:m]]
        red.append(tuple(prev))
        for _ in range(1, m - 1):
            shifted = [0] + prev[:-1]
            top = prev[-1]
            prev = [(shifted[k] + top * red[0][k]) % p for k in range(m)]
            red.append(tuple(prev))
        self._red = tuple(red)
        if self.q <= _TABLE_LIMIT:
            self._mul_table = [
                [self._mul_raw(a, b) for b in range(self.q)] for a in range(self.q)
            ]
            inv = [0] * self.q
            for a in range(1, self.q):
                inv[a] = self._pow_raw(a, self.q - 2)
            self._inv_table = inv
        else:
            self._mul_table = None
            self._inv_table = None

    # -- packed-integer codec ------------------------------------------

    def enc(self, digits) -> int:
        v = 0
        for d in reversed(tuple(digits)):
            v = v * self.p + d % self.p
        return v

    def dec(self, v: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            v, r = divmod(v, self.p)
            out.append(r)
        return tuple(out)

    # -- arithmetic on packed integers ---------------------------------

    def add_i(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        da, db = self.dec(a), self.dec(b)
        return self.enc((x + y) % self.p for x, y in zip(da, db))

    def sub_i(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.p
        da, db = self.dec(a), self.dec(b)
        return self.enc((x - y) % self.p for x, y in zip(da, db))

    def neg_i(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return self.enc((-x) % self.p for x in self.dec(a))

    def _mul_raw(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        if m == 1:
            return a * b % p
        da, db = self.dec(a), self.dec(b)
        conv = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    conv[i + j] += x * y
        out = [c % p for c in conv[:m]]
        for t in range(m - 1):
            c = conv[m + t] % p
            if c:
                row = self._red[t]
                for k in range(m):
                    out[k] = (out[k] + c * row[k]) % p
        return self.enc(out)

    def mul_i(self, a: int, b: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_raw(a, b)

    def _pow_raw(self, a: int, e: int) -> int:
        r = 1
        base = a
        while e:
            if e & 1:
                r = self._mul_raw(r, base)
            base = self._mul_raw(base, base)
            e >>= 1
        return r

    def pow_i(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow_i(self.inv_i(a), -e)
        r = 1
        base = a
        while e:
            if e & 1:
                r = self.mul_i(r, base)
            base = self.mul_i(base, base)
            e >>= 1
        return r

    def inv_i(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in GF({self.q})")
        if self._inv_table is not None:
            return self._inv_table[a]
        return self._pow_raw(a, self.q - 2)

    def frob_i(self, a: int, e: int = 1) -> int:
        # t -> t^(p^e); an automorphism of order dividing m.
        return self.pow_i(a, self.p ** (e % self.m))

    # -- element constructors ------------------------------------------

    def element(self, x) -> "FieldElement":
        """Build an element from a digit sequence, an integer (meaning
        the prime-subfield element x mod p), or another FieldElement."""
        if isinstance(x, FieldElement):
            if x.spec != self:
                raise FieldMismatch("element belongs to a different field")
            return x
        if isinstance(x, int):
            return FieldElement(self, x % self.p)
        digits = tuple(int(c) for c in x)
        if len(digits) != self.m:
            raise OutOfRange(f"expected {self.m} digits, got {len(digits)}")
        return FieldElement(self, self.enc(digits))

    def from_index(self, v: int) -> "FieldElement":
        if not 0 <= v < self.q:
            raise OutOfRange(f"packed value {v} outside [0, {self.q})")
        return FieldElement(self, v)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def gen(self) -> "FieldElement":
        """The class of w (equals 1 when m == 1)."""
        return FieldElement(self, self.p % self.q if self.m > 1 else 1)

    def elements(self):
        for v in range(self.q):
            yield FieldElement(self, v)

    # -- value semantics -------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.m == other.m
            and self.irr == other.irr
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FieldSpec(p={self.p}, m={self.m}, irr={list(self.irr)})"


class FieldElement:
    """Immutable element of a FieldSpec with total equality."""

    __slots__ = ("spec", "val")

    def __init__(self, spec: FieldSpec, val: int):
        self.spec = spec
        self.val = val

    @property
    def digits(self) -> tuple[int, ...]:
        return self.spec.dec(self.val)

    def is_zero(self) -> bool:
        return self.val == 0

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldMismatch("operands from different fields")
            return other.val
        if isinstance(other, int):
            return other % self.spec.p
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.add_i(self.val, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.sub_i(self.val, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.sub_i(v, self.val))

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.mul_i(self.val, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, self.spec.mul_i(self.val, self.spec.inv_i(v)))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg_i(self.val))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow_i(self.val, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv_i(self.val))

    def frobenius(self, e: int = 1) -> "FieldElement":
        return FieldElement(self.spec, self.spec.frob_i(self.val, e))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.val == other.val
        if isinstance(other, int):
            return self.val == other % self.spec.p
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.val))

    def __repr__(self):
        if self.spec.m == 1:
            return str(self.val)
        terms = []
        for k, c in enumerate(self.digits):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else str(c)
                terms.append(f"{head}w" if k == 1 else f"{head}w^{k}")
        return "+".join(terms) if terms else "0"
