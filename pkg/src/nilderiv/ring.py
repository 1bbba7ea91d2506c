"""The truncated polynomial algebra T_n = GF(q)[x_0..x_{n-1}] / (x_i^p).

Elements are dense vectors of p^n field coefficients.  Basis slot i
holds the coefficient of the plain monomial x^alpha where alpha is the
base-p digit vector of i, so the index arithmetic of monomial
multiplication is ordinary integer addition whenever no base-p carry
occurs, and the product dies exactly when a carry would occur.

The ring is local: an element is a unit iff its constant coefficient is
nonzero, and every element of the maximal ideal m satisfies a^p = 0.
"""

from __future__ import annotations

import numpy as np

from .errors import NotAUnit, OutOfRange, RingMismatch, TooLarge
from .field import FieldElement, FieldSpec
from .padic import digits_fixed, factorial_unit

_DIM_CAP = 2**14


class RingSpec:
    """Shape of a truncated algebra: scalar field plus generator count."""

    __slots__ = ("field", "n")

    def __init__(self, field: FieldSpec, n: int):
        if n < 1:
            raise OutOfRange("need at least one generator")
        if field.p**n > _DIM_CAP:
            raise TooLarge(f"p^n = {field.p**n} exceeds the cap {_DIM_CAP}")
        self.field = field
        self.n = n

    def __eq__(self, other):
        return isinstance(other, RingSpec) and self.field == other.field and self.n == other.n

    def __hash__(self):
        return hash((self.field, self.n))

    def __repr__(self):
        return f"RingSpec(field={self.field!r}, n={self.n})"


def make_ring(p: int, m: int = 1, n: int = 1, irr=None) -> "TruncatedRing":
    """Convenience constructor for T_n over GF(p^m)."""
    return TruncatedRing(RingSpec(FieldSpec(p, m, irr), n))


class TruncatedRing:
    """Handle for T_n with basis bookkeeping and element constructors."""

    def __init__(self, spec: RingSpec):
        self.spec = spec
        self.field = spec.field
        self.p = spec.field.p
        self.n = spec.n
        self.dim = self.p**self.n
        self._alpha = tuple(digits_fixed(i, self.p, self.n) for i in range(self.dim))
        # Packed prime-subfield values of the divided-monomial coefficients
        # prod_k (i_k!)^{-1} mod p, one per basis slot.
        inv_fact = [factorial_unit(j, self.p)[1] for j in range(self.p)]
        coeffs = []
        for alpha in self._alpha:
            c = 1
            for d in alpha:
                c = c * inv_fact[d] % self.p
            coeffs.append(c)
        self._divided_coeff = tuple(coeffs)
        self._zero = RingElement(self, (0,) * self.dim)

    # -- indexing ---------------------------------------------------------

    def alpha_of(self, i: int) -> tuple[int, ...]:
        return self._alpha[i]

    def index_of(self, alpha) -> int:
        alpha = tuple(alpha)
        if len(alpha) != self.n or any(not 0 <= d < self.p for d in alpha):
            raise OutOfRange(f"{alpha} is not a multi-index with digits below {self.p}")
        v = 0
        for d in reversed(alpha):
            v = v * self.p + d
        return v

    # -- element constructors ----------------------------------------------

    def zero(self) -> "RingElement":
        return self._zero

    def one(self) -> "RingElement":
        return self.monomial(0)

    def scalar(self, c) -> "RingElement":
        v = self.field.element(c).val
        coeffs = [0] * self.dim
        coeffs[0] = v
        return RingElement(self, tuple(coeffs))

    def generator(self, i: int) -> "RingElement":
        if not 0 <= i < self.n:
            raise OutOfRange(f"generator index {i} outside [0, {self.n})")
        return self.monomial(self.p**i)

    @property
    def gens(self) -> tuple["RingElement", ...]:
        return tuple(self.generator(i) for i in range(self.n))

    def monomial(self, where, coeff=1) -> "RingElement":
        """Plain monomial coeff * x^alpha; `where` is a slot index or multi-index."""
        i = where if isinstance(where, int) else self.index_of(where)
        if not 0 <= i < self.dim:
            raise OutOfRange(f"basis slot {i} outside [0, {self.dim})")
        v = self.field.element(coeff).val
        coeffs = [0] * self.dim
        coeffs[i] = v
        return RingElement(self, tuple(coeffs))

    def divided_monomial(self, where) -> "RingElement":
        """The divided power x^[i] = prod_k x_k^(i_k) / i_k!  (x^[0] = 1)."""
        i = where if isinstance(where, int) else self.index_of(where)
        if not 0 <= i < self.dim:
            raise OutOfRange(f"basis slot {i} outside [0, {self.dim})")
        return self.monomial(i, self._divided_coeff[i])

    def element(self, coeffs) -> "RingElement":
        """Element from a dense length-p^n coefficient sequence."""
        vals = [self.field.element(c).val for c in coeffs]
        if len(vals) != self.dim:
            raise OutOfRange(f"expected {self.dim} coefficients, got {len(vals)}")
        return RingElement(self, tuple(vals))

    def basis(self):
        for i in range(self.dim):
            yield self.monomial(i)

    def elements(self):
        """All q^(p^n) ring elements; use only at enumerable scale."""
        q = self.field.q
        for code in range(q**self.dim):
            coeffs = []
            for _ in range(self.dim):
                code, r = divmod(code, q)
                coeffs.append(r)
            yield RingElement(self, tuple(coeffs))

    def random_element(self, rng, in_maximal_ideal: bool = False) -> "RingElement":
        coeffs = [rng.randrange(self.field.q) for _ in range(self.dim)]
        if in_maximal_ideal:
            coeffs[0] = 0
        return RingElement(self, tuple(coeffs))

    # -- derivatives ---------------------------------------------------------

    def partial_derivative(self, i: int, a: "RingElement") -> "RingElement":
        """d/dx_i, acting coefficientwise on monomials."""
        if not 0 <= i < self.n:
            raise OutOfRange(f"generator index {i} outside [0, {self.n})")
        if a.ring is not self and a.ring.spec != self.spec:
            raise RingMismatch("element from a different ring")
        mul, add = self.field.mul_i, self.field.add_i
        step = self.p**i
        out = [0] * self.dim
        for j, c in enumerate(a._c):
            if c:
                d = self._alpha[j][i]
                if d:
                    out[j - step] = add(out[j - step], mul(d % self.p, c))
        return RingElement(self, tuple(out))

    # -- prime-field view -----------------------------------------------------

    @property
    def fp_dim(self) -> int:
        return self.field.m * self.dim

    def to_fp(self, a: "RingElement") -> np.ndarray:
        m = self.field.m
        out = np.zeros(self.fp_dim, dtype=np.int64)
        for j, c in enumerate(a._c):
            if c:
                out[j * m : (j + 1) * m] = self.field.dec(c)
        return out

    def from_fp(self, vec) -> "RingElement":
        m, p = self.field.m, self.p
        coeffs = []
        for j in range(self.dim):
            digits = [int(vec[j * m + t]) % p for t in range(m)]
            coeffs.append(self.field.enc(digits))
        return RingElement(self, tuple(coeffs))

    def fp_basis_element(self, k: int) -> "RingElement":
        m = self.field.m
        slot, t = divmod(k, m)
        coeffs = [0] * self.dim
        coeffs[slot] = self.p**t
        return RingElement(self, tuple(coeffs))

    def fp_mult_matrix(self, a: "RingElement") -> np.ndarray:
        """Matrix of v -> a*v on the prime-field column view."""
        cols = [self.to_fp(a * self.fp_basis_element(k)) for k in range(self.fp_dim)]
        return np.column_stack(cols)

    # -- value semantics -------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, TruncatedRing) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"T_{self.n} over GF({self.field.q}) (dimension {self.dim})"


class RingElement:
    """Immutable dense element of a TruncatedRing."""

    __slots__ = ("ring", "_c")

    def __init__(self, ring: TruncatedRing, coeffs: tuple[int, ...]):
        self.ring = ring
        self._c = coeffs

    # -- coefficients -----------------------------------------------------------

    def coeff(self, i: int) -> FieldElement:
        return FieldElement(self.ring.field, self._c[i])

    def coeffs(self) -> tuple[FieldElement, ...]:
        f = self.ring.field
        return tuple(FieldElement(f, v) for v in self._c)

    def constant_term(self) -> FieldElement:
        return FieldElement(self.ring.field, self._c[0])

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self._c) if v)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self._c)

    def is_unit(self) -> bool:
        return self._c[0] != 0

    def in_maximal_ideal(self) -> bool:
        return self._c[0] == 0

    # -- arithmetic ----------------------------------------------------------------

    def _peer(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring is self.ring or other.ring.spec == self.ring.spec:
                return other
            raise RingMismatch("elements from different rings")
        if isinstance(other, (FieldElement, int)):
            return self.ring.scalar(other)
        return NotImplemented

    def __add__(self, other):
        o = self._peer(other)
        if o is NotImplemented:
            return NotImplemented
        add = self.ring.field.add_i
        return RingElement(self.ring, tuple(add(a, b) for a, b in zip(self._c, o._c)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._peer(other)
        if o is NotImplemented:
            return NotImplemented
        sub = self.ring.field.sub_i
        return RingElement(self.ring, tuple(sub(a, b) for a, b in zip(self._c, o._c)))

    def __rsub__(self, other):
        o = self._peer(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__sub__(self)

    def __neg__(self):
        neg = self.ring.field.neg_i
        return RingElement(self.ring, tuple(neg(a) for a in self._c))

    def __mul__(self, other):
        if isinstance(other, (FieldElement, int)):
            v = self.ring.field.element(other).val
            mul = self.ring.field.mul_i
            return RingElement(self.ring, tuple(mul(v, a) for a in self._c))
        o = self._peer(other)
        if o is NotImplemented:
            return NotImplemented
        ring = self.ring
        p = ring.p
        mul, add = ring.field.mul_i, ring.field.add_i
        alpha = ring._alpha
        out = [0] * ring.dim
        sa = [(i, v) for i, v in enumerate(self._c) if v]
        sb = [(j, v) for j, v in enumerate(o._c) if v]
        if p == 2:
            for i, a in sa:
                for j, b in sb:
                    if not i & j:
                        k = i | j
                        out[k] = add(out[k], mul(a, b))
        else:
            for i, a in sa:
                ai = alpha[i]
                for j, b in sb:
                    bj = alpha[j]
                    ok = True
                    for x, y in zip(ai, bj):
                        if x + y >= p:
                            ok = False
                            break
                    if ok:
                        k = i + j
                        out[k] = add(out[k], mul(a, b))
        return RingElement(ring, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        acc = self.ring.one()
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def inverse(self) -> "RingElement":
        """Unit inverse via the geometric series of the nilpotent part.

        Writing u = c(1 - w) with w in m, the inverse is
        c^{-1} * sum_{t < N} w^t where N = n(p-1)+1 kills m^N.
        """
        if not self.is_unit():
            raise NotAUnit("constant coefficient is zero")
        ring = self.ring
        c_inv = FieldElement(ring.field, ring.field.inv_i(self._c[0]))
        w = ring.one() - self * c_inv
        acc = ring.one()
        term = ring.one()
        bound = ring.n * (ring.p - 1) + 1
        for _ in range(1, bound):
            term = term * w
            if term.is_zero():
                break
            acc = acc + term
        return acc * c_inv

    # -- value semantics -------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.ring.spec == other.ring.spec and self._c == other._c
        if isinstance(other, int):
            return self == self.ring.scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.spec, self._c))

    def __repr__(self):
        terms = []
        f = self.ring.field
        for i, v in enumerate(self._c):
            if not v:
                continue
            alpha = self.ring._alpha[i]
            mono = "*".join(
                f"x{k}" if d == 1 else f"x{k}^{d}" for k, d in enumerate(alpha) if d
            )
            cstr = repr(FieldElement(f, v))
            if not mono:
                terms.append(cstr)
            elif v == 1:
                terms.append(mono)
            elif f.m > 1 and "+" in cstr:
                terms.append(f"({cstr})*{mono}")
            else:
                terms.append(f"{cstr}*{mono}")
        return " + ".join(terms) if terms else "0"


# -- small matrices over the ring (lists of lists of RingElement) ------------


def ring_mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0])
    ring = a[0][0].ring
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = ring.zero()
            for k in range(inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def ring_mat_det(a):
    """Determinant by cofactor expansion (desk-scale sizes only)."""
    n = len(a)
    if n == 1:
        return a[0][0]
    ring = a[0][0].ring
    acc = ring.zero()
    for j in range(n):
        if a[0][j].is_zero():
            continue
        minor = [[a[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = a[0][j] * ring_mat_det(minor)
        acc = acc - term if j % 2 else acc + term
    return acc


def ring_mat_inv(a):
    """Inverse of a square matrix over the local ring.

    Gauss-Jordan with unit pivots; a pivot column with no unit entry
    means the determinant lies in the maximal ideal.
    """
    n = len(a)
    ring = a[0][0].ring
    aug = [list(row) + [ring.one() if i == j else ring.zero() for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        pr = None
        for r in range(c, n):
            if aug[r][c].is_unit():
                pr = r
                break
        if pr is None:
            raise NotAUnit("matrix determinant is not a unit of the ring")
        aug[c], aug[pr] = aug[pr], aug[c]
        inv = aug[c][c].inverse()
        aug[c] = [v * inv for v in aug[c]]
        for r in range(n):
            if r != c and not aug[r][c].is_zero():
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def ring_linsolve(a, b):
    """Solve A x = b for square A with unit determinant."""
    inv = ring_mat_inv(a)
    return [row[0] for row in ring_mat_mul(inv, [[v] for v in b])]
