"""Derivations of the truncated algebra as first-class operators.

A derivation is stored by its n generator images and extends to the
whole algebra by the Leibniz rule; every derivation automatically kills
the scalar copy of GF(q) because each scalar a satisfies a^q = a.  The
p^n x p^n matrix over GF(q) (and its prime-field expansion) is a cache
filled on first use.
"""

from __future__ import annotations

import threading

import numpy as np

from .errors import BadInput, NilderivError, RingMismatch
from .field import FieldElement
from .linalg import Matrix
from .padic import factorial_unit, lucas_binom
from .ring import RingElement, TruncatedRing


def multiplication_matrix(a: RingElement) -> Matrix:
    """Matrix of v -> a*v over GF(q)."""
    ring = a.ring
    cols = [(a * mono)._c for mono in ring.basis()]
    rows = [[col[i] for col in cols] for i in range(ring.dim)]
    return Matrix._from_enc(ring.field, rows)


def operator_to_fp(ring: TruncatedRing, mat: Matrix) -> np.ndarray:
    """Prime-field block expansion of a GF(q)-linear operator matrix."""
    m = ring.field.m
    dim = ring.dim
    out = np.zeros((dim * m, dim * m), dtype=np.int64)
    dec, mul = ring.field.dec, ring.field.mul_i
    for j in range(dim):
        for t in range(m):
            w = ring.p**t
            col = j * m + t
            for i in range(dim):
                v = mat._r[i][j]
                if v:
                    out[i * m : (i + 1) * m, col] = dec(mul(v, w))
    return out


class Derivation:
    """Leibniz extension of n generator images; immutable up to caches."""

    __slots__ = ("ring", "images", "_matrix", "_fp", "_p_powers", "_lock")

    def __init__(self, ring: TruncatedRing, images):
        images = tuple(images)
        if len(images) != ring.n:
            raise BadInput(f"expected {ring.n} generator images, got {len(images)}")
        for a in images:
            if not isinstance(a, RingElement) or a.ring.spec != ring.spec:
                raise RingMismatch("generator image from a different ring")
        self.ring = ring
        self.images = images
        self._matrix = None
        self._fp = None
        self._p_powers = None
        self._lock = threading.RLock()

    # -- application -------------------------------------------------------

    def _image_of_basis(self, j: int) -> RingElement:
        # d(x^alpha) = sum_nu alpha_nu x^(alpha - e_nu) d(x_nu)
        ring = self.ring
        alpha = ring.alpha_of(j)
        acc = ring.zero()
        for nu, d in enumerate(alpha):
            if d:
                mono = ring.monomial(j - ring.p**nu, d)
                acc = acc + mono * self.images[nu]
        return acc

    def matrix(self) -> Matrix:
        """Operator matrix on the monomial basis (column convention)."""
        if self._matrix is None:
            with self._lock:
                if self._matrix is None:
                    cols = [self._image_of_basis(j)._c for j in range(self.ring.dim)]
                    rows = [[col[i] for col in cols] for i in range(self.ring.dim)]
                    self._matrix = Matrix._from_enc(self.ring.field, rows)
        return self._matrix

    def fp_matrix(self) -> np.ndarray:
        if self._fp is None:
            with self._lock:
                if self._fp is None:
                    self._fp = operator_to_fp(self.ring, self.matrix())
        return self._fp

    def __call__(self, a: RingElement) -> RingElement:
        if a.ring.spec != self.ring.spec:
            raise RingMismatch("element from a different ring")
        return RingElement(self.ring, tuple(self.matrix()._apply_enc(list(a._c))))

    apply = __call__

    def apply_power(self, a: RingElement, e: int) -> RingElement:
        """d^e (a) by repeated application."""
        vec = list(a._c)
        mat = self.matrix()
        for _ in range(e):
            vec = mat._apply_enc(vec)
        return RingElement(self.ring, tuple(vec))

    def power_matrix(self, e: int) -> Matrix:
        return self.matrix() ** e

    def p_power_matrix(self, i: int) -> Matrix:
        """Matrix of d^(p^i), memoized; exactness makes the cache safe."""
        with self._lock:
            if self._p_powers is None:
                self._p_powers = [self.matrix()]
            while len(self._p_powers) <= i:
                self._p_powers.append(self._p_powers[-1] ** self.ring.p)
            return self._p_powers[i]

    # -- structure -----------------------------------------------------------

    def p_power(self, i: int) -> "Derivation":
        """The derivation d^(p^i) (a derivation again in characteristic p)."""
        if i < 0:
            raise BadInput("p-power exponent must be nonnegative")
        if i == 0:
            return self
        mat = self.p_power_matrix(i)
        images = [
            RingElement(self.ring, tuple(mat._apply_enc(list(g._c))))
            for g in self.ring.gens
        ]
        return Derivation(self.ring, images)

    def nilpotency_index(self):
        """Least e with d^e = 0, or None if d is not nilpotent.

        An operator on a p^n-dimensional space is nilpotent iff its
        p^n-th power vanishes, so a single power decides the question.
        """
        dim = self.ring.dim
        if not self.power_matrix(dim).is_zero():
            return None
        mat = self.matrix()
        acc = mat
        e = 1
        while not acc.is_zero():
            acc = acc * mat
            e += 1
        return e

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.images)

    def commutes_with(self, other: "Derivation") -> bool:
        a, b = self.matrix(), other.matrix()
        return a * b == b * a

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.ring.spec == other.ring.spec and all(
            a == b for a, b in zip(self.images, other.images)
        )

    def __hash__(self):
        return hash((self.ring.spec, tuple(a._c for a in self.images)))

    def __repr__(self):
        parts = ", ".join(f"x{i} -> {img!r}" for i, img in enumerate(self.images))
        return f"Derivation({parts})"


def zero_derivation(ring: TruncatedRing) -> Derivation:
    return Derivation(ring, [ring.zero()] * ring.n)


def partial_derivation(ring: TruncatedRing, i: int) -> Derivation:
    """The coordinate derivation d/dx_i."""
    images = [ring.one() if j == i else ring.zero() for j in range(ring.n)]
    return Derivation(ring, images)


def canonical_derivation(ring: TruncatedRing) -> Derivation:
    """sum_i x^[p^i - 1] d/dx_i, the standard nilpotent simple derivation."""
    images = [ring.divided_monomial(ring.p**i - 1) for i in range(ring.n)]
    return Derivation(ring, images)


def _check_local_pair(d: Derivation, x: RingElement):
    if x.ring.spec != d.ring.spec:
        raise RingMismatch("x from a different ring")
    if d(x) != d.ring.one():
        raise BadInput("d(x) != 1")
    if not (x**d.ring.p).is_zero():
        raise BadInput("x^p != 0")


def kill_p_power(d: Derivation, x: RingElement) -> Derivation:
    """Correct d to a derivation with vanishing p-th power.

    Returns d - (-1)^(p-1) * x^(p-1)/(p-1)! * d^p, which still sends x
    to 1 and satisfies x*out = x*d as operators.
    """
    _check_local_pair(d, x)
    ring = d.ring
    p = ring.p
    sign = (-1) ** (p - 1) % p
    _, wilson_inv = factorial_unit(p - 1, p)
    coeff = x ** (p - 1) * (sign * wilson_inv % p)
    dp = d.p_power_matrix(1)
    images = [
        img - coeff * RingElement(ring, tuple(dp._apply_enc(list(g._c))))
        for img, g in zip(d.images, ring.gens)
    ]
    return Derivation(ring, images)


def _poly_shift(coeffs: tuple[int, ...], steps: int, p: int) -> tuple[int, ...]:
    # f(h) -> f(h - steps), coefficients mod p, degree preserved.
    deg = len(coeffs) - 1
    out = [0] * (deg + 1)
    for l, c in enumerate(coeffs):
        if not c:
            continue
        acc = 1
        for k in range(l, -1, -1):
            out[k] = (out[k] + c * lucas_binom(l, k, p) * acc) % p
            acc = acc * (-steps) % p
    return tuple(out)


class ThetaSystem:
    """Orthogonal idempotents theta_0..theta_{p-1} of the algebra
    generated by h = x*d, together with the shift h -> h-1 that
    permutes them cyclically."""

    def __init__(self, d: Derivation, x: RingElement):
        _check_local_pair(d, x)
        ring = d.ring
        p = ring.p
        self.derivation = d
        self.x = x
        xm = multiplication_matrix(x)
        dm = d.matrix()
        self.h = xm * dm
        ident = Matrix.identity(ring.field, ring.dim)
        _, wilson_inv = factorial_unit(p - 1, p)
        thetas = []
        polys = []
        for i in range(p):
            mat = ident * wilson_inv
            poly = [wilson_inv]
            for j in range(p):
                if j == i:
                    continue
                mat = mat * (self.h - ident * j)
                # multiply the polynomial by (t - j)
                poly = [0] + poly
                for k in range(len(poly) - 1):
                    poly[k] = (poly[k] - j * poly[k + 1]) % p
            thetas.append(mat)
            polys.append(tuple(c % p for c in poly) + (0,) * (p - len(poly)))
        self.thetas = tuple(thetas)
        self.theta_polys = tuple(polys)
        self._ident = ident
        self._verify()

    def _verify(self):
        p = self.derivation.ring.p
        ident = self._ident
        total = self.thetas[0]
        for th in self.thetas[1:]:
            total = total + th
        if total != ident:
            raise NilderivError("internal: idempotents do not sum to the identity")
        for i in range(p):
            for j in range(p):
                prod = self.thetas[i] * self.thetas[j]
                want = self.thetas[i] if i == j else prod * 0
                if prod != want:
                    raise NilderivError("internal: idempotents are not orthogonal")
        ann = ident
        for j in range(p):
            ann = ann * (self.h - ident * j)
        if not ann.is_zero():
            raise NilderivError("internal: h(h-1)...(h-p+1) != 0")
        comp = ident
        for th in self.thetas:
            comp = comp * (ident - th)
        if not comp.is_zero():
            raise NilderivError("internal: prod (1 - theta_i) != 0")

    def delta(self, i: int) -> Matrix:
        """The operator (1 - theta_i) d; its p-th power vanishes."""
        return (self._ident - self.thetas[i]) * self.derivation.matrix()

    def shift_poly(self, coeffs, steps: int = 1) -> tuple[int, ...]:
        """Apply h -> h - steps to a polynomial in h (coefficient list)."""
        return _poly_shift(tuple(coeffs), steps, self.derivation.ring.p)


def theta_system(d: Derivation, x: RingElement) -> ThetaSystem:
    return ThetaSystem(d, x)


class TaylorProjection:
    """phi = sum_{i<p} (-1)^i x^i/i! d^i, a projection onto ker d.

    Requires d^p = 0, d(x) = 1, x^p = 0.  Coefficient extraction
    recovers a = sum_i phi(d^i(a)/i!) x^i exactly.
    """

    def __init__(self, d: Derivation, x: RingElement):
        if not d.power_matrix(d.ring.p).is_zero():
            raise BadInput("d^p != 0")
        _check_local_pair(d, x)
        ring = d.ring
        p = ring.p
        self.derivation = d
        self.x = x
        ident = Matrix.identity(ring.field, ring.dim)
        mat = Matrix.zeros(ring.field, ring.dim, ring.dim)
        term = ident
        for i in range(p):
            _, inv_fact = factorial_unit(i, p)
            sign = (-1) ** i % p
            mat = mat + multiplication_matrix(x**i) * term * (sign * inv_fact % p)
            term = term * d.matrix()
        self.matrix = mat

    def __call__(self, a: RingElement) -> RingElement:
        return RingElement(a.ring, tuple(self.matrix._apply_enc(list(a._c))))

    apply = __call__

    def coefficients(self, a: RingElement) -> list[RingElement]:
        """The ker-d coordinates of a along 1, x, ..., x^(p-1)."""
        ring = self.derivation.ring
        out = []
        vec = list(a._c)
        dm = self.derivation.matrix()
        for i in range(ring.p):
            _, inv_fact = factorial_unit(i, ring.p)
            scaled = RingElement(ring, tuple(vec)) * inv_fact
            out.append(self(scaled))
            vec = dm._apply_enc(vec)
        return out

    def reconstruct(self, coeffs) -> RingElement:
        ring = self.derivation.ring
        acc = ring.zero()
        xp = ring.one()
        for c in coeffs:
            acc = acc + c * xp
            xp = xp * self.x
        return acc


def taylor_projection(d: Derivation, x: RingElement) -> TaylorProjection:
    return TaylorProjection(d, x)


class KernelBasis:
    """ker d as an explicit subspace, in both scalar views."""

    def __init__(self, fq_basis, fp_basis):
        self.fq_basis = tuple(fq_basis)
        self.fp_basis = tuple(fp_basis)

    @property
    def fq_dim(self) -> int:
        return len(self.fq_basis)

    @property
    def fp_dim(self) -> int:
        return len(self.fp_basis)


def kernel_basis(d: Derivation) -> KernelBasis:
    """Exact nullspace of the derivation matrix.

    The prime-field basis comes from the prime-field view of the
    operator; the GF(q) basis from elimination over GF(q) directly.
    """
    from . import modp

    ring = d.ring
    fq_vecs = d.matrix()._nullspace_enc()
    fq_basis = [RingElement(ring, tuple(v)) for v in fq_vecs]
    fp_rows = modp.nullspace(d.fp_matrix(), ring.p)
    fp_basis = [ring.from_fp(row) for row in fp_rows]
    return KernelBasis(fq_basis, fp_basis)
