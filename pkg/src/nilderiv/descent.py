"""Iterative sequences and descents for a nilpotent derivation.

A descent is a chain 1 = x^[0], x^[1], ... with d(x^[i]) = x^[i-1]; an
iterative sequence additionally multiplies by the binomial rule
x^[i] x^[j] = C(i+j, i) x^[i+j].  A sequence of exponent s (length p^s)
is determined by its pillars x^[p^j], and the divided-power products of
the pillars rebuild it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import modp
from .derivation import Derivation, kernel_basis
from .errors import BadInput, BadWitness, NilderivError, NotNilpotent, TooLarge
from .field import FieldElement
from .padic import factorial_unit, lucas_binom
from .ring import RingElement, TruncatedRing


@dataclass(frozen=True)
class Verdict:
    """Outcome of a verification, carrying the first failing identity."""

    ok: bool
    failure: str | None = None

    def __bool__(self) -> bool:
        return self.ok


class DeltaDescent:
    """A plain descent chain; iterativity is not claimed."""

    def __init__(self, elements, derivation: Derivation | None = None):
        self.elements = tuple(elements)
        self.derivation = derivation
        self.ring = self.elements[0].ring

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i) -> RingElement:
        return self.elements[i]

    def __eq__(self, other):
        return isinstance(other, (DeltaDescent, IterativeDescent)) and self.elements == tuple(other.elements)

    def __hash__(self):
        return hash(tuple(e._c for e in self.elements))

    def verify_descent(self, d: Derivation | None = None) -> Verdict:
        d = d or self.derivation
        if d is None:
            return Verdict(False, "no derivation bound")
        if self.elements[0] != self.ring.one():
            return Verdict(False, "x^[0] != 1")
        for i in range(1, len(self.elements)):
            if d(self.elements[i]) != self.elements[i - 1]:
                return Verdict(False, f"d(x^[{i}]) != x^[{i - 1}]")
        return Verdict(True)


class IterativeDescent:
    """Iterative sequence of exponent s, optionally bound to a derivation."""

    def __init__(self, ring: TruncatedRing, exponent: int, pillars, elements, derivation=None):
        self.ring = ring
        self.exponent = exponent
        self.pillars = tuple(pillars)
        self.elements = tuple(elements)
        self.derivation = derivation

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i) -> RingElement:
        return self.elements[i] if i < len(self.elements) else self.ring.zero()

    def bind(self, d: Derivation) -> "IterativeDescent":
        return IterativeDescent(self.ring, self.exponent, self.pillars, self.elements, d)

    def __eq__(self, other):
        return isinstance(other, (DeltaDescent, IterativeDescent)) and self.elements == tuple(other.elements)

    def __hash__(self):
        return hash(tuple(e._c for e in self.elements))

    def __repr__(self):
        return f"IterativeDescent(exponent={self.exponent}, pillars={list(self.pillars)!r})"


def sequence_from_pillars(ring: TruncatedRing, pillars, derivation=None) -> IterativeDescent:
    """Rebuild the full sequence x^[i] = prod_k pillar_k^(i_k) / i_k!.

    Each pillar must have vanishing p-th power (equivalently, lie in the
    maximal ideal); a unit pillar is rejected.
    """
    pillars = tuple(pillars)
    p = ring.p
    s = len(pillars)
    if s < 1:
        raise BadInput("need at least one pillar")
    for k, pill in enumerate(pillars):
        if pill.ring.spec != ring.spec:
            raise BadInput(f"pillar {k} from a different ring")
        if not (pill**p).is_zero():
            raise NotNilpotent(f"pillar {k} has nonzero p-th power")
    # divided powers of each pillar: pillar^d / d!
    divided = []
    for pill in pillars:
        row = [ring.one()]
        for dexp in range(1, p):
            _, inv_fact = factorial_unit(dexp, p)
            row.append(pill**dexp * inv_fact)
        divided.append(row)
    elements = []
    for i in range(p**s):
        acc = ring.one()
        ii = i
        for k in range(s):
            ii, dig = divmod(ii, p)
            if dig:
                acc = acc * divided[k][dig]
        elements.append(acc)
    return IterativeDescent(ring, s, pillars, elements, derivation)


def verify_iterative_descent(seq: IterativeDescent, d: Derivation, full: bool = False) -> Verdict:
    """Check the descent and iterativity conditions.

    The cheap route checks the pillar identities d(x^[p^j]) = x^[p^j - 1]
    and x^[p^j]^p = 0 plus structural consistency, which together decide
    the question; full=True re-verifies the pairwise law and the whole
    descent chain exhaustively.
    """
    ring = seq.ring
    p = ring.p
    if seq.elements[0] != ring.one():
        return Verdict(False, "x^[0] != 1")
    if len(seq.elements) != p**seq.exponent:
        return Verdict(False, "sequence length is not p^s")
    for j, pill in enumerate(seq.pillars):
        if seq.elements[p**j] != pill:
            return Verdict(False, f"element p^{j} disagrees with pillar {j}")
        if not (pill**p).is_zero():
            return Verdict(False, f"x^[p^{j}]^p != 0")
        if d(pill) != seq.elements[p**j - 1]:
            return Verdict(False, f"d(x^[p^{j}]) != x^[p^{j} - 1]")
    rebuilt = sequence_from_pillars(ring, seq.pillars)
    for i, (a, b) in enumerate(zip(seq.elements, rebuilt.elements)):
        if a != b:
            return Verdict(False, f"x^[{i}] is not the divided product of the pillars")
    if full:
        size = len(seq.elements)
        for i in range(size):
            for j in range(size):
                lhs = seq.elements[i] * seq.elements[j]
                if i + j < size:
                    rhs = seq.elements[i + j] * lucas_binom(i + j, i, p)
                else:
                    rhs = ring.zero()
                if lhs != rhs:
                    return Verdict(False, f"x^[{i}] x^[{j}] != C({i + j},{i}) x^[{i + j}]")
        for i in range(1, size):
            if d(seq.elements[i]) != seq.elements[i - 1]:
                return Verdict(False, f"d(x^[{i}]) != x^[{i - 1}]")
    return Verdict(True)


def unit_preimage(d: Derivation, e: int, rng=None) -> RingElement | None:
    """Some y in the maximal ideal with d^e(y) = 1, or None.

    The canonical representative sets every free variable of the linear
    system to zero (minimal support in the fixed basis order); passing
    an rng picks a uniform solution instead.
    """
    if e < 1:
        raise BadInput("power must be >= 1")
    ring = d.ring
    mat = d.power_matrix(e)
    # unknowns are the coordinates on basis slots 1..dim-1 (slot 0 fixed to 0)
    cols = list(range(1, ring.dim))
    sub = [[row[c] for c in cols] for row in mat._r]
    target = [1] + [0] * (ring.dim - 1)
    from .linalg import Matrix

    a = Matrix._from_enc(ring.field, sub)
    sol = a._solve_enc(target)
    if sol is None:
        return None
    if rng is not None:
        basis = a._nullspace_enc()
        f = ring.field
        for v in basis:
            c = rng.randrange(f.q)
            if c:
                sol = [f.add_i(x, f.mul_i(c, y)) for x, y in zip(sol, v)]
    return RingElement(ring, (0, *sol))


def construct_descent(d: Derivation, witnesses) -> IterativeDescent:
    """Build the iterative descent from witnesses y_k with d^(p^k)(y_k) = 1.

    Pillar k+1 comes from the recursion
        x^[p^(k+1)] = (-1)^(p-1) d^(p^k - 1)( prod_{l<k} x^[p^l]^(p-1)/(p-1)!
                                               * phi_k(y_{k+1}) ),
        phi_k(z) = sum_{j<p} (-1)^j x^[p^k]^j / j! * d^(p^k j)(z),
    run uniformly from k = 0 (where it degenerates to x^[p] =
    (-1)^(p-1) phi_0(y_1)).  The result is verified before returning.
    """
    witnesses = tuple(witnesses)
    ring = d.ring
    p = ring.p
    s = len(witnesses)
    if s < 1:
        raise BadInput("need at least one witness")
    one = ring.one()
    for k, y in enumerate(witnesses):
        if y.ring.spec != ring.spec:
            raise BadWitness(k, "element from a different ring")
        if not (y**p).is_zero():
            raise BadWitness(k, "p-th power is nonzero")
        if d.apply_power(y, p**k) != one:
            raise BadWitness(k, f"d^(p^{k}) does not send it to 1")
    sign = (-1) ** (p - 1) % p
    _, wilson_inv = factorial_unit(p - 1, p)
    pillars = [witnesses[0]]
    for k in range(s - 1):
        mk = d.p_power_matrix(k)
        # phi_k applied to y_{k+1}
        phi = ring.zero()
        vec = list(witnesses[k + 1]._c)
        for j in range(p):
            _, inv_fact = factorial_unit(j, p)
            coeff = (-1) ** j * inv_fact % p
            phi = phi + pillars[k] ** j * coeff * RingElement(ring, tuple(vec))
            vec = mk._apply_enc(vec)
        prod = one
        for l in range(k):
            prod = prod * (pillars[l] ** (p - 1) * wilson_inv)
        pillar = d.apply_power(prod * phi, p**k - 1) * sign
        pillars.append(pillar)
    seq = sequence_from_pillars(ring, pillars, derivation=d)
    verdict = verify_iterative_descent(seq, d)
    if not verdict:
        raise NilderivError(f"internal: constructed sequence fails: {verdict.failure}")
    return seq


@dataclass(frozen=True)
class LambdaTuple:
    """Tuple of descent-translating constants in ker d with zero p-th power."""

    constants: tuple[RingElement, ...]

    def __len__(self):
        return len(self.constants)

    def __getitem__(self, j) -> RingElement:
        return self.constants[j]


class NilFiltration:
    """The chain N_i = ker d^(i+1), with prime-field bases."""

    def __init__(self, bases, fp_dims):
        self.bases = tuple(tuple(b) for b in bases)
        self.fp_dims = tuple(fp_dims)

    def __len__(self):
        return len(self.bases)


def nil_filtration(d: Derivation, descent) -> NilFiltration:
    """Compute N_i two ways and insist they agree.

    Route one: nullspace of the (i+1)-th power in the prime-field view.
    Route two: the span of (ker d) x^[j] for j <= i.
    """
    if descent.derivation is None or descent.derivation != d:
        raise BadInput("descent is not bound to this derivation")
    ring = d.ring
    p = ring.p
    fp = d.fp_matrix()
    kern = kernel_basis(d)
    bases = []
    dims = []
    power = fp.copy()
    product_rows: list[np.ndarray] = []
    for i in range(len(descent.elements)):
        if i:
            power = power @ fp % p
        route1 = modp.nullspace(power, p)
        for kb in kern.fp_basis:
            product_rows.append(ring.to_fp(kb * descent.elements[i]))
        route2 = modp.row_basis(np.vstack(product_rows), p)
        if not modp.same_rowspace(route1, route2, p):
            raise NilderivError(f"internal: the two computations of N_{i} disagree")
        bases.append(tuple(ring.from_fp(row) for row in route2))
        dims.append(len(route2))
    return NilFiltration(bases, dims)


def _peel_coordinates(d: Derivation, basis_chain, u: RingElement) -> list[RingElement]:
    """Coordinates of u in the ker-d module basis given by a descent chain.

    basis_chain[t] must satisfy d^t(basis_chain[t]) = 1, so the top
    coefficient of u in N_t is d^t(u) and peeling recurses downward.
    """
    coords = [None] * len(basis_chain)
    cur = u
    for t in range(len(basis_chain) - 1, 0, -1):
        c = d.apply_power(cur, t)
        coords[t] = c
        if not c.is_zero():
            cur = cur - c * basis_chain[t]
    coords[0] = cur
    return coords


def normalize_descent(d: Derivation, ys) -> DeltaDescent:
    """The unique descent with x^[1] = y^[1] and zero constant parts.

    Input: y^[0] .. y^[m] with d^i(y^[i]) = 1.  Starting from the
    explicit descent z^[i] = d^(m-i)(y^[m]), the translation constants
    lambda_i = -c'_{i,0} - sum_t lambda_t c'_{i-t,0} cancel every
    constant coordinate; re-running on the output is the identity.
    """
    ys = tuple(ys)
    ring = d.ring
    m = len(ys) - 1
    if m < 1:
        raise BadInput("need y^[0] .. y^[m] with m >= 1")
    one = ring.one()
    for i, y in enumerate(ys):
        if d.apply_power(y, i) != one:
            raise BadWitness(i, f"d^{i} does not send it to 1")
    z = [d.apply_power(ys[m], m - i) for i in range(m + 1)]
    const = [None] * (m + 1)
    for i in range(1, m + 1):
        const[i] = _peel_coordinates(d, ys[: i + 1], z[i])[0]
    lam = [ring.zero()] * (m + 1)
    for i in range(1, m + 1):
        acc = -const[i]
        for t in range(1, i):
            acc = acc - lam[t] * const[i - t]
        lam[i] = acc
    out = []
    for i in range(m + 1):
        acc = z[i]
        for j in range(1, i + 1):
            acc = acc + lam[j] * z[i - j]
        out.append(acc)
    result = DeltaDescent(out, derivation=d)
    verdict = result.verify_descent()
    if not verdict:
        raise NilderivError(f"internal: normalized chain fails: {verdict.failure}")
    for i in range(1, m + 1):
        c0 = _peel_coordinates(d, ys[: i + 1], out[i])[0]
        if not c0.is_zero():
            raise NilderivError("internal: constant part survived normalization")
    return result


def translate_descent(descent, lambdas) -> DeltaDescent:
    """Shift a descent by constants: x^[i]' = x^[i] + sum_j lam_j x^[i-j].

    Requires every lam_j in ker d.  The output is again a descent;
    iterativity is not guaranteed and not claimed.
    """
    d = descent.derivation
    if d is None:
        raise BadInput("descent is not bound to a derivation")
    lambdas = tuple(lambdas)
    elements = tuple(descent.elements)
    if len(lambdas) != len(elements) - 1:
        raise BadInput(f"expected {len(elements) - 1} constants, got {len(lambdas)}")
    for j, lam in enumerate(lambdas, start=1):
        if not d(lam).is_zero():
            raise BadInput(f"lambda_{j} is not in ker d")
    out = [elements[0]]
    for i in range(1, len(elements)):
        acc = elements[i]
        for j in range(1, i + 1):
            acc = acc + lambdas[j - 1] * elements[i - j]
        out.append(acc)
    result = DeltaDescent(out, derivation=d)
    verdict = result.verify_descent()
    if not verdict:
        raise NilderivError(f"internal: translated chain fails: {verdict.failure}")
    return result


def _require_bound_pair(reference: IterativeDescent, other: IterativeDescent):
    if reference.exponent != other.exponent:
        raise BadInput("descents have different exponents")
    d = reference.derivation or other.derivation
    if d is None:
        raise BadInput("neither descent is bound to a derivation")
    for seq in (reference, other):
        verdict = verify_iterative_descent(seq, d)
        if not verdict:
            raise BadInput(f"not an iterative descent: {verdict.failure}")
    return d


def r_map(reference: IterativeDescent, other: IterativeDescent) -> LambdaTuple:
    """Constants of `other` in the ker-d + m decomposition of `reference`.

    lambda_j is the constant coordinate of the j-th pillar of `other`
    relative to the reference descent.  The map depends on the choice
    of reference, which is therefore explicit in the signature.
    """
    d = _require_bound_pair(reference, other)
    ring = reference.ring
    p = ring.p
    out = []
    for j in range(reference.exponent):
        coords = _peel_coordinates(d, reference.elements, other.pillars[j])
        lam = coords[0]
        if not d(lam).is_zero() or not (lam**p).is_zero():
            raise NilderivError("internal: extracted constant is not a nilpotent constant")
        out.append(lam)
    return LambdaTuple(tuple(out))


def descent_from_constants(reference: IterativeDescent, lams: LambdaTuple) -> IterativeDescent:
    """Inverse of r_map: the iterative descent whose constants are `lams`."""
    d = reference.derivation
    if d is None:
        raise BadInput("reference descent is not bound to a derivation")
    ring = reference.ring
    p = ring.p
    if len(lams) != reference.exponent:
        raise BadInput("constant tuple length disagrees with the exponent")
    _, wilson_inv = factorial_unit(p - 1, p)
    pillars: list[RingElement] = []
    mat = d.matrix()
    for j in range(reference.exponent):
        target = ring.one()
        for l in range(j):
            target = target * (pillars[l] ** (p - 1) * wilson_inv)
        sol = mat._solve_enc(list(target._c))
        if sol is None:
            raise NilderivError("internal: descent step is unsolvable")
        z0 = RingElement(ring, tuple(sol))
        c0 = _peel_coordinates(d, reference.elements, z0)[0]
        pillars.append(z0 - c0 + lams[j])
    seq = sequence_from_pillars(ring, pillars, derivation=d)
    verdict = verify_iterative_descent(seq, d)
    if not verdict:
        raise NilderivError(f"internal: rebuilt descent fails: {verdict.failure}")
    return seq


def _kernel_combinations(ring: TruncatedRing, basis, counter, cap):
    """All GF(q)-combinations of kernel basis vectors, in packed order."""
    q = ring.field.q
    total = q ** len(basis)
    counter[0] += total
    if counter[0] > cap:
        raise TooLarge(f"descent enumeration exceeds the cap of {cap} candidates")
    combos = []
    for code in range(total):
        acc = ring.zero()
        cc = code
        for b in basis:
            cc, r = divmod(cc, q)
            if r:
                acc = acc + b * FieldElement(ring.field, r)
        combos.append(acc)
    return combos


def enumerate_descents(d: Derivation, s: int, max_candidates: int = 2**20) -> list[IterativeDescent]:
    """Every iterative descent of exponent s, by exhaustive search.

    Pillar j ranges over the affine set of solutions of
    d(z) = x^[p^j - 1] that lie in the maximal ideal; the search either
    completes exhaustively or refuses (never samples).
    """
    ring = d.ring
    p = ring.p
    if s < 1:
        raise BadInput("exponent must be >= 1")
    _, wilson_inv = factorial_unit(p - 1, p)
    kern = kernel_basis(d).fq_basis
    counter = [0]
    combos = _kernel_combinations(ring, kern, counter, max_candidates)
    mat = d.matrix()
    results: list[IterativeDescent] = []

    def extend(pillars: list[RingElement]):
        j = len(pillars)
        if j == s:
            seq = sequence_from_pillars(ring, pillars, derivation=d)
            if verify_iterative_descent(seq, d):
                results.append(seq)
            return
        target = ring.one()
        for l in range(j):
            target = target * (pillars[l] ** (p - 1) * wilson_inv)
        sol = mat._solve_enc(list(target._c))
        if sol is None:
            return
        base = RingElement(ring, tuple(sol))
        counter[0] += len(combos)
        if counter[0] > max_candidates:
            raise TooLarge(f"descent enumeration exceeds the cap of {max_candidates} candidates")
        for shift in combos:
            z = base + shift
            if z.in_maximal_ideal():
                extend(pillars + [z])

    extend([])
    return results


def enumerate_constants(d: Derivation, s: int, max_candidates: int = 2**20) -> list[LambdaTuple]:
    """Every tuple (lam_0..lam_{s-1}) with lam in ker d and lam^p = 0."""
    ring = d.ring
    if s < 1:
        raise BadInput("exponent must be >= 1")
    kern = kernel_basis(d).fq_basis
    counter = [0]
    combos = _kernel_combinations(ring, kern, counter, max_candidates)
    nil = [c for c in combos if c.in_maximal_ideal()]
    total = len(nil) ** s
    counter[0] += total
    if counter[0] > max_candidates:
        raise TooLarge(f"constant enumeration exceeds the cap of {max_candidates} candidates")
    out = []
    for code in range(total):
        cc = code
        tup = []
        for _ in range(s):
            cc, r = divmod(cc, len(nil))
            tup.append(nil[r])
        out.append(LambdaTuple(tuple(tup)))
    return out
