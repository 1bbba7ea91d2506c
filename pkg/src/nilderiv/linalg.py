"""Dense exact linear algebra over a FieldSpec.

Everything is fraction-free Gaussian elimination in the field itself;
there is no floating point anywhere.  Matrices store packed field
integers internally and hand out FieldElement values at the API.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FieldMismatch, NoSolution, SingularMatrix, OutOfRange
from .field import FieldElement, FieldSpec


class Matrix:
    """Immutable rows x cols matrix over a fixed field."""

    __slots__ = ("spec", "rows", "cols", "_r")

    def __init__(self, spec: FieldSpec, rows):
        data = []
        width = None
        for row in rows:
            packed = [self._pack(spec, x) for x in row]
            if width is None:
                width = len(packed)
            elif len(packed) != width:
                raise OutOfRange("ragged rows")
            data.append(packed)
        if not data or width == 0:
            raise OutOfRange("empty matrix")
        self.spec = spec
        self.rows = len(data)
        self.cols = width
        self._r = data

    @staticmethod
    def _pack(spec, x) -> int:
        if isinstance(x, FieldElement):
            if x.spec != spec:
                raise FieldMismatch("entry from a different field")
            return x.val
        return int(x) % spec.p

    @classmethod
    def _from_enc(cls, spec, data):
        m = object.__new__(cls)
        m.spec = spec
        m.rows = len(data)
        m.cols = len(data[0])
        m._r = data
        return m

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "Matrix":
        return cls._from_enc(spec, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, spec: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls._from_enc(spec, [[0] * cols for _ in range(rows)])

    # -- access ---------------------------------------------------------

    def __getitem__(self, ij) -> FieldElement:
        i, j = ij
        return FieldElement(self.spec, self._r[i][j])

    def entries(self) -> list[list[FieldElement]]:
        return [[FieldElement(self.spec, v) for v in row] for row in self._r]

    def is_zero(self) -> bool:
        return all(v == 0 for row in self._r for v in row)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.spec == other.spec
            and self._r == other._r
        )

    def __hash__(self):
        return hash((self.spec, tuple(tuple(r) for r in self._r)))

    # -- arithmetic -------------------------------------------------------

    def _check(self, other):
        if self.spec != other.spec:
            raise FieldMismatch("matrices over different fields")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        add = self.spec.add_i
        return Matrix._from_enc(
            self.spec,
            [[add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self._r, other._r)],
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        sub = self.spec.sub_i
        return Matrix._from_enc(
            self.spec,
            [[sub(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self._r, other._r)],
        )

    def __neg__(self) -> "Matrix":
        neg = self.spec.neg_i
        return Matrix._from_enc(self.spec, [[neg(a) for a in row] for row in self._r])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            self._check(other)
            if self.cols != other.rows:
                raise OutOfRange("inner dimensions disagree")
            mul, add = self.spec.mul_i, self.spec.add_i
            bt = list(zip(*other._r))
            out = []
            for row in self._r:
                orow = []
                for col in bt:
                    acc = 0
                    for a, b in zip(row, col):
                        if a and b:
                            acc = add(acc, mul(a, b))
                    orow.append(acc)
                out.append(orow)
            return Matrix._from_enc(self.spec, out)
        v = Matrix._pack(self.spec, other)
        mul = self.spec.mul_i
        return Matrix._from_enc(self.spec, [[mul(v, a) for a in row] for row in self._r])

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, e: int) -> "Matrix":
        if self.rows != self.cols:
            raise OutOfRange("powers need a square matrix")
        if e < 0:
            return self.inv() ** (-e)
        acc = Matrix.identity(self.spec, self.rows)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def transpose(self) -> "Matrix":
        return Matrix._from_enc(self.spec, [list(r) for r in zip(*self._r)])

    # -- vector action (column-vector convention) -------------------------

    def _apply_enc(self, vec: list[int]) -> list[int]:
        mul, add = self.spec.mul_i, self.spec.add_i
        out = []
        for row in self._r:
            acc = 0
            for a, b in zip(row, vec):
                if a and b:
                    acc = add(acc, mul(a, b))
            out.append(acc)
        return out

    def apply(self, vec) -> list[FieldElement]:
        packed = [Matrix._pack(self.spec, x) for x in vec]
        if len(packed) != self.cols:
            raise OutOfRange("vector length disagrees with column count")
        return [FieldElement(self.spec, v) for v in self._apply_enc(packed)]

    # -- elimination -------------------------------------------------------

    def _rref_enc(self) -> tuple[list[list[int]], list[int]]:
        sp = self.spec
        a = [list(row) for row in self._r]
        pivots = []
        r = 0
        for c in range(self.cols):
            if r >= self.rows:
                break
            pr = None
            for i in range(r, self.rows):
                if a[i][c]:
                    pr = i
                    break
            if pr is None:
                continue
            a[r], a[pr] = a[pr], a[r]
            inv = sp.inv_i(a[r][c])
            if inv != 1:
                a[r] = [sp.mul_i(inv, v) for v in a[r]]
            for i in range(self.rows):
                if i != r and a[i][c]:
                    f = a[i][c]
                    a[i] = [sp.sub_i(x, sp.mul_i(f, y)) for x, y in zip(a[i], a[r])]
            pivots.append(c)
            r += 1
        return a, pivots

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        a, pivots = self._rref_enc()
        return Matrix._from_enc(self.spec, a), tuple(pivots)

    def rank(self) -> int:
        return len(self._rref_enc()[1])

    def _nullspace_enc(self) -> list[list[int]]:
        sp = self.spec
        a, pivots = self._rref_enc()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for fc in free:
            v = [0] * self.cols
            v[fc] = 1
            for r, pc in enumerate(pivots):
                v[pc] = sp.neg_i(a[r][fc])
            basis.append(v)
        return basis

    def nullspace(self) -> list[list[FieldElement]]:
        """Basis of {v : A v = 0}; empty list for injective A."""
        return [
            [FieldElement(self.spec, x) for x in v] for v in self._nullspace_enc()
        ]

    def _solve_enc(self, b: list[int]):
        sp = self.spec
        aug = [row + [bv] for row, bv in zip(self._r, b)]
        a, pivots = Matrix._from_enc(sp, aug)._rref_enc()
        if self.cols in pivots:
            return None
        sol = [0] * self.cols
        for r, pc in enumerate(pivots):
            sol[pc] = a[r][self.cols]
        return sol

    def solve(self, b) -> "LinearSolution":
        """One exact solution of A x = b plus a nullspace basis.

        The particular solution is the canonical one with all free
        variables set to zero.  Raises NoSolution when inconsistent.
        """
        packed = [Matrix._pack(self.spec, x) for x in b]
        if len(packed) != self.rows:
            raise OutOfRange("right-hand side length disagrees with row count")
        sol = self._solve_enc(packed)
        if sol is None:
            raise NoSolution("inconsistent linear system")
        return LinearSolution(
            tuple(FieldElement(self.spec, v) for v in sol),
            tuple(
                tuple(FieldElement(self.spec, x) for x in v)
                for v in self._nullspace_enc()
            ),
        )

    def inv(self) -> "Matrix":
        if self.rows != self.cols:
            raise SingularMatrix("only square matrices can be inverted")
        sp = self.spec
        n = self.rows
        aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(self._r)]
        a, pivots = Matrix._from_enc(sp, aug)._rref_enc()
        if list(pivots[:n]) != list(range(n)):
            raise SingularMatrix("matrix has deficient rank")
        return Matrix._from_enc(sp, [row[n:] for row in a[:n]])

    def __repr__(self):
        body = "; ".join(" ".join(repr(FieldElement(self.spec, v)) for v in row) for row in self._r)
        return f"Matrix({self.rows}x{self.cols} over GF({self.spec.q}): {body})"


@dataclass(frozen=True)
class LinearSolution:
    particular: tuple[FieldElement, ...]
    nullspace: tuple[tuple[FieldElement, ...], ...]


# Contract-named conveniences.

def linsolve(a: Matrix, b) -> LinearSolution:
    return a.solve(b)


def rank(a: Matrix) -> int:
    return a.rank()


def rref(a: Matrix) -> Matrix:
    return a.rref()[0]


def mat_inv(a: Matrix) -> Matrix:
    return a.inv()


def mat_pow(a: Matrix, e: int) -> Matrix:
    return a**e
