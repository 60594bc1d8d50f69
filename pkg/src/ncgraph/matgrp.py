"""Square matrices over finite fields and explicit linear/unitary constructions.

Vectors are rows and matrices act on the right (``v -> v @ A``), so the
stabiliser of the line spanned by ``e_1`` consists of the matrices whose first
row is a multiple of ``e_1``.  The unitary form on ``GF(q^2)^n`` has Gram
matrix ``I_n``: ``<u, v> = sum u_i v_i^q``.
"""

from __future__ import annotations

import itertools
import math
import random
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceeded, PreconditionError
from .finfield import (
    FieldSpec,
    Poly,
    gf,
    is_prime,
    monic_polys,
    poly_is_irreducible,
    prime_factors,
    prime_power,
    nullspace,
    rref,
)

MAX_ENUM = 10**7


# -- batched helpers on raw code arrays ---------------------------------------

def matmul(spec: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of (stacks of) matrices given as field-code arrays."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if spec.k == 1:
        return np.matmul(a, b) % spec.p
    prod = spec.vmul(a[..., :, :, None], b[..., None, :, :])
    return spec.vsum(prod, axis=-2)


def _det_codes(spec: FieldSpec, m: np.ndarray) -> int:
    m = [[int(v) for v in row] for row in m]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = spec.neg(det)
        pv = m[c][c]
        det = spec.mul(det, pv)
        inv = spec.inv(pv)
        for r in range(c + 1, n):
            if m[r][c]:
                f = spec.mul(m[r][c], inv)
                m[r] = [spec.sub(x, spec.mul(f, y)) for x, y in zip(m[r], m[c])]
    return det


def _inverse_codes(spec: FieldSpec, m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    aug = np.concatenate([np.asarray(m, dtype=np.int64), np.eye(n, dtype=np.int64)], axis=1)
    red, pivots = rref(spec, aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return red[:, n:]


# -- matrices -------------------------------------------------------------------

class Matrix:
    """Immutable ``n x n`` matrix of field codes."""

    __slots__ = ("spec", "a")

    def __init__(self, spec: FieldSpec, entries):
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise PreconditionError("matrix must be square")
        if a.size and (a.min() < 0 or a.max() >= spec.q):
            raise PreconditionError("entry outside the field")
        a.setflags(write=False)
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "a", a)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "Matrix":
        return cls(spec, np.eye(n, dtype=np.int64))

    @classmethod
    def scalar(cls, spec: FieldSpec, n: int, c: int) -> "Matrix":
        return cls(spec, np.eye(n, dtype=np.int64) * c)

    @classmethod
    def diag(cls, spec: FieldSpec, entries: Sequence[int]) -> "Matrix":
        return cls(spec, np.diag(np.asarray(entries, dtype=np.int64)))

    @classmethod
    def unit(cls, spec: FieldSpec, n: int, i: int, j: int) -> "Matrix":
        """``E_{i,j}`` with 0-based indices."""
        a = np.zeros((n, n), dtype=np.int64)
        a[i, j] = 1
        return cls(spec, a)

    @classmethod
    def block_diag(cls, spec: FieldSpec, *blocks: "Matrix") -> "Matrix":
        n = sum(b.n for b in blocks)
        a = np.zeros((n, n), dtype=np.int64)
        o = 0
        for b in blocks:
            a[o:o + b.n, o:o + b.n] = b.a
            o += b.n
        return cls(spec, a)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def _check(self, other: "Matrix") -> None:
        if other.spec != self.spec or other.n != self.n:
            raise PreconditionError("dimension or field mismatch")

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.spec == other.spec and np.array_equal(self.a, other.a)

    def __hash__(self) -> int:
        return hash((self.spec, self.a.tobytes()))

    def __mul__(self, other):
        if isinstance(other, Matrix):
            self._check(other)
            return Matrix(self.spec, matmul(self.spec, self.a, other.a))
        if isinstance(other, int):
            return Matrix(self.spec, self.spec.vmul(self.a, other))
        return NotImplemented

    __matmul__ = __mul__

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.spec, self.spec.vadd(self.a, other.a))

    def __neg__(self) -> "Matrix":
        return Matrix(self.spec, self.spec.vneg(self.a))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __pow__(self, e: int) -> "Matrix":
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = Matrix.identity(self.spec, self.n)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def det(self) -> int:
        return _det_codes(self.spec, self.a)

    def inverse(self) -> "Matrix":
        return Matrix(self.spec, _inverse_codes(self.spec, self.a))

    def transpose(self) -> "Matrix":
        return Matrix(self.spec, self.a.T)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def sigma(self, e: int) -> "Matrix":
        """Entrywise ``alpha -> alpha**e`` (a field automorphism when e is a power of p)."""
        return Matrix(self.spec, self.spec.vpow(self.a, e))

    def is_scalar(self) -> bool:
        d = self.a[0, 0]
        return bool(np.array_equal(self.a, np.eye(self.n, dtype=np.int64) * d))

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.a, np.eye(self.n, dtype=np.int64)))

    def conj(self, f: "Matrix") -> "Matrix":
        """``f^-1 self f``."""
        return f.inverse() * self * f

    def commutator(self, other: "Matrix") -> "Matrix":
        """``[self, other] = self^-1 other^-1 self other``."""
        return self.inverse() * other.inverse() * self * other

    def order(self, limit: int = 10**7) -> int:
        cur = self
        for t in range(1, limit + 1):
            if cur.is_identity():
                return t
            cur = cur * self
        raise CapExceeded("matrix order search exceeded its limit")

    def apply(self, v: Sequence[int]) -> np.ndarray:
        """Row vector ``v @ self``."""
        return matmul(self.spec, np.asarray(v, dtype=np.int64)[None, :], self.a)[0]

    def tolist(self) -> list[list[int]]:
        return self.a.tolist()

    def __repr__(self) -> str:
        return f"Matrix({self.spec}, {self.a.tolist()})"


# -- unitary geometry -----------------------------------------------------------

@dataclass(frozen=True)
class UnitarySpace:
    """``GF(q^2)^n`` with the unitary form of Gram matrix ``I_n``."""

    n: int
    q: int
    spec: FieldSpec = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError("dimension must be positive")
        prime_power(self.q)
        object.__setattr__(self, "spec", gf(self.q * self.q))

    def sigma(self, a):
        return self.spec.vpow(a, self.q)

    def form(self, u: Sequence[int], v: Sequence[int]) -> int:
        s = self.spec
        return int(s.vsum(s.vmul(np.asarray(u), self.sigma(np.asarray(v))), axis=-1))

    def norm(self, v: Sequence[int]) -> int:
        return self.form(v, v)

    def gram(self) -> Matrix:
        return Matrix.identity(self.spec, self.n)

    @cached_property
    def omega(self) -> int:
        return self.spec.generator

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.n, dtype=np.int64)
        v[i] = 1
        return v


class Subspace:
    """A subspace in canonical (reduced row echelon) form."""

    __slots__ = ("spec", "basis", "ambient")

    def __init__(self, spec: FieldSpec, rows, ambient: UnitarySpace | None = None):
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim == 1:
            rows = rows[None, :]
        red, pivots = rref(spec, rows) if rows.shape[0] else (rows, [])
        self.spec = spec
        self.basis = red[: len(pivots)].copy()
        self.basis.setflags(write=False)
        self.ambient = ambient

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def degree(self) -> int:
        return self.basis.shape[1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.spec == other.spec and np.array_equal(self.basis, other.basis)

    def __hash__(self) -> int:
        return hash(self.basis.tobytes())

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, basis={self.basis.tolist()})"

    def contains(self, v: Sequence[int]) -> bool:
        return Subspace(self.spec, np.vstack([self.basis, np.asarray(v)[None, :]])).dim == self.dim

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.spec, np.vstack([self.basis, other.basis]), self.ambient)

    def image(self, A: Matrix) -> "Subspace":
        return Subspace(self.spec, matmul(self.spec, self.basis, A.a), self.ambient)

    def perp(self, space: UnitarySpace | None = None) -> "Subspace":
        """``{v : <u, v> = 0 for all u}`` under the unitary form."""
        space = space or self.ambient
        if space is None:
            raise PreconditionError("perpendicular space needs a unitary ambient space")
        if self.dim == 0:
            return Subspace(self.spec, np.eye(space.n, dtype=np.int64), space)
        # <u, v> = sum u_i v_i^q = 0  <=>  sum u_i^(q) v_i = 0 after applying sigma
        rows = space.sigma(self.basis)
        return Subspace(self.spec, nullspace(self.spec, rows), space)

    def is_totally_singular(self, space: UnitarySpace | None = None) -> bool:
        space = space or self.ambient
        return all(space.form(u, v) == 0 for u in self.basis for v in self.basis)

    def is_nondegenerate(self, space: UnitarySpace | None = None) -> bool:
        space = space or self.ambient
        gram = np.array([[space.form(u, v) for v in self.basis] for u in self.basis], dtype=np.int64)
        return self.dim == 0 or _det_codes(self.spec, gram) != 0

    def vectors(self) -> Iterator[np.ndarray]:
        for coeffs in itertools.product(range(self.spec.q), repeat=self.dim):
            if any(coeffs):
                yield matmul(self.spec, np.array(coeffs)[None, :], self.basis)[0]


def acts_as_scalar(A: Matrix, U: Subspace) -> int | None:
    """The scalar by which ``A`` acts on ``U`` (vectors to the right), or None."""
    if U.dim == 0:
        return 1
    images = matmul(A.spec, U.basis, A.a)
    lead = int(np.flatnonzero(U.basis[0])[0])
    c = int(images[0, lead])
    expected = A.spec.vmul(U.basis, c)
    return c if np.array_equal(images, expected) else None


def stabilizes(A: Matrix, U: Subspace) -> bool:
    return U.image(A) == U


# -- companion matrices and characteristic polynomials -------------------------

def companion_matrix(f: Poly) -> Matrix:
    """Companion matrix with ones on the superdiagonal and ``-f_0..-f_{n-1}`` in the last row."""
    if not f.is_monic():
        raise PreconditionError("companion matrix needs a monic polynomial")
    n = f.degree
    if n < 1:
        raise PreconditionError("degree must be at least 1")
    spec = f.spec
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        a[i, i + 1] = 1
    a[n - 1] = [spec.neg(f[i]) for i in range(n)]
    return Matrix(spec, a)


def hypercompanion_matrix(f: Poly, k: int) -> Matrix:
    """Block upper-bidiagonal matrix with ``k`` companion blocks and ``E_{n,1}`` links."""
    if k < 1:
        raise PreconditionError("k must be positive")
    if not poly_is_irreducible(f):
        raise PreconditionError("hypercompanion matrix needs an irreducible polynomial")
    c = companion_matrix(f)
    n = f.degree
    a = np.zeros((k * n, k * n), dtype=np.int64)
    for b in range(k):
        a[b * n:(b + 1) * n, b * n:(b + 1) * n] = c.a
        if b + 1 < k:
            a[b * n + n - 1, (b + 1) * n] = 1
    return Matrix(f.spec, a)


def char_poly(A: Matrix) -> Poly:
    """``det(xI - A)`` via similarity to upper Hessenberg form."""
    spec = A.spec
    n = A.n
    h = [[int(v) for v in row] for row in A.a]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if h[i][m - 1]), None)
        if piv is None:
            continue
        if piv != m:
            h[m], h[piv] = h[piv], h[m]
            for row in h:
                row[m], row[piv] = row[piv], row[m]
        inv = spec.inv(h[m][m - 1])
        for i in range(m + 1, n):
            t = spec.mul(h[i][m - 1], inv)
            if not t:
                continue
            h[i] = [spec.sub(x, spec.mul(t, y)) for x, y in zip(h[i], h[m])]
            for row in h:
                row[m] = spec.add(row[m], spec.mul(t, row[i]))
    x = Poly.x(spec)
    polys = [Poly.constant(spec, 1)]
    for m in range(n):
        p = (x - Poly.constant(spec, h[m][m])) * polys[m]
        prod = 1
        for i in range(1, m + 1):
            prod = spec.mul(prod, h[m - i + 1][m - i])
            coef = spec.mul(prod, h[m - i][m])
            if coef:
                p = p - Poly.constant(spec, coef) * polys[m - i]
        polys.append(p)
    return polys[n]


def char_poly_cofactor(A: Matrix) -> Poly:
    """``det(xI - A)`` by Laplace expansion with polynomial entries (small n only)."""
    spec = A.spec
    n = A.n
    if n > 8:
        raise CapExceeded("cofactor expansion limited to n <= 8")
    x = Poly.x(spec)
    entries = [[(x if i == j else Poly.constant(spec, 0)) - Poly.constant(spec, int(A.a[i, j]))
                for j in range(n)] for i in range(n)]

    def det(rows: tuple[int, ...], cols: tuple[int, ...]) -> Poly:
        if len(rows) == 1:
            return entries[rows[0]][cols[0]]
        total = Poly.constant(spec, 0)
        r, rest = rows[0], rows[1:]
        for k, c in enumerate(cols):
            term = entries[r][c] * det(rest, cols[:k] + cols[k + 1:])
            total = total + term if k % 2 == 0 else total - term
        return total

    return det(tuple(range(n)), tuple(range(n)))


def poly_at_matrix(f: Poly, A: Matrix) -> Matrix:
    result = Matrix(A.spec, np.zeros((A.n, A.n), dtype=np.int64))
    for c in reversed(f.coeffs):
        result = result * A + Matrix.scalar(A.spec, A.n, int(c))
    return result


def is_cyclic_matrix(A: Matrix) -> bool:
    """Whether the minimal polynomial of ``A`` has degree ``n``."""
    n = A.n
    powers = [Matrix.identity(A.spec, n)]
    for _ in range(n - 1):
        powers.append(powers[-1] * A)
    rows = np.array([p.a.reshape(-1) for p in powers], dtype=np.int64)
    _, piv = rref(A.spec, rows)
    return len(piv) == n


# -- unitary membership and witnesses ---------------------------------------

def in_special_unitary(A: Matrix, space: UnitarySpace) -> bool:
    """``det A = 1`` and ``A A^{sigma T} = I``."""
    if A.spec != space.spec or A.n != space.n:
        raise PreconditionError("matrix does not match the unitary space")
    if A.det() != 1:
        return False
    return (A * A.sigma(space.q).T).is_identity()


def in_general_unitary(A: Matrix, space: UnitarySpace) -> bool:
    if A.spec != space.spec or A.n != space.n:
        raise PreconditionError("matrix does not match the unitary space")
    return (A * A.sigma(space.q).T).is_identity()


def _unit_root(space: UnitarySpace) -> int:
    """``omega^(q-1)``: a generator of the norm-one subgroup of order ``q+1``."""
    return space.spec.pow(space.omega, space.q - 1)


def unitary_scalar_witness_nondegenerate(space: UnitarySpace) -> Matrix | None:
    """Non-scalar element of SU acting as a scalar on the span of ``e_2..e_n``.

    Such an element must be ``diag(a^-(n-1), a, ..., a)`` with ``a^(q+1) = 1``;
    it is scalar for every such ``a`` exactly when ``q + 1`` divides ``n``.
    """
    n, q, s = space.n, space.q, space.spec
    if n < 2:
        raise PreconditionError("n must be at least 2")
    if n % (q + 1) == 0:
        return None
    lam = _unit_root(space)
    return Matrix.diag(s, [s.pow(lam, -(n - 1))] + [lam] * (n - 1))


def nondegenerate_hyperplane(space: UnitarySpace) -> Subspace:
    return Subspace(space.spec, np.eye(space.n, dtype=np.int64)[1:], space)


def singular_witness_parameters(space: UnitarySpace) -> tuple[int, int]:
    """``(gamma, delta)`` with ``delta^(q+1) = -1``."""
    s, q, w = space.spec, space.q, space.omega
    if q % 2 == 0:
        return s.pow(w, q + 1), 1
    return w, s.pow(w, (q - 1) // 2)


def singular_hyperplane(space: UnitarySpace) -> Subspace:
    """``<delta e_1 + e_2, e_3, ..., e_n>``, whose perpendicular line is singular."""
    _, delta = singular_witness_parameters(space)
    rows = np.eye(space.n, dtype=np.int64)[1:].copy()
    rows[0, 0] = delta
    return Subspace(space.spec, rows, space)


def unitary_scalar_witness_singular(space: UnitarySpace) -> Matrix:
    """Non-scalar element of SU fixing ``singular_hyperplane(space)`` pointwise."""
    n, s = space.n, space.spec
    if n < 2:
        raise PreconditionError("n must be at least 2")
    g, d = singular_witness_parameters(space)
    gd = s.mul(g, d)
    block = Matrix(s, [[s.add(1, gd), g], [s.neg(s.mul(gd, d)), s.sub(1, gd)]])
    if n == 2:
        return block
    return Matrix.block_diag(s, block, Matrix.identity(s, n - 2))


def _isotropic_vector(space: UnitarySpace, U: Subspace) -> np.ndarray | None:
    for v in U.vectors():
        if space.norm(v) == 0:
            return v
    return None


def unitary_transvection(space: UnitarySpace, w: np.ndarray) -> Matrix:
    """``v -> v + c <v, w> w`` for singular ``w`` and ``c + c^q = 0``, ``c != 0``."""
    s, q = space.spec, space.q
    c = next(c for c in range(1, s.q) if s.add(c, s.pow(c, q)) == 0)
    wq = space.sigma(w)
    # row action: v M = v + c (v . w^sigma) w  =>  M = I + c (w^sigma)^T w
    outer = s.vmul(wq[:, None], w[None, :])
    return Matrix(s, s.vadd(np.eye(space.n, dtype=np.int64), s.vmul(outer, c)))


def _unitary_reflection_like(space: UnitarySpace, w: np.ndarray) -> Matrix | None:
    """Acts as ``lam`` on ``w^perp`` and ``lam^-(n-1)`` on ``<w>`` for non-singular ``w``."""
    s, n = space.spec, space.n
    if n % (space.q + 1) == 0:
        return None
    lam = _unit_root(space)
    mu = s.pow(lam, -(n - 1))
    nw = space.norm(w)
    wq = space.sigma(w)
    coef = s.div(s.sub(mu, lam), nw)
    outer = s.vmul(wq[:, None], w[None, :])
    return Matrix(s, s.vadd(np.eye(n, dtype=np.int64) * lam, s.vmul(outer, coef)))


def pointwise_stabilizer_nontrivial(
    space: UnitarySpace, delta: Sequence[Subspace], cap: int = MAX_ENUM
) -> Matrix | None:
    """A non-scalar element of SU(n, q) stabilising every subspace in ``delta``.

    Uses an explicit element acting as a scalar on a hyperplane (or a space of
    codimension two) containing all of ``delta`` when one exists; otherwise
    searches SU(n, q) exhaustively.
    """
    n = space.n
    total = Subspace(space.spec, np.zeros((0, n), dtype=np.int64), space)
    for d in delta:
        total = total + d
    perp = total.perp(space)
    candidate: Matrix | None = None
    if perp.dim >= 2:
        w = _isotropic_vector(space, perp)
        if w is not None:
            candidate = unitary_transvection(space, w)
    elif perp.dim == 1:
        w = perp.basis[0]
        if space.norm(w) == 0:
            candidate = unitary_transvection(space, w)
        else:
            candidate = _unitary_reflection_like(space, w)
    if candidate is not None:
        if not (in_special_unitary(candidate, space) and not candidate.is_scalar()
                and acts_as_scalar(candidate, total) is not None):
            raise AssertionError("constructed witness failed verification")
        return candidate
    for A in iter_matrices(space.spec, enumerate_su(n, space.q, cap=cap)):
        if not A.is_scalar() and all(stabilizes(A, d) for d in delta):
            return A
    return None


# -- explicit constructions in SU(3, q) and companion matrices ---------------

def diagonal_triple(q: int) -> tuple[Matrix, Matrix, Matrix]:
    """``diag(l^-2, l, l)`` and its two coordinate rearrangements, ``l = omega^(q-1)``."""
    space = UnitarySpace(3, q)
    s = space.spec
    lam = _unit_root(space)
    lo = s.pow(lam, -2)
    return (Matrix.diag(s, [lo, lam, lam]), Matrix.diag(s, [lam, lo, lam]), Matrix.diag(s, [lam, lam, lo]))


def diagonal_triple_conjugators(q: int) -> tuple[Matrix, Matrix]:
    """Monomial elements of SU(3, q) swapping the distinguished diagonal entry."""
    s = UnitarySpace(3, q).spec
    m1 = s.neg(1)
    return (Matrix(s, [[0, 1, 0], [1, 0, 0], [0, 0, m1]]), Matrix(s, [[0, 0, 1], [0, m1, 0], [1, 0, 0]]))


def cycle_companion(spec: FieldSpec, n: int) -> Matrix:
    """``C(x^n - 1)``: the cyclic permutation matrix."""
    return companion_matrix(Poly.monomial(spec, n) - Poly.constant(spec, 1))


def cycle_companion_partner(space: UnitarySpace) -> Matrix:
    """Monomial involution of SU(n, q) not commuting with ``C(x^n - 1)`` modulo scalars.

    ``I_{n-2} + (-I_2)`` for odd q, ``I_{n-2} + swap`` for even q.
    """
    s, n = space.spec, space.n
    if space.q % 2:
        tail = Matrix.scalar(s, 2, s.neg(1))
    else:
        tail = Matrix(s, [[0, 1], [1, 0]])
    return Matrix.block_diag(s, Matrix.identity(s, n - 2), tail)


# -- Singer cycles ----------------------------------------------------------------

def _has_order(A: Matrix, order: int) -> bool:
    if not (A ** order).is_identity():
        return False
    return all(not (A ** (order // r)).is_identity() for r in prime_factors(order))


def primitive_polynomial(spec: FieldSpec, n: int) -> Poly:
    """Least monic irreducible of degree n whose companion matrix has order q^n - 1."""
    order = spec.q**n - 1
    for f in monic_polys(spec, n):
        if f[0] == 0 or not poly_is_irreducible(f):
            continue
        if _has_order(companion_matrix(f), order):
            return f
    raise AssertionError("no primitive polynomial found")


def _frobenius_normalizers(S: Matrix, e: int) -> list[Matrix]:
    """All invertible ``B`` with ``S B = B S^e`` (equivalently ``B^-1 S B = S^e``)."""
    spec, n = S.spec, S.n
    Se = S ** e
    # S B - B Se = 0 as a linear system in the n^2 entries of B (row-major)
    rows = []
    for i in range(n):
        for j in range(n):
            coeff = np.zeros((n, n), dtype=np.int64)
            for k in range(n):
                coeff[k, j] = spec.add(int(coeff[k, j]), int(S.a[i, k]))
                coeff[i, k] = spec.sub(int(coeff[i, k]), int(Se.a[k, j]))
            rows.append(coeff.reshape(-1))
    basis = nullspace(spec, np.array(rows, dtype=np.int64))
    out = []
    for coeffs in itertools.product(range(spec.q), repeat=basis.shape[0]):
        if not any(coeffs):
            continue
        B = Matrix(spec, matmul(spec, np.array(coeffs)[None, :], basis)[0].reshape(n, n))
        if B.det():
            out.append(B)
    return out


@dataclass
class SingerData:
    """A cyclic irreducible subgroup and a normalising element of it."""

    generator: Matrix
    order: int
    normalizer: Matrix
    exponent: int
    fixed_line: Subspace | None


def singer_normalizer_generators(n: int, q: int, unitary: bool = False, seed: int = 0) -> SingerData:
    """Generator ``S`` of a Singer-type cyclic subgroup and ``B`` with ``S^B = S^Q``.

    Linear case: ``S`` is the companion matrix of a primitive polynomial of
    degree ``n`` over GF(q) and ``Q = q``.  Unitary case (``n`` odd): ``S``
    generates the intersection with SU(n, q) of a cyclic subgroup of
    GU(n, q) of order ``q^n + 1``, and ``Q = q^2``.  Among the valid ``B`` one
    of order ``n`` with characteristic polynomial ``x^n - 1`` is preferred.
    """
    if not is_prime(n):
        raise PreconditionError("n must be prime")
    if not unitary:
        spec = gf(q)
        S = companion_matrix(primitive_polynomial(spec, n))
        order = q**n - 1
        e = q
        accept = lambda B: True  # noqa: E731
    else:
        if n == 2:
            raise PreconditionError("unitary case needs an odd prime n")
        space = UnitarySpace(n, q)
        spec = space.spec
        order = (q**n + 1) // (q + 1)
        S = _find_unitary_singer(space, order, seed)
        e = q * q
        accept = lambda B: in_special_unitary(B, space)  # noqa: E731
    target = Poly.monomial(spec, n) - Poly.constant(spec, 1)
    candidates = [B for B in _frobenius_normalizers(S, e) if accept(B)]
    if not candidates:
        raise AssertionError("no normalising element found")
    preferred = [B for B in candidates if char_poly(B) == target and is_cyclic_matrix(B)]
    B = (preferred or candidates)[0]
    fixed = _fixed_line(B)
    return SingerData(S, order, B, e, fixed)


def _fixed_line(B: Matrix) -> Subspace | None:
    spec, n = B.spec, B.n
    diff = (B - Matrix.identity(spec, n)).a
    # v B = v  <=>  (B - I)^T v^T = 0
    ker = nullspace(spec, diff.T)
    if ker.shape[0] == 0:
        return None
    return Subspace(spec, ker[:1])


def _find_unitary_singer(space: UnitarySpace, order: int, seed: int) -> Matrix:
    rng = random.Random(seed)
    gens = su_generators(space.n, space.q, seed=seed)
    cur = Matrix.identity(space.spec, space.n)
    for _ in range(20000):
        cur = cur * gens[rng.randrange(len(gens))]
        if not _has_order(cur, order):
            continue
        f = char_poly(cur)
        if poly_is_irreducible(f):
            return cur
    raise AssertionError("no irreducible element of the requested order found")


# -- generators of classical groups ------------------------------------------

def sl_generators(n: int, q: int) -> list[Matrix]:
    """Root elements ``I + c E_{i,i+1}`` and ``I + c E_{i+1,i}`` for a field basis of c."""
    spec = gf(q)
    basis = [spec.pow(spec.generator, k) for k in range(spec.k)] if q > 2 else [1]
    gens = []
    for i in range(n - 1):
        for c in basis:
            for a, b in ((i, i + 1), (i + 1, i)):
                m = np.eye(n, dtype=np.int64)
                m[a, b] = c
                gens.append(Matrix(spec, m))
    return gens


def gl_extra_generator(n: int, q: int) -> Matrix:
    spec = gf(q)
    return Matrix.diag(spec, [spec.generator] + [1] * (n - 1))


def _su2_blocks(space: UnitarySpace) -> list[tuple[int, int]]:
    """All ``(a, b)`` with ``a^(q+1) + b^(q+1) = 1``."""
    s, q = space.spec, space.q
    norms = s.vpow(np.arange(s.q), q + 1)
    out = []
    for a in range(s.q):
        for b in range(s.q):
            if s.add(int(norms[a]), int(norms[b])) == 1:
                out.append((a, b))
    return out


def su_generators(n: int, q: int, seed: int = 0, count: int | None = None) -> list[Matrix]:
    """Elements ``[[a, b], [-b^q, a^q]]`` of SU(2, q) embedded on adjacent coordinates.

    Pairs ``(a, b)`` are drawn with a seeded RNG; callers add generators until
    the generated group has the expected order.
    """
    space = UnitarySpace(n, q)
    s = space.spec
    pairs = _su2_blocks(space)
    rng = random.Random(seed)
    count = count or 2
    gens = []
    for i in range(n - 1):
        for _ in range(count):
            a, b = pairs[rng.randrange(len(pairs))]
            m = np.eye(n, dtype=np.int64)
            m[i, i], m[i, i + 1] = a, b
            m[i + 1, i], m[i + 1, i + 1] = s.neg(s.pow(b, q)), s.pow(a, q)
            gens.append(Matrix(s, m))
    return gens


def sl_order(n: int, q: int) -> int:
    return q ** (n * (n - 1) // 2) * math.prod(q**i - 1 for i in range(2, n + 1))


def su_order(n: int, q: int) -> int:
    return q ** (n * (n - 1) // 2) * math.prod(q**i - (-1) ** i for i in range(2, n + 1))


# -- exhaustive enumeration ------------------------------------------------------

def _all_vectors(spec: FieldSpec, n: int) -> np.ndarray:
    grid = np.indices((spec.q,) * n).reshape(n, -1).T
    return np.ascontiguousarray(grid, dtype=np.int64)


def _codes(spec: FieldSpec, vecs: np.ndarray) -> np.ndarray:
    weights = spec.q ** np.arange(vecs.shape[-1] - 1, -1, -1, dtype=np.int64)
    return vecs @ weights


def _span_codes(spec: FieldSpec, rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] == 0:
        return np.zeros(1, dtype=np.int64)
    coeffs = _all_vectors(spec, rows.shape[0])
    return _codes(spec, matmul(spec, coeffs, rows))


def gl_order(n: int, q: int) -> int:
    return sl_order(n, q) * (q - 1)


def enumerate_sl(n: int, q: int, cap: int = MAX_ENUM, special: bool = True) -> tuple[FieldSpec, np.ndarray]:
    """All of SL(n, q) (or GL(n, q)) as an ``(N, n, n)`` code array."""
    total = sl_order(n, q) if special else gl_order(n, q)
    if total > cap:
        raise CapExceeded(f"group of order {total} exceeds {cap}")
    spec = gf(q)
    vecs = _all_vectors(spec, n)
    partial = [np.zeros((0, n), dtype=np.int64)]
    for _ in range(n - 1):
        nxt = []
        for rows in partial:
            mask = np.ones(len(vecs), dtype=bool)
            mask[_span_codes(spec, rows)] = False
            for v in vecs[mask]:
                nxt.append(np.vstack([rows, v[None, :]]))
        partial = nxt
    out = []
    for rows in partial:
        # det is linear in the last row
        dets = np.array([_det_codes(spec, np.vstack([rows, np.eye(n, dtype=np.int64)[j][None, :]]))
                         for j in range(n)], dtype=np.int64)
        vals = spec.vsum(spec.vmul(vecs, dets[None, :]), axis=-1)
        keep = vals == 1 if special else vals != 0
        for v in vecs[keep]:
            out.append(np.vstack([rows, v[None, :]]))
    arr = np.array(out, dtype=np.int64).reshape(-1, n, n)
    assert arr.shape[0] == total
    return spec, arr


def enumerate_gl(n: int, q: int, cap: int = MAX_ENUM) -> tuple[FieldSpec, np.ndarray]:
    return enumerate_sl(n, q, cap=cap, special=False)


def enumerate_su(n: int, q: int, cap: int = MAX_ENUM) -> tuple[FieldSpec, np.ndarray]:
    """All of SU(n, q) (Gram matrix ``I_n``) as an ``(N, n, n)`` code array."""
    if su_order(n, q) > cap:
        raise CapExceeded(f"|SU({n},{q})| exceeds {cap}")
    space = UnitarySpace(n, q)
    s = space.spec
    vecs = _all_vectors(s, n)
    vsig = space.sigma(vecs)
    norms = s.vsum(s.vmul(vecs, vsig), axis=-1)
    units = vecs[norms == 1]
    partial = [np.zeros((0, n), dtype=np.int64)]
    for _ in range(n - 1):
        nxt = []
        for rows in partial:
            mask = np.ones(len(units), dtype=bool)
            for r in rows:
                ip = s.vsum(s.vmul(units, space.sigma(r)[None, :]), axis=-1)
                mask &= ip == 0
            for v in units[mask]:
                nxt.append(np.vstack([rows, v[None, :]]))
        partial = nxt
    out = []
    for rows in partial:
        mask = np.ones(len(units), dtype=bool)
        for r in rows:
            mask &= s.vsum(s.vmul(units, space.sigma(r)[None, :]), axis=-1) == 0
        dets = np.array([_det_codes(s, np.vstack([rows, np.eye(n, dtype=np.int64)[j][None, :]]))
                         for j in range(n)], dtype=np.int64)
        cand = units[mask]
        vals = s.vsum(s.vmul(cand, dets[None, :]), axis=-1)
        for v in cand[vals == 1]:
            out.append(np.vstack([rows, v[None, :]]))
    arr = np.array(out, dtype=np.int64).reshape(-1, n, n)
    assert arr.shape[0] == su_order(n, q)
    return s, arr


def iter_matrices(spec: FieldSpec, stack) -> Iterator[Matrix]:
    if isinstance(stack, tuple):
        spec, stack = stack
    for m in stack:
        yield Matrix(spec, m)


def _batched_power(spec: FieldSpec, mats: np.ndarray, e: int) -> np.ndarray:
    n = mats.shape[-1]
    result = np.broadcast_to(np.eye(n, dtype=np.int64), mats.shape).copy()
    base = mats
    while e:
        if e & 1:
            result = matmul(spec, result, base)
        base = matmul(spec, base, base)
        e >>= 1
    return result


def _scalar_mask(mats: np.ndarray) -> np.ndarray:
    n = mats.shape[-1]
    d = mats[:, 0, 0]
    return (mats == d[:, None, None] * np.eye(n, dtype=np.int64)).all(axis=(1, 2))


# -- exhaustive verifications ------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    params: dict
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        p = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}({p})"


def verify_irreducible_central_power(q: int) -> CheckReport:
    """Over SL(2, q): elements with irreducible characteristic polynomial and
    ``A^(q-1)`` central exist iff ``q = 3 mod 4``, and then have ``chi = x^2 + 1``.
    Also checks that every irreducible element has ``A^(q^2-1)`` central.
    """
    if q > 13:
        raise CapExceeded("brute-force range is q <= 13")
    spec, mats = enumerate_sl(2, q)
    tr = spec.vadd(mats[:, 0, 0], mats[:, 1, 1])
    # chi = x^2 - tr x + 1 is irreducible iff it has no root
    xs = np.arange(q)
    vals = spec.vadd(spec.vadd(spec.vmul(xs, xs)[None, :], spec.vneg(spec.vmul(tr[:, None], xs[None, :]))), 1)
    irreducible = (vals != 0).all(axis=1)
    p1 = _scalar_mask(_batched_power(spec, mats, q - 1))
    p2 = _scalar_mask(_batched_power(spec, mats, q * q - 1))
    witnesses = irreducible & p1
    chis = {int(t) for t in tr[witnesses]}
    expect = q % 4 == 3
    ok_equiv = bool(witnesses.any()) == expect
    ok_form = chis <= {0}
    ok_big = bool(p2[irreducible].all())
    return CheckReport(
        "irreducible-central-power",
        {"q": q},
        ok_equiv and ok_form and ok_big,
        {"order": int(mats.shape[0]), "irreducible": int(irreducible.sum()),
         "witnesses": int(witnesses.sum()), "q_mod_4": q % 4, "traces": sorted(chis)},
    )


def verify_no_irreducible_central_power(n: int, q: int) -> CheckReport:
    """No element of SL(n, q), n >= 3, acts irreducibly with ``A^(q^2-1)`` central."""
    spec, mats = enumerate_sl(n, q)
    central = _scalar_mask(_batched_power(spec, mats, q * q - 1))
    bad = 0
    for m in mats[central]:
        if poly_is_irreducible(char_poly(Matrix(spec, m))):
            bad += 1
    return CheckReport("irreducible-central-power-dim", {"n": n, "q": q}, bad == 0,
                       {"central_power": int(central.sum()), "irreducible": bad})


def _commute_mask(spec: FieldSpec, cand: np.ndarray, h: np.ndarray) -> np.ndarray:
    return (matmul(spec, cand, h[None]) == matmul(spec, h[None], cand)).all(axis=(1, 2))


def _centralizer_mask(spec: FieldSpec, mats: np.ndarray, subset: np.ndarray) -> np.ndarray:
    mask = np.ones(mats.shape[0], dtype=bool)
    for h in subset:
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            break
        mask[idx] = _commute_mask(spec, mats[idx], h)
    return mask


def verify_line_stabilizers(n: int, q: int) -> CheckReport:
    """Brute-force facts about the stabilisers ``H_X``, ``H_Y`` of ``<e_1>``, ``<e_2>`` in SL(n, q).

    (i) no commutator in ``H_X`` is a non-identity scalar; (ii) ``C_H(H_X) = Z(H)``;
    (iii) ``C_H(H_X & H_Y)`` is ``H_X & H_Y`` when n = 2 or (n, q) = (3, 2), else ``Z(H)``.
    """
    spec, mats = enumerate_sl(n, q)
    hx = (mats[:, 0, 1:] == 0).all(axis=1)
    row2 = np.delete(mats[:, 1, :], 1, axis=1)
    hy = (row2 == 0).all(axis=1)
    hxy = hx & hy
    centre = _scalar_mask(mats)
    HX = mats[hx]
    # (i): [a, b] = c I  <=>  a b = c (b a)
    bad_comm = 0
    for a in HX:
        ab = matmul(spec, a[None], HX)
        ba = matmul(spec, HX, a[None])
        # (ba)[0,0] is the product of the two nonzero (1,1) entries
        c = spec.vmul(ab[:, 0, 0], spec.inv_table[ba[:, 0, 0]])
        scaled = spec.vmul(ba, c[:, None, None])
        is_scalar_comm = (scaled == ab).all(axis=(1, 2)) & (c != 1)
        bad_comm += int(is_scalar_comm.sum())
    part1 = bad_comm == 0
    cx = _centralizer_mask(spec, mats, HX)
    part2 = bool(np.array_equal(cx, centre))
    cxy = _centralizer_mask(spec, mats, mats[hxy])
    exceptional = n == 2 or (n, q) == (3, 2)
    expected = hxy if exceptional else centre
    part3 = bool(np.array_equal(cxy, expected))
    return CheckReport(
        "line-stabilizers",
        {"n": n, "q": q},
        part1 and part2 and part3,
        {"order": int(mats.shape[0]), "H_X": int(hx.sum()), "H_XY": int(hxy.sum()),
         "scalar_commutators": bad_comm, "C(H_X)": int(cx.sum()), "C(H_XY)": int(cxy.sum()),
         "centre": int(centre.sum()), "branch": "H_X&H_Y" if exceptional else "Z(H)",
         "part_i": part1, "part_ii": part2, "part_iii": part3},
    )


def verify_unitary_witnesses(n: int, q: int) -> CheckReport:
    """Witnesses acting as scalars on hyperplanes and codimension-two spaces of SU(n, q)."""
    space = UnitarySpace(n, q)
    s = space.spec
    details: dict = {}
    ok = True
    W = nondegenerate_hyperplane(space)
    A = unitary_scalar_witness_nondegenerate(space)
    if n % (q + 1) == 0:
        ok &= A is None
        details["nondegenerate"] = "none (q+1 | n)"
    else:
        good = (A is not None and in_special_unitary(A, space) and not A.is_scalar()
                and acts_as_scalar(A, W) == _unit_root(space))
        ok &= bool(good)
        details["nondegenerate"] = bool(good)
    _, delta = singular_witness_parameters(space)
    Ws = singular_hyperplane(space)
    Bm = unitary_scalar_witness_singular(space)
    good = (s.pow(delta, q + 1) == s.neg(1) and Ws.perp(space).is_totally_singular(space)
            and in_special_unitary(Bm, space) and not Bm.is_scalar() and acts_as_scalar(Bm, Ws) == 1)
    ok &= bool(good)
    details["singular"] = bool(good)
    # codimension two: <e_3, ..., e_n> and a generic (n-2)-space
    U1 = Subspace(s, np.eye(n, dtype=np.int64)[2:], space)
    rng = random.Random(n * 1000 + q)
    rows = np.array([[rng.randrange(s.q) for _ in range(n)] for _ in range(n - 2)], dtype=np.int64)
    U2 = Subspace(s, rows, space)
    for label, U in (("codim2_coordinate", U1), ("codim2_random", U2)):
        if n < 3:
            continue
        M = pointwise_stabilizer_nontrivial(space, [U])
        good = M is not None and in_special_unitary(M, space) and not M.is_scalar() and acts_as_scalar(M, U) is not None
        ok &= bool(good)
        details[label] = bool(good)
    return CheckReport("unitary-witnesses", {"n": n, "q": q}, ok, details)


def verify_scalar_obstruction_exhaustive(n: int, q: int) -> CheckReport:
    """Exhaustive SU(n, q) search for a non-scalar element acting as a scalar on ``<e_2..e_n>``."""
    space = UnitarySpace(n, q)
    s, mats = enumerate_su(n, q)
    W = nondegenerate_hyperplane(space)
    found = 0
    for A in iter_matrices(s, mats):
        if not A.is_scalar() and acts_as_scalar(A, W) is not None:
            found += 1
    expect_none = n % (q + 1) == 0
    return CheckReport("scalar-obstruction", {"n": n, "q": q}, (found == 0) == expect_none,
                       {"order": int(mats.shape[0]), "witnesses": found})


def verify_diagonal_triple(q: int) -> CheckReport:
    space = UnitarySpace(3, q)
    B = diagonal_triple(q)
    C = diagonal_triple_conjugators(q)
    member = all(in_special_unitary(b, space) for b in B) and all(in_special_unitary(c, space) for c in C)
    noncentral = all(not b.is_scalar() for b in B)
    conj = B[0].conj(C[0]) == B[1] and B[0].conj(C[1]) == B[2]
    lam = _unit_root(space)
    s = space.spec
    cube = s.pow(lam, 3) != 1
    return CheckReport("diagonal-triple", {"q": q}, member and noncentral and conj and cube,
                       {"membership": member, "non_central": noncentral, "conjugate": conj,
                        "lambda_cubed_ne_1": cube})


def verify_cycle_companion(n: int, q: int) -> CheckReport:
    space = UnitarySpace(n, q)
    s = space.spec
    R = cycle_companion(s, n)
    A = cycle_companion_partner(space)
    inv_is_t = R.inverse() == R.T
    member = in_special_unitary(R, space) and in_special_unitary(A, space)
    involution = (A * A).is_identity() and not A.is_identity()
    comm = R.commutator(A)
    noncentral = not comm.is_scalar()
    if q % 2:
        entries = int(comm.a[0, 0]) == s.neg(1) and int(comm.a[n - 1, n - 1]) == 1
    else:
        entries = int(comm.a[0, 0]) == 0
    ok = inv_is_t and member and involution and noncentral and entries
    return CheckReport("cycle-companion", {"n": n, "q": q}, ok,
                       {"inverse_is_transpose": inv_is_t, "membership": member,
                        "involution": involution, "non_scalar_commutator": noncentral,
                        "commutator_entries": entries})


def verify_singer(n: int, q: int, unitary: bool = False, brute_force_cap: int = 20_000) -> CheckReport:
    """Order, irreducibility and normalising relation of the Singer-type pair.

    For small GL(n, q) also counts the normaliser of the cyclic subgroup by
    brute force and compares it with ``n (q^n - 1)``.
    """
    data = singer_normalizer_generators(n, q, unitary=unitary)
    S, B = data.generator, data.normalizer
    spec = S.spec
    order_ok = _has_order(S, data.order)
    irreducible = poly_is_irreducible(char_poly(S))
    relation = S.conj(B) == S ** data.exponent
    target = Poly.monomial(spec, n) - Poly.constant(spec, 1)
    companion = cycle_companion(spec, n)
    det_c = companion.det()
    det_expected = 1 if (spec.p == 2 or n % 2) else spec.neg(1)
    details = {"order": data.order, "order_ok": order_ok, "irreducible": irreducible,
               "relation": relation, "B_char_poly_is_x^n-1": char_poly(B) == target,
               "B_cyclic": is_cyclic_matrix(B), "det_C(x^n-1)": det_c,
               "fixed_line": None if data.fixed_line is None else data.fixed_line.basis.tolist()}
    ok = order_ok and irreducible and relation and det_c == det_expected
    if not unitary and gl_order(n, q) <= brute_force_cap:
        spec_, mats = enumerate_gl(n, q)
        powers = [S ** k for k in range(data.order)]
        group = {p.a.tobytes() for p in powers}
        # g normalises <S> iff g^-1 S g lies in <S>, i.e. S g = g P for some P in <S>
        Sg = matmul(spec, S.a[None], mats)
        count = 0
        for p in powers:
            hit = (Sg == matmul(spec, mats, p.a[None])).all(axis=(1, 2))
            count += int(hit.sum())
        del group
        details["normalizer_order"] = count
        ok = ok and count == n * (q**n - 1)
    return CheckReport("singer", {"n": n, "q": q, "unitary": unitary}, ok, details)


# -- text I/O ---------------------------------------------------------------------

def write_matrix(A: Matrix, unitary_q: int | None = None) -> str:
    """Header ``n q`` (or ``n q q2`` for a matrix over GF(q^2)), then one row per line."""
    spec = A.spec
    if unitary_q is not None:
        header = f"{A.n} {unitary_q} {unitary_q * unitary_q}"
    else:
        header = f"{A.n} {spec.q}"
    lines = [header]
    for row in A.a:
        if spec.k == 1:
            lines.append(" ".join(str(int(v)) for v in row))
        else:
            lines.append(" ".join("(" + ",".join(str(int(d)) for d in spec.digits[int(v)]) + ")" for v in row))
    return "\n".join(lines) + "\n"


def read_matrix(text: str) -> Matrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise PreconditionError("empty matrix text")
    head = lines[0].split()
    if len(head) not in (2, 3):
        raise PreconditionError("header must be 'n q [q2]'")
    n, q = int(head[0]), int(head[1])
    if len(head) == 3:
        if int(head[2]) != q * q:
            raise PreconditionError("third header field must be q^2")
        q = q * q
    spec = gf(q)
    rows = lines[1:]
    if len(rows) != n:
        raise PreconditionError(f"expected {n} rows, found {len(rows)}")
    out = []
    for r in rows:
        if spec.k == 1:
            vals = [int(t) % spec.p for t in r.split()]
        else:
            vals = []
            for tup in re.findall(r"\(([^)]*)\)", r):
                digits = [int(t) for t in tup.split(",")]
                if len(digits) != spec.k or any(not 0 <= d < spec.p for d in digits):
                    raise PreconditionError(f"bad coefficient tuple ({tup})")
                vals.append(sum(d * spec.p**i for i, d in enumerate(digits)))
        if len(vals) != n:
            raise PreconditionError("row length mismatch")
        out.append(vals)
    return Matrix(spec, out)
