"""Reference factorisers used to cross-check :func:`binomial_factors`.

Neither routine knows anything about binomials: one is exhaustive trial
division (only for small search spaces), the other Berlekamp's kernel
method over GF(q).
"""

from __future__ import annotations

import numpy as np

from .errors import CapExceeded, PreconditionError
from .finfield import FieldSpec, Poly, monic_polys, nullspace, poly_gcd


_CHUNK = 1 << 17


def _tables(spec: FieldSpec) -> tuple[np.ndarray, np.ndarray]:
    a = np.arange(spec.q)
    mul = spec.vmul(a[:, None], a[None, :])
    sub = spec.vadd(a[:, None], spec.vneg(a)[None, :])
    return mul, sub


def _monic_block(spec: FieldSpec, d: int, start: int, stop: int) -> np.ndarray:
    """Coefficient rows (constant term first) of the monic degree-d
    polynomials with integer codes ``start..stop-1``, in ``monic_polys`` order."""
    codes = np.arange(start, stop, dtype=np.int64)
    out = np.empty((codes.size, d + 1), dtype=np.int64)
    for i in range(d):
        out[:, i] = (codes // spec.q**i) % spec.q
    out[:, d] = 1
    return out


def _divides(f: Poly, cands: np.ndarray, mul: np.ndarray, sub: np.ndarray) -> np.ndarray:
    """Mask of the monic candidates that divide ``f`` (vectorised long division)."""
    d = cands.shape[1] - 1
    rem = np.tile(np.asarray(f.coeffs, dtype=np.int64), (cands.shape[0], 1))
    for top in range(f.degree, d - 1, -1):
        lead = rem[:, top]
        for i in range(d + 1):
            col = top - d + i
            rem[:, col] = sub[rem[:, col], mul[lead, cands[:, i]]]
    return ~rem[:, :d].any(axis=1)


def trial_division_factor(f: Poly, budget: int = 2_000_000) -> list[Poly]:
    """Monic irreducible factors (with multiplicity) by exhaustive search.

    Candidates are tried in increasing degree; once all factors of lower
    degree are removed, every candidate of degree d that divides is irreducible.
    """
    if not f.is_monic():
        raise PreconditionError("expected a monic polynomial")
    spec = f.spec
    mul, sub = _tables(spec)
    factors: list[Poly] = []
    d = 1
    tried = 0
    while f.degree >= 2 * d:
        total = spec.q**d
        if tried + total > budget:
            raise CapExceeded("trial division search space too large")
        tried += total
        for start in range(0, total, _CHUNK):
            block = _monic_block(spec, d, start, min(total, start + _CHUNK))
            for row in block[_divides(f, block, mul, sub)]:
                g = Poly(spec, [int(c) for c in row])
                while True:
                    quot, rem = divmod(f, g)
                    if not rem.is_zero():
                        break
                    factors.append(g)
                    f = quot
        d += 1
    if f.degree >= 1:
        factors.append(f)
    return sorted(factors, key=lambda p: (p.degree, p.coeffs))


def _derivative(f: Poly) -> Poly:
    spec = f.spec
    return Poly(spec, [spec.mul(spec.from_int(i), c) for i, c in enumerate(f.coeffs)][1:])


def berlekamp_factor(f: Poly) -> list[Poly]:
    """Monic irreducible factors of a squarefree monic polynomial."""
    if not f.is_monic():
        raise PreconditionError("expected a monic polynomial")
    spec: FieldSpec = f.spec
    n = f.degree
    if n <= 1:
        return [f] if n == 1 else []
    if poly_gcd(f, _derivative(f)).degree > 0:
        raise PreconditionError("berlekamp_factor expects a squarefree polynomial")
    x = Poly.x(spec)
    xq = x.powmod(spec.q, f)
    q_rows = np.zeros((n, n), dtype=np.int64)
    cur = Poly(spec, (1,))
    for i in range(n):
        for j, c in enumerate(cur.coeffs):
            q_rows[i, j] = c
        cur = (cur * xq) % f
    # v Q = v  <=>  (Q - I)^T v^T = 0
    diff = q_rows.copy()
    for i in range(n):
        diff[i, i] = spec.sub(int(diff[i, i]), 1)
    basis = nullspace(spec, diff.T)
    count = basis.shape[0]
    factors = [f]
    for vec in basis:
        g = Poly(spec, [int(c) for c in vec])
        if g.degree < 1:
            continue
        refined: list[Poly] = []
        for h in factors:
            if h.degree == 1:
                refined.append(h)
                continue
            rest = h
            for s in range(spec.q):
                if rest.degree <= 1:
                    break
                shifted = g - Poly(spec, (s,))
                d = poly_gcd(rest, shifted)
                if 0 < d.degree < rest.degree:
                    refined.append(d)
                    rest = rest // d
            refined.append(rest.monic())
        factors = refined
        if len(factors) == count:
            break
    if len(factors) != count:
        raise AssertionError("Berlekamp splitting did not reach the kernel dimension")
    return sorted(factors, key=lambda p: (p.degree, p.coeffs))
