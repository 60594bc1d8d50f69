"""Named permutation groups: alternating, symmetric, projective linear and
unitary groups acting on points, Mathieu groups, and generator files."""

from __future__ import annotations

import math
import random
from pathlib import Path

import numpy as np

from .errors import CapExceeded, DescriptorError, PreconditionError, UnsupportedFamily
from .finfield import gf, prime_power
from .matgrp import (
    Matrix,
    UnitarySpace,
    gl_extra_generator,
    gl_order,
    matmul,
    sl_generators,
    sl_order,
    su_generators,
    su_order,
    unitary_transvection,
)
from .permgrp import Permutation, PermGroup, schreier_sims

MAX_DEGREE = 10**4
MAX_ORDER = 10**8

# Standard generators (1-based), checked against the group orders below.
_M11 = ["(1,2,3,4,5,6,7,8,9,10,11)", "(3,7,11,8)(4,10,5,6)"]
_M12_EXTRA = "(1,12)(2,11)(3,6)(4,8)(5,9)(7,10)"
_M23 = [
    "(1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21,22,23)",
    "(3,17,10,7,9)(4,13,14,19,5)(8,18,11,12,23)(15,20,22,21,16)",
]
MATHIEU_ORDERS = {11: 7920, 12: 95040, 22: 443520, 23: 10200960}


def _one_based(text: str, degree: int) -> Permutation:
    body = text.replace(",", " ")
    cycles = []
    for chunk in body.strip("()").split(")("):
        cycles.append([int(t) - 1 for t in chunk.split()])
    return Permutation.from_cycles(cycles, degree)


def _check_caps(degree: int, order: int) -> None:
    if degree > MAX_DEGREE:
        raise CapExceeded(f"degree {degree} exceeds {MAX_DEGREE}")
    if order > MAX_ORDER:
        raise CapExceeded(f"order {order} exceeds {MAX_ORDER}")


def alternating(n: int) -> PermGroup:
    if n < 3:
        raise UnsupportedFamily("alternating(n) needs n >= 3")
    order = math.factorial(n) // 2
    _check_caps(n, order)
    three = Permutation.from_cycles([(0, 1, 2)], n)
    if n == 3:
        gens = [three]
    elif n % 2:
        gens = [three, Permutation.from_cycles([tuple(range(n))], n)]
    else:
        gens = [three, Permutation.from_cycles([tuple(range(1, n))], n)]
    return PermGroup(gens, n, order=order, name=f"A{n}")


def symmetric(n: int) -> PermGroup:
    if n < 2:
        raise UnsupportedFamily("symmetric(n) needs n >= 2")
    order = math.factorial(n)
    _check_caps(n, order)
    gens = [Permutation.from_cycles([(0, 1)], n)]
    if n > 2:
        gens.append(Permutation.from_cycles([tuple(range(n))], n))
    return PermGroup(gens, n, order=order, name=f"S{n}")


# -- projective actions ------------------------------------------------------

class ProjectivePoints:
    """Lines of ``GF(Q)^n`` (optionally only the isotropic ones), each
    represented by the vector whose first nonzero entry is 1."""

    def __init__(self, spec, n: int, vectors: np.ndarray):
        self.spec = spec
        self.n = n
        self.vectors = vectors
        weights = spec.q ** np.arange(n - 1, -1, -1, dtype=np.int64)
        self._weights = weights
        self._lookup = {int(c): i for i, c in enumerate(vectors @ weights)}

    @classmethod
    def all_lines(cls, spec, n: int, isotropic_q: int | None = None) -> "ProjectivePoints":
        rows = []
        for lead in range(n):
            rest = n - lead - 1
            tail = np.indices((spec.q,) * rest).reshape(rest, -1).T if rest else np.zeros((1, 0), dtype=np.int64)
            block = np.zeros((tail.shape[0], n), dtype=np.int64)
            block[:, lead] = 1
            block[:, lead + 1:] = tail
            rows.append(block)
        vecs = np.vstack(rows)
        if isotropic_q is not None:
            norms = spec.vsum(spec.vpow(vecs, isotropic_q + 1), axis=-1)
            vecs = vecs[norms == 0]
        return cls(spec, n, np.ascontiguousarray(vecs))

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def normalize(self, vecs: np.ndarray) -> np.ndarray:
        lead_idx = (vecs != 0).argmax(axis=1)
        lead = vecs[np.arange(len(vecs)), lead_idx]
        inv = self.spec.inv_table[lead]
        return self.spec.vmul(vecs, inv[:, None])

    def permutation(self, A: Matrix) -> Permutation:
        images = self.normalize(matmul(self.spec, self.vectors, A.a))
        codes = images @ self._weights
        try:
            return Permutation(self._lookup[int(c)] for c in codes)
        except KeyError as exc:
            raise PreconditionError("matrix does not preserve the point set") from exc


def psl(n: int, q: int) -> PermGroup:
    prime_power(q)
    if n < 2:
        raise UnsupportedFamily("psl needs n >= 2")
    order = sl_order(n, q) // math.gcd(n, q - 1)
    pts = ProjectivePoints.all_lines(gf(q), n)
    _check_caps(len(pts), order)
    gens = [pts.permutation(A) for A in sl_generators(n, q)]
    return PermGroup(_dedupe(gens), len(pts), order=order, name=f"PSL({n},{q})")


def pgl(n: int, q: int) -> PermGroup:
    prime_power(q)
    if n < 2:
        raise UnsupportedFamily("pgl needs n >= 2")
    order = gl_order(n, q) // (q - 1)
    pts = ProjectivePoints.all_lines(gf(q), n)
    _check_caps(len(pts), order)
    gens = [pts.permutation(A) for A in sl_generators(n, q) + [gl_extra_generator(n, q)]]
    return PermGroup(_dedupe(gens), len(pts), order=order, name=f"PGL({n},{q})")


def psu(n: int, q: int, max_rounds: int = 64) -> PermGroup:
    """PSU(n, q) on the isotropic points of ``GF(q^2)^n`` (Gram matrix ``I_n``).

    Generators are embedded SU(2, q) blocks and unitary transvections through
    isotropic points, drawn with a seeded RNG; more are added until the
    permutation group reaches ``|SU(n,q)| / gcd(n, q+1)``.
    """
    prime_power(q)
    if n < 3:
        raise UnsupportedFamily("psu needs n >= 3")
    order = su_order(n, q) // math.gcd(n, q + 1)
    space = UnitarySpace(n, q)
    pts = ProjectivePoints.all_lines(space.spec, n, isotropic_q=q)
    _check_caps(len(pts), order)
    gens: list[Permutation] = []
    rng = random.Random(0)
    for seed in range(max_rounds):
        mats = su_generators(n, q, seed=seed)
        mats.append(unitary_transvection(space, pts.vectors[rng.randrange(len(pts))]))
        gens = _dedupe(gens + [pts.permutation(A) for A in mats])
        if schreier_sims(gens, len(pts), target_order=order).order() == order:
            return PermGroup(gens, len(pts), order=order, name=f"PSU({n},{q})")
    raise AssertionError(f"PSU({n},{q}) generators did not reach the expected order")


def _dedupe(gens: list[Permutation]) -> list[Permutation]:
    out: list[Permutation] = []
    seen = set()
    for g in gens:
        if not g.is_identity() and g not in seen:
            seen.add(g)
            out.append(g)
    return out


# -- Mathieu groups -----------------------------------------------------------

def mathieu(n: int) -> PermGroup:
    if n == 11:
        gens = [_one_based(t, 11) for t in _M11]
    elif n == 12:
        gens = [_one_based(t, 12) for t in _M11 + [_M12_EXTRA]]
    elif n == 23:
        gens = [_one_based(t, 23) for t in _M23]
    elif n == 22:
        m23 = mathieu(23)
        # stabiliser of the last point, via a chain with that point first in the base
        chain = schreier_sims(m23.generators, 23, base=[22], target_order=MATHIEU_ORDERS[23])
        stab = chain.sgens[1] if len(chain.sgens) > 1 else []
        gens = [Permutation(g[:22]) for g in stab]
        return PermGroup(_dedupe(gens), 22, order=MATHIEU_ORDERS[22], name="M22")
    else:
        raise UnsupportedFamily(f"unsupported Mathieu group M{n}")
    return PermGroup(gens, n, order=MATHIEU_ORDERS[n], name=f"M{n}")


# -- generator files ------------------------------------------------------------

def from_file(path: str | Path) -> PermGroup:
    """Header ``degree k``, then one 0-based cycle-notation permutation per line; ``#`` comments."""
    path = Path(path)
    return parse_generator_text(path.read_text(), name=path.stem)


def parse_generator_text(text: str, name: str | None = None) -> PermGroup:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise DescriptorError("empty generator file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "degree" or not head[1].isdigit():
        raise DescriptorError("first line must be 'degree k'")
    degree = int(head[1])
    if degree > MAX_DEGREE:
        raise CapExceeded(f"degree {degree} exceeds {MAX_DEGREE}")
    try:
        gens = [Permutation.parse(line, degree) for line in lines[1:]]
    except ValueError as exc:
        raise DescriptorError(str(exc)) from exc
    if not gens:
        raise DescriptorError("no generators given")
    G = PermGroup(gens, degree, name=name)
    if G.order() > MAX_ORDER:
        raise CapExceeded(f"order {G.order()} exceeds {MAX_ORDER}")
    return G


# -- descriptors -----------------------------------------------------------------

_ALIASES = {
    "alt": "alternating", "alternating": "alternating", "a": "alternating",
    "sym": "symmetric", "symmetric": "symmetric", "s": "symmetric",
    "psl": "psl", "l": "psl", "pgl": "pgl", "psu": "psu", "u": "psu",
    "mathieu": "mathieu", "m": "mathieu", "file": "file",
}


def make_group(family: str, *params) -> PermGroup:
    fam = _ALIASES.get(family.lower())
    if fam is None:
        raise UnsupportedFamily(f"unsupported family {family!r}")
    if fam == "file":
        if len(params) != 1:
            raise DescriptorError("file family takes one path")
        return from_file(params[0])
    try:
        ints = [int(p) for p in params]
    except ValueError as exc:
        raise DescriptorError(f"non-integer parameters {params!r}") from exc
    expected = {"alternating": 1, "symmetric": 1, "mathieu": 1, "psl": 2, "pgl": 2, "psu": 2}[fam]
    if len(ints) != expected:
        raise DescriptorError(f"{fam} takes {expected} integer parameter(s)")
    build = {"alternating": alternating, "symmetric": symmetric, "mathieu": mathieu,
             "psl": psl, "pgl": pgl, "psu": psu}[fam]
    try:
        return build(*ints)
    except UnsupportedFamily:
        raise
    except PreconditionError as exc:
        raise UnsupportedFamily(str(exc)) from exc


def parse_descriptor(text: str) -> tuple[str, tuple]:
    """``alt:5``, ``psl:2:11``, ``mathieu:12``, ``file:path`` -> (family, params)."""
    fam, _, rest = text.partition(":")
    if not fam or not rest:
        raise DescriptorError(f"cannot parse group descriptor {text!r}")
    fam_key = _ALIASES.get(fam.lower())
    if fam_key is None:
        raise UnsupportedFamily(f"unsupported family {fam!r}")
    if fam_key == "file":
        return fam_key, (rest,)
    return fam_key, tuple(rest.split(":"))


def group_from_descriptor(text: str) -> PermGroup:
    fam, params = parse_descriptor(text)
    G = make_group(fam, *params)
    if G.name is None or fam == "file":
        G.name = text
    return G
