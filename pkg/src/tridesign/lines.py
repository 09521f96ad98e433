"""Lines (2-dimensional GF(2)-subspaces), triangles, spreads and
extension-field planes.

A 2-dimensional subspace {0, x, y, x^y} is stored as the sorted triple
of its nonzero vectors (a projective line).  A triangle is three lines
pairwise meeting in one nonzero vector with trivial triple
intersection; equivalently the lines <a,b>, <b,c>, <c,a> spanned by
three independent vectors, which is how we store it: the sorted corner
triple (a, b, c).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .gf2n import FieldCtx, build_field, embed_subfield


@dataclass(frozen=True)
class Line:
    """Canonical projective line: sorted triple with x ^ y ^ z = 0."""

    pts: tuple[int, int, int]

    @property
    def x(self) -> int:
        return self.pts[0]

    @property
    def y(self) -> int:
        return self.pts[1]

    @property
    def z(self) -> int:
        return self.pts[2]

    def __contains__(self, v: int) -> bool:
        return v in self.pts

    def key(self, n: int) -> int:
        return (self.pts[0] << n) | self.pts[1]


def canonical_line(x: int, y: int) -> Line:
    """The line through x and y in canonical (sorted) form."""
    if x == 0 or y == 0 or x == y:
        raise ValueError(f"degenerate line: generators {x}, {y}")
    z = x ^ y
    a, b, c = sorted((x, y, z))
    return Line((a, b, c))


def line_count(n: int) -> int:
    N = (1 << n) - 1
    return N * (N - 1) // 6


def enumerate_lines(n: int) -> Iterator[Line]:
    """All canonical lines of GF(2)^n, ascending by (x, y)."""
    top = 1 << n
    for x in range(1, top):
        for y in range(x + 1, top):
            if x ^ y > y:
                yield Line((x, y, x ^ y))


def enumerate_line_keys_np(n: int) -> np.ndarray:
    """Sorted int64 array of all canonical line keys ((x << n) | y)."""
    top = 1 << n
    keys = []
    for x in range(1, top):
        y = np.arange(x + 1, top, dtype=np.int64)
        y = y[(x ^ y) > y]
        if y.size:
            keys.append((x << n) | y)
    if not keys:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(keys)


@dataclass(frozen=True)
class TriangleV:
    """A triangle at the vector level, canonically the sorted corner triple."""

    gens: tuple[int, int, int]

    @staticmethod
    def from_gens(a: int, b: int, c: int) -> "TriangleV":
        if a == 0 or b == 0 or c == 0 or len({a, b, c}) != 3 or a ^ b ^ c == 0:
            raise ValueError(f"generators ({a}, {b}, {c}) are not independent")
        x, y, z = sorted((a, b, c))
        return TriangleV((x, y, z))

    @property
    def corners(self) -> tuple[int, int, int]:
        return self.gens

    @property
    def noncorners(self) -> tuple[int, int, int]:
        a, b, c = self.gens
        return (a ^ b, b ^ c, c ^ a)

    @property
    def lines(self) -> tuple[Line, Line, Line]:
        a, b, c = self.gens
        return (canonical_line(a, b), canonical_line(b, c), canonical_line(c, a))


def is_triangle(l1: Line, l2: Line, l3: Line) -> bool:
    """True iff the three lines form a triangle.

    Pairwise intersections must be single distinct vectors; the
    triple intersection is then automatically trivial.
    """
    s1, s2, s3 = set(l1.pts), set(l2.pts), set(l3.pts)
    if s1 == s2 or s2 == s3 or s1 == s3:
        return False
    p12, p23, p31 = s1 & s2, s2 & s3, s3 & s1
    if len(p12) != 1 or len(p23) != 1 or len(p31) != 1:
        return False
    return len(p12 | p23 | p31) == 3


# -- spreads ------------------------------------------------------------------


@dataclass
class Spread:
    """Partition of the nonzero vectors into same-dimension subspaces."""

    dim_m: int
    groups: list[np.ndarray]

    def __len__(self) -> int:
        return len(self.groups)

    def group_id_table(self, n: int) -> np.ndarray:
        """Vector -> group index lookup (int32, -1 for 0/unassigned)."""
        gid = np.full(1 << n, -1, dtype=np.int32)
        for i, g in enumerate(self.groups):
            gid[g] = i
        return gid

    def internal_line_count(self) -> int:
        per = [(len(g) * (len(g) - 1)) // 6 for g in self.groups]
        return int(sum(per))


def _rank_gf2(vectors: np.ndarray) -> int:
    basis: list[int] = []
    for v in vectors.tolist():
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


def validate_spread(spread: Spread, n: int) -> None:
    """Raise unless the groups partition GF(2)^n \\ {0} into m-subspaces."""
    m = spread.dim_m
    size = (1 << m) - 1
    seen = np.zeros(1 << n, dtype=bool)
    total = 0
    for i, g in enumerate(spread.groups):
        arr = np.asarray(g, dtype=np.int64)
        if arr.size != size or np.unique(arr).size != size:
            raise ValueError(f"group {i} is not {size} distinct vectors")
        if arr.min() < 1 or arr.max() >= (1 << n):
            raise ValueError(f"group {i} has out-of-range vectors")
        if seen[arr].any():
            raise ValueError(f"group {i} overlaps an earlier group")
        seen[arr] = True
        total += arr.size
        if _rank_gf2(arr) != m:
            raise ValueError(f"group {i} does not span an {m}-dimensional subspace")
    if total != (1 << n) - 1:
        raise ValueError("groups do not cover all nonzero vectors")


def desarguesian_spread(ctx: FieldCtx, m: int) -> Spread:
    """Multiplicative cosets of the order-2^m subfield of GF(2^n)."""
    n = ctx.n
    if n % m:
        raise ValueError(f"group dimension {m} does not divide {n}")
    g = ctx.order // ((1 << m) - 1)
    exp = ctx.exp_np
    j = np.arange((1 << m) - 1, dtype=np.int64)
    groups = []
    for i in range(g):
        coset = exp[(i + g * j) % ctx.order]
        groups.append(np.sort(coset))
    return Spread(m, groups)


# -- 2-dimensional subspaces over an extension field ---------------------------


@dataclass(frozen=True)
class PlaneBasis:
    """Canonical ordered basis of a 2-dim subspace over GF(2^m).

    ``u`` is the minimal vector of the plane, ``v`` the minimal vector
    outside the GF(2^m)-span of u.
    """

    u: int
    v: int


def _plane_elements(ctx: FieldCtx, emb: tuple[int, ...], u: int, v: int) -> np.ndarray:
    pu = np.array([ctx.mul(e, u) for e in emb], dtype=np.int64)
    pv = np.array([ctx.mul(e, v) for e in emb], dtype=np.int64)
    return (pu[:, None] ^ pv[None, :]).ravel()


def canonical_plane_basis(ctx: FieldCtx, emb: tuple[int, ...], x: int, y: int) -> PlaneBasis:
    """Canonical basis of the GF(2^m)-span of independent x, y."""
    grid = _plane_elements(ctx, emb, x, y)
    nz = grid[grid > 0]
    u = int(nz.min())
    ray = {ctx.mul(e, u) for e in emb}
    outside = nz[~np.isin(nz, np.fromiter(ray, dtype=np.int64))]
    v = int(outside.min())
    return PlaneBasis(u, v)


def enumerate_ext_planes(ctx: FieldCtx, m: int) -> Iterator[PlaneBasis]:
    """All 2-dimensional GF(2^m)-subspaces of GF(2^n), each exactly once.

    Subspaces are enumerated through reduced-echelon bases over the
    subfield and emitted in canonical (minimal-vector) form; the whole
    stream is deterministic and restartable.
    """
    n = ctx.n
    if n % m:
        raise ValueError(f"{m} does not divide {n}")
    s = n // m
    if s < 2:
        raise ValueError(f"need extension degree >= 2 over GF(2^{m}), got {s}")
    sub = build_field(m)
    emb = embed_subfield(sub, ctx)
    q = 1 << m
    # basis of GF(2^n) over GF(2^m): powers of xi
    xi_pow = [ctx.exp_table[i] for i in range(s)]

    def to_vector(coeffs: list[int]) -> int:
        acc = 0
        for c, b in zip(coeffs, xi_pow):
            if c:
                acc ^= ctx.mul(emb[c], b)
        return acc

    for j1 in range(s):
        for j2 in range(j1 + 1, s):
            free1 = [c for c in range(j1 + 1, s) if c != j2]
            free2 = [c for c in range(j2 + 1, s)]
            n1, n2 = len(free1), len(free2)
            for a_vals in _product_range(q, n1):
                r1 = [0] * s
                r1[j1] = 1
                for c, val in zip(free1, a_vals):
                    r1[c] = val
                v1 = to_vector(r1)
                for b_vals in _product_range(q, n2):
                    r2 = [0] * s
                    r2[j2] = 1
                    for c, val in zip(free2, b_vals):
                        r2[c] = val
                    v2 = to_vector(r2)
                    yield canonical_plane_basis(ctx, emb, v1, v2)


def _product_range(q: int, k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    for head in range(q):
        for tail in _product_range(q, k - 1):
            yield (head,) + tail


def ext_plane_count(m: int, s: int) -> int:
    """Number of 2-dim subspaces of an s-dim space over GF(2^m)."""
    q = 1 << m
    num = (q**s - 1) * (q**s - q)
    den = (q**2 - 1) * (q**2 - q)
    return num // den
