"""Triangle designs, group-divisible triangle designs, and their
construction-agnostic verifiers.

A design is stored as an (T, 3) array of corner triples (each row
sorted ascending; rows sorted lexicographically).  Verifiers never
trust construction metadata: they recompute every line key from the
corner vectors, check exact coverage, and report bounded witness
samples on failure.

The counting identities enforced here: a design over GF(2)^n has
(2^n-1)(2^n-2)/18 triangles covering the (2^n-1)(2^n-2)/6 lines; an
(n,m)-GDD has (2^n-1)(2^n-2^m)/18 triangles covering exactly the
lines not inside a group.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .lines import (Spread, TriangleV, line_count, enumerate_line_keys_np,
                    validate_spread)

MAX_WITNESSES = 10


def _normalize_triangles(tri: np.ndarray) -> np.ndarray:
    tri = np.asarray(tri, dtype=np.int64)
    if tri.ndim != 2 or tri.shape[1] != 3:
        raise ValueError("triangle array must have shape (T, 3)")
    tri = np.sort(tri, axis=1)
    order = np.lexsort((tri[:, 2], tri[:, 1], tri[:, 0]))
    return tri[order]


@dataclass
class Design:
    """A set of triangles over GF(2)^n.

    ``poly`` records the ambient field polynomial used by
    constructions and the file format; the triangle data itself is
    polynomial-agnostic.
    """

    n: int
    poly: int
    tri: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        self.tri = _normalize_triangles(self.tri)

    @property
    def triangle_count(self) -> int:
        return int(self.tri.shape[0])

    def triangles(self):
        for a, b, c in self.tri.tolist():
            yield TriangleV((a, b, c))

    @property
    def kind(self) -> str:
        return "design"


@dataclass
class Gdd(Design):
    """A design plus a spread of m-dimensional groups."""

    m: int = 0
    groups: Spread = field(default=None)  # type: ignore[assignment]

    @property
    def kind(self) -> str:
        return "gdd"


def expected_triangle_count(n: int, m: int = 1) -> int:
    """Triangles needed to cover every line outside the groups."""
    N = (1 << n) - 1
    return N * ((1 << n) - (1 << m)) // 18


def _structural_check(tri: np.ndarray, n: int) -> None:
    if tri.shape[0] == 0:
        return
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    bad = (a <= 0) | (b <= 0) | (c <= 0) | (a == b) | (b == c) | (a == c) \
        | ((a ^ b ^ c) == 0) | (c >= (1 << n))
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise ValueError(f"malformed triangle at row {i}: {tuple(tri[i].tolist())}")


def _line_keys(tri: np.ndarray, n: int) -> np.ndarray:
    """Key of each of the 3T lines: two smallest points packed as (lo << n) | mid."""
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    keys = np.empty(3 * tri.shape[0], dtype=np.int64)
    for idx, (p, q) in enumerate(((a, b), (b, c), (a, c))):
        z = p ^ q
        lo = np.minimum(np.minimum(p, q), z)
        hi = np.maximum(np.maximum(p, q), z)
        mid = lo ^ hi  # p ^ q ^ z = 0
        keys[idx::3] = (lo << n) | mid
    return keys


def _key_to_line(key: int, n: int) -> tuple[int, int, int]:
    lo, mid = key >> n, key & ((1 << n) - 1)
    return (lo, mid, lo ^ mid)


def _describe_keys(keys: np.ndarray, n: int) -> list[tuple[int, int, int]]:
    return [_key_to_line(int(k), n) for k in keys[:MAX_WITNESSES]]


@dataclass
class CoverReport:
    """Result of an exact-cover verification."""

    ok: bool
    kind: str
    n: int
    m: int
    triangle_count: int
    expected_triangles: int
    line_total: int
    lines_seen: int
    uncovered: list = field(default_factory=list)
    multiply_covered: list = field(default_factory=list)
    group_line_hits: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "report": "cover",
            "ok": self.ok,
            "kind": self.kind,
            "n": self.n,
            "m": self.m,
            "triangle_count": self.triangle_count,
            "expected_triangles": self.expected_triangles,
            "line_total": self.line_total,
            "lines_seen": self.lines_seen,
            "witnesses": {
                "uncovered": [list(w) for w in self.uncovered],
                "multiply_covered": [list(w) for w in self.multiply_covered],
                "group_line_hits": [list(w) for w in self.group_line_hits],
            },
        }

    def to_text(self) -> str:
        lines = [f"{self.kind} n={self.n} m={self.m}: "
                 f"{'OK' if self.ok else 'FAIL'} "
                 f"({self.triangle_count} triangles, expected {self.expected_triangles}; "
                 f"{self.lines_seen}/{self.line_total} lines covered)"]
        for name, wit in (("uncovered", self.uncovered),
                          ("multiply covered", self.multiply_covered),
                          ("group line in triangle", self.group_line_hits)):
            if wit:
                lines.append(f"  {name} (up to {MAX_WITNESSES}): "
                             + ", ".join(str(w) for w in wit))
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


@dataclass
class BalanceReport:
    balanced: bool
    lam: int | None
    histogram: dict[int, int]
    expected_lambda: int | None = None
    lambda_ok: bool | None = None

    @property
    def ok(self) -> bool:
        return self.balanced and self.lambda_ok is not False

    def to_json_dict(self) -> dict:
        return {
            "report": "balance",
            "ok": self.ok,
            "balanced": self.balanced,
            "lambda": self.lam,
            "expected_lambda": self.expected_lambda,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }

    def to_text(self) -> str:
        if self.balanced:
            extra = ""
            if self.expected_lambda is not None:
                extra = f" (expected {self.expected_lambda}: " \
                        f"{'ok' if self.lambda_ok else 'MISMATCH'})"
            return f"balanced, lambda={self.lam}{extra}"
        hist = ", ".join(f"{k}x{v}" for k, v in sorted(self.histogram.items()))
        return f"unbalanced; coverage histogram: {hist}"

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def _chunked_line_keys(tri: np.ndarray, n: int, chunk: int = 1 << 20) -> np.ndarray:
    if tri.shape[0] <= chunk:
        return _line_keys(tri, n)
    parts = [_line_keys(tri[i:i + chunk], n) for i in range(0, tri.shape[0], chunk)]
    return np.concatenate(parts)


def verify_design(d: Design) -> CoverReport:
    """Check that the triangles cover every line of GF(2)^n exactly once."""
    _structural_check(d.tri, d.n)
    total = line_count(d.n)
    expected = expected_triangle_count(d.n, 1)
    keys = np.sort(_chunked_line_keys(d.tri, d.n))
    dup_mask = np.zeros(keys.shape, dtype=bool)
    if keys.size:
        dup_mask[1:] = keys[1:] == keys[:-1]
    dups = np.unique(keys[dup_mask])
    distinct = keys.size - int(dup_mask.sum())
    uncovered: list = []
    if distinct != total:
        missing = np.setdiff1d(enumerate_line_keys_np(d.n), keys, assume_unique=False)
        uncovered = _describe_keys(missing, d.n)
    ok = (dups.size == 0 and distinct == total
          and d.triangle_count == expected)
    return CoverReport(ok=ok, kind="design", n=d.n, m=1,
                       triangle_count=d.triangle_count,
                       expected_triangles=expected,
                       line_total=total, lines_seen=distinct,
                       uncovered=uncovered,
                       multiply_covered=_describe_keys(dups, d.n))


def verify_gdd(g: Gdd) -> CoverReport:
    """Check the group-divisibility contract.

    (i) groups form a valid spread, (ii) no triangle line lies inside
    a group, (iii) lines outside groups are covered exactly once,
    (iv) the triangle count matches the counting identity.
    """
    if g.m < 1:
        raise ValueError("group dimension must be >= 1")
    _structural_check(g.tri, g.n)
    validate_spread(g.groups, g.n)
    if g.groups.dim_m != g.m:
        raise ValueError(f"spread dimension {g.groups.dim_m} != declared m={g.m}")
    gid = g.groups.group_id_table(g.n)
    total = line_count(g.n)
    internal = g.groups.internal_line_count()
    expected = expected_triangle_count(g.n, g.m)

    keys = _chunked_line_keys(g.tri, g.n)
    mask_n = (1 << g.n) - 1
    lo = keys >> g.n
    mid = keys & mask_n
    in_group = gid[lo] == gid[mid]
    group_hits = np.unique(keys[in_group])

    keys = np.sort(keys)
    dup_mask = np.zeros(keys.shape, dtype=bool)
    if keys.size:
        dup_mask[1:] = keys[1:] == keys[:-1]
    dups = np.unique(keys[dup_mask])
    distinct = keys.size - int(dup_mask.sum())
    outside_total = total - internal
    uncovered: list = []
    if distinct != outside_total or group_hits.size:
        all_keys = enumerate_line_keys_np(g.n)
        alo = all_keys >> g.n
        amid = all_keys & mask_n
        outside_keys = all_keys[gid[alo] != gid[amid]]
        missing = np.setdiff1d(outside_keys, keys, assume_unique=False)
        uncovered = _describe_keys(missing, g.n)
    ok = (group_hits.size == 0 and dups.size == 0
          and distinct == outside_total and not uncovered
          and g.triangle_count == expected)
    return CoverReport(ok=ok, kind="gdd", n=g.n, m=g.m,
                       triangle_count=g.triangle_count,
                       expected_triangles=expected,
                       line_total=outside_total, lines_seen=distinct,
                       uncovered=uncovered,
                       multiply_covered=_describe_keys(dups, g.n),
                       group_line_hits=_describe_keys(group_hits, g.n))


def coverage_counts(tri: np.ndarray, n: int) -> np.ndarray:
    """Per-vector count of triangles covering it (index = vector)."""
    tri = np.asarray(tri, dtype=np.int64)
    if tri.shape[0] == 0:
        return np.zeros(1 << n, dtype=np.int64)
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    pts = np.concatenate([a, b, c, a ^ b, b ^ c, a ^ c])
    return np.bincount(pts, minlength=1 << n).astype(np.int64)


def verify_balanced(t: Design) -> BalanceReport:
    """Count triangle coverage per nonzero vector; balanced iff constant.

    For a plain design the balanced count must be (2^n - 2)/3, which
    forces n odd; the report carries that cross-check.
    """
    cov = coverage_counts(t.tri, t.n)[1:]
    values, counts = np.unique(cov, return_counts=True)
    hist = {int(v): int(c) for v, c in zip(values, counts)}
    balanced = values.size == 1
    lam = int(values[0]) if balanced else None
    expected = None
    lambda_ok = None
    if isinstance(t, Gdd):
        pass  # constancy is the whole contract for a GDD
    elif balanced:
        if t.n % 2 == 1:
            expected = ((1 << t.n) - 2) // 3
            lambda_ok = lam == expected
        else:
            lambda_ok = False  # even dimension cannot carry a balanced design
    return BalanceReport(balanced=balanced, lam=lam, histogram=hist,
                         expected_lambda=expected, lambda_ok=lambda_ok)


@dataclass
class ChargeLedger:
    """Signed corner-minus-noncorner count per vector."""

    n: int
    counts: np.ndarray

    def charge(self, v: int) -> int:
        return int(self.counts[v])

    def as_dict(self) -> dict[int, int]:
        nz = np.flatnonzero(self.counts)
        return {int(v): int(self.counts[v]) for v in nz}

    @property
    def is_zero(self) -> bool:
        return not self.counts.any()

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def charge_ledger(tri: np.ndarray, n: int) -> ChargeLedger:
    """+1 per corner appearance, -1 per non-corner appearance.

    For an exact cover, an all-zero ledger is equivalent to balance:
    2*corners + noncorners at a vector is the number of lines through
    it, a constant.
    """
    tri = np.asarray(tri, dtype=np.int64)
    counts = np.zeros(1 << n, dtype=np.int64)
    if tri.shape[0]:
        a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
        plus = np.bincount(np.concatenate([a, b, c]), minlength=1 << n)
        minus = np.bincount(np.concatenate([a ^ b, b ^ c, a ^ c]), minlength=1 << n)
        counts = (plus - minus).astype(np.int64)
    return ChargeLedger(n, counts)
