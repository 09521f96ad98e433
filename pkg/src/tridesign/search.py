"""Search for orbit certificates by exact cover.

Two reductions are built here.  The multiplicative-group problem
partitions the gamma-sets outside the spread exponents into triples
with a zero-sum representative; solving it yields generator pairs
(i, j) whose orbits tile all non-group lines.  The finer problem adds
the squaring automorphism: items become cy_gamma-sets, one stratum
per 2-cyclotomic class size, and a solution is a pair list (a, b)
whose combined sweep tiles the exponent ring.

Both searches re-check the orbit-level partition on their own output
before returning a certificate.
"""

from __future__ import annotations

import math
import sys

import numpy as np

from .gf2n import FieldCtx, build_field
from .orbits import (FrobeniusCertificate, OrbitCertificate, cy_gamma, gamma,
                     frobenius_reps)
from .xcover import (LimitExceeded, Unsatisfiable, XCoverInstance,
                     check_solution, solve)


class SearchUnsatisfiable(RuntimeError):
    def __init__(self, detail: str, result: Unsatisfiable):
        super().__init__(detail)
        self.result = result


class SearchLimitExceeded(RuntimeError):
    def __init__(self, detail: str, result: LimitExceeded):
        super().__init__(detail)
        self.result = result


class InfeasibleStratumError(RuntimeError):
    """A cyclotomic-class-size stratum cannot split into 18-sets."""

    def __init__(self, n: int, strata: dict[int, int]):
        bad = {t: c for t, c in strata.items() if t > 1 and c % 18}
        super().__init__(
            f"n={n}: stratum infeasible (class count not divisible by 18): "
            + ", ".join(f"t={t} (N_t={c})" for t, c in sorted(bad.items())))
        self.n = n
        self.strata = strata
        self.bad = bad


def _progress(msg: str, verbose: bool) -> None:
    if verbose:
        print(msg, file=sys.stderr, flush=True)


# -- multiplicative-group (gamma-set) problem -----------------------------------


def _gamma_key_table(ctx: FieldCtx, g: int) -> np.ndarray:
    """key_of[r] = min of gamma(r) for r outside the spread exponents, else -1."""
    M = ctx.order
    key_of = np.full(M, -1, dtype=np.int64)
    for r in range(1, M):
        if g > 1 and r % g == 0:
            continue
        if key_of[r] >= 0:
            continue
        gam = gamma(ctx, r)
        key = gam[0]
        for s in gam:
            key_of[s] = key
    return key_of


def singer_problem(ctx: FieldCtx, m: int, verbose: bool = False
                   ) -> tuple[XCoverInstance, list[int]]:
    """Exact-cover instance over gamma-set keys outside the spread.

    Candidate subsets are all key triples admitting a zero-sum
    representative; tags carry one witness (s1, s2) per triple for the
    later conversion to generator reps.
    """
    n = ctx.n
    M = ctx.order
    g = M // ((1 << m) - 1) if m > 1 else 1
    key_of = _gamma_key_table(ctx, g)
    keys = np.unique(key_of[key_of >= 0])
    universe = int(np.count_nonzero(key_of >= 0))
    if keys.size * 6 != universe:
        raise AssertionError(
            f"degenerate closure sets in the universe: {keys.size} items "
            f"over {universe} residues")
    key_index = np.full(M, -1, dtype=np.int64)
    key_index[keys] = np.arange(keys.size)
    gammas = np.array([gamma(ctx, int(k)) for k in keys], dtype=np.int64)
    _progress(f"gamma items: {keys.size} (universe {universe})", verbose)

    found: dict[int, tuple[int, int]] = {}
    for a_idx in range(keys.size):
        s1 = gammas[a_idx]                      # (6,)
        s2 = gammas[a_idx + 1:]                 # (P, 6)
        if s2.size == 0:
            continue
        s3 = (-s1[None, None, :] - s2[:, :, None]) % M    # (P, 6, 6)
        k3 = np.where(s3 > 0, key_of[s3], -1)
        own = keys[a_idx]
        partner = keys[a_idx + 1:][:, None, None]
        valid = (k3 >= 0) & (k3 != own) & (k3 != partner)
        for p, i2, i1 in zip(*np.nonzero(valid)):
            trip = tuple(sorted((own, int(keys[a_idx + 1 + p]), int(k3[p, i2, i1]))))
            packed = (trip[0] << 26) | (trip[1] << 13) | trip[2] if n <= 13 else trip
            if packed not in found:
                found[packed] = (int(s1[i1]), int(s2[p, i2]))
    triples = sorted(found)
    subsets = []
    tags = []
    for packed in triples:
        if isinstance(packed, tuple):
            trip = packed
        else:
            trip = (packed >> 26, (packed >> 13) & 0x1FFF, packed & 0x1FFF)
        subsets.append(tuple(sorted(int(key_index[k]) for k in trip)))
        tags.append(found[packed])
    _progress(f"candidate triples: {len(subsets)}", verbose)
    inst = XCoverInstance(n_items=keys.size, subsets=subsets, tags=tags,
                          labels=[int(k) for k in keys])
    return inst, [int(k) for k in keys]


def search_singer(n: int, m: int, node_limit: int | None = None,
                  time_limit: float | None = None,
                  verbose: bool = False) -> OrbitCertificate:
    """Find generator reps whose multiplicative orbits tile the non-group lines."""
    if m < 1 or n % m:
        raise ValueError(f"group dimension {m} must divide {n}")
    if (n - m) % 6:
        raise ValueError(f"(n={n}, m={m}) rejected: n - m = {n - m} "
                         "not divisible by 6, no invariant design exists")
    ctx = build_field(n)
    M = ctx.order
    g = M // ((1 << m) - 1) if m > 1 else 1
    kbar_size = (M - 1) - (M // g - 1 if g > 1 else 0)
    n_items = kbar_size // 6
    if n_items > LAZY_STRATUM_THRESHOLD:
        key_of = _gamma_key_table(ctx, g)
        keys = sorted(int(k) for k in np.unique(key_of[key_of >= 0]))
        gammas = {k: np.array(gamma(ctx, k), dtype=np.int64) for k in keys}
        _progress(f"gamma items: {len(keys)}, lazy search", verbose)
        witnesses = _solve_stratum_lazy(ctx, keys, key_of, gammas, gammas,
                                        node_limit, time_limit, verbose)
    else:
        inst, keys = singer_problem(ctx, m, verbose=verbose)
        result = solve(inst, node_limit=node_limit, time_limit=time_limit)
        if isinstance(result, Unsatisfiable):
            raise SearchUnsatisfiable(f"no orbit partition for (n={n}, m={m})",
                                      result)
        if isinstance(result, LimitExceeded):
            raise SearchLimitExceeded(
                f"search (n={n}, m={m}) stopped: {result.reason} "
                f"after {result.nodes} nodes", result)
        assert check_solution(inst, result)
        _progress(f"solved in {result.nodes} nodes", verbose)
        witnesses = [inst.tags[s] for s in result.chosen]
    reps = sorted((s1, (s1 + s2) % M) for s1, s2 in witnesses)
    cert = OrbitCertificate(n=n, m=m, poly=ctx.poly, reps=tuple(reps))
    _verify_singer_partition(ctx, m, cert)
    return cert


def _verify_singer_partition(ctx: FieldCtx, m: int, cert: OrbitCertificate) -> None:
    M = ctx.order
    g = M // ((1 << m) - 1) if m > 1 else 1
    covered: set[int] = set()
    for i, j in cert.reps:
        for k in (i, j, (j - i) % M):
            gam = gamma(ctx, k)
            if covered.intersection(gam):
                raise AssertionError(f"orbit partition overlap at rep ({i},{j})")
            covered.update(gam)
    universe = {r for r in range(1, M) if g == 1 or r % g}
    if covered != universe:
        raise AssertionError("orbit partition does not cover the exponent universe")


# -- multiplicative + squaring (cy_gamma) problem -------------------------------


def frobenius_strata(n: int) -> dict[int, int]:
    """Number of 2-cyclotomic classes of each size t dividing n.

    Counted arithmetically (no enumeration): residues whose class size
    divides t number 2^gcd(n,t) - 1, and Moebius inversion over the
    divisors of n isolates the exact-size counts.
    """
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    size_le = {t: (1 << math.gcd(n, t)) - 1 for t in divisors}

    def moebius(x: int) -> int:
        out, rem, p = 1, x, 2
        while p * p <= rem:
            if rem % p == 0:
                rem //= p
                if rem % p == 0:
                    return 0
                out = -out
            p += 1
        if rem > 1:
            out = -out
        return out

    strata = {}
    for t in divisors:
        total = sum(moebius(t // d) * size_le[d] for d in divisors if t % d == 0)
        if total:
            strata[t] = total // t
    return strata


def frobenius_problem(ctx: FieldCtx, t: int, verbose: bool = False
                      ) -> XCoverInstance:
    """Exact-cover instance over the cy_gamma-sets of class size t.

    A candidate is a key triple {K(a), K(b), K(a+b)} of pairwise
    distinct cy_gamma-sets inside the stratum; the witness pair (a, b)
    rides along as the tag.
    """
    M = ctx.order
    stratum_keys, key_of, gamma_of_key, members = _stratum_tables(ctx, t)
    key_index = {k: i for i, k in enumerate(stratum_keys)}
    _progress(f"stratum t={t}: {len(stratum_keys)} cy-gamma items", verbose)

    found: dict[tuple[int, int, int], tuple[int, int]] = {}
    for ka in stratum_keys:
        ga = gamma_of_key[ka]                              # (6,)
        for kb in stratum_keys:
            if kb <= ka:
                continue
            mb = members[kb]                               # (6t,)
            s3 = (-ga[:, None] - mb[None, :]) % M          # (6, 6t)
            k3 = np.where(s3 > 0, key_of[s3], -1)
            valid = (k3 >= 0) & (k3 != ka) & (k3 != kb)
            for i1, i2 in zip(*np.nonzero(valid)):
                kc = int(k3[i1, i2])
                if kc not in key_index:
                    continue  # witness sum lands outside the stratum
                trip = tuple(sorted((ka, kb, kc)))
                if trip not in found:
                    found[trip] = (int(ga[i1]), int(mb[i2]))
    subsets, tags = [], []
    for trip in sorted(found):
        subsets.append(tuple(sorted(key_index[k] for k in trip)))
        tags.append(found[trip])
    _progress(f"stratum t={t}: {len(subsets)} candidate triples", verbose)
    return XCoverInstance(n_items=len(stratum_keys), subsets=subsets, tags=tags,
                          labels=stratum_keys)


def _class_size(n: int, k: int) -> int:
    M = (1 << n) - 1
    v = (2 * k) % M
    size = 1
    while v != k:
        v = (2 * v) % M
        size += 1
    return size


# Above this many items the candidate triples are not materialized
# (the triple set is ~90% dense: gigabytes at n=19); a lazy first-fit
# DFS generates candidates on demand instead.  All acceptance-scale
# problems (up to 672 items) stay on the materialized exact-cover
# path.
LAZY_STRATUM_THRESHOLD = 1000


def _stratum_tables(ctx: FieldCtx, t: int):
    """cy_gamma keys of class size t, plus lookup tables for the solver."""
    n, M = ctx.n, ctx.order
    key_of = np.full(M, -1, dtype=np.int64)
    stratum_keys: list[int] = []
    gamma_of_key: dict[int, np.ndarray] = {}
    members: dict[int, np.ndarray] = {}
    for r in range(1, M):
        if key_of[r] >= 0:
            continue
        cg = cy_gamma(ctx, r)
        key = cg[0]
        arr = np.array(cg, dtype=np.int64)
        for s in cg:
            key_of[s] = key
        if _class_size(n, r) == t:
            stratum_keys.append(key)
            gamma_of_key[key] = np.array(gamma(ctx, key), dtype=np.int64)
            members[key] = arr
    stratum_keys.sort()
    return stratum_keys, key_of, gamma_of_key, members


def _solve_stratum_lazy(ctx: FieldCtx, stratum_keys, key_of, gamma_of_key,
                        members, node_limit, time_limit, verbose
                        ) -> list[tuple[int, int]]:
    """First-fit DFS over lazily generated triples.

    Candidates for the smallest uncovered key are produced in
    ascending (partner, third-key) order, so the search is as
    deterministic as the materialized solver.  The triple set is dense
    enough that the first fit almost always extends; backtracking
    handles the rare dead end.
    """
    import time as _time

    class _LazyLimit(Exception):
        def __init__(self, reason: str):
            self.reason = reason

    # depth = one frame per chosen triple plus generator/numpy frames
    need = (len(stratum_keys) // 3) * 5 + 1000
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)

    M = ctx.order
    keys = stratum_keys
    covered: set[int] = set()
    chosen: list[tuple[int, int, int, int, int]] = []  # (k1,k2,k3,a,b)
    deadline = _time.monotonic() + time_limit if time_limit else None
    nodes = 0

    def candidates(k1: int):
        g1 = gamma_of_key[k1]
        seen: set[tuple[int, int]] = set()
        for k2 in keys:
            if k2 == k1 or k2 in covered:
                continue
            mb = members[k2]
            s3 = (-g1[:, None] - mb[None, :]) % M
            k3s = np.where(s3 > 0, key_of[s3], -1)
            hits = np.nonzero((k3s >= 0) & (k3s != k1) & (k3s != k2))
            options = sorted(
                {(int(k3s[i, j]), int(g1[i]), int(mb[j]))
                 for i, j in zip(*hits)
                 if int(k3s[i, j]) in members and int(k3s[i, j]) not in covered
                 and int(k3s[i, j]) > k2})
            for k3, a, b in options:
                if (k2, k3) in seen:
                    continue
                seen.add((k2, k3))
                yield k2, k3, a, b

    def dfs() -> bool:
        nonlocal nodes
        if len(covered) == len(keys):
            return True
        nodes += 1
        if verbose and nodes % 2000 == 0:
            _progress(f"  lazy search: {nodes} nodes, "
                      f"{len(covered)}/{len(keys)} covered", verbose)
        if node_limit is not None and nodes > node_limit:
            raise _LazyLimit("node limit")
        if deadline is not None and _time.monotonic() > deadline:
            raise _LazyLimit("time limit")
        k1 = next(k for k in keys if k not in covered)
        covered.add(k1)
        for k2, k3, a, b in candidates(k1):
            covered.add(k2)
            covered.add(k3)
            chosen.append((k1, k2, k3, a, b))
            if dfs():
                return True
            chosen.pop()
            covered.discard(k2)
            covered.discard(k3)
        covered.discard(k1)
        return False

    try:
        ok = dfs()
    except _LazyLimit as l:
        raise SearchLimitExceeded(
            f"lazy stratum search stopped: {l.reason} after {nodes} nodes",
            LimitExceeded(nodes=nodes, reason=l.reason)) from None
    if not ok:
        raise SearchUnsatisfiable("lazy stratum search exhausted",
                                  Unsatisfiable(nodes=nodes))
    _progress(f"lazy stratum solved in {nodes} nodes", verbose)
    return [(a, b) for (_, _, _, a, b) in chosen]


def search_frobenius(n: int, node_limit: int | None = None,
                     time_limit: float | None = None,
                     allow_long: bool = False,
                     verbose: bool = False) -> FrobeniusCertificate:
    """Find pairs (a, b) whose multiplicative+squaring sweep tiles Z_{2^n-1}*.

    Strata (one per cyclotomic class size > 1) are checked for the
    18-divisibility obstruction up front and solved independently.
    """
    if n % 6 != 1:
        raise ValueError(f"n={n} rejected: need n congruent to 1 mod 6")
    strata = frobenius_strata(n)
    if any(t > 1 and c % 18 for t, c in strata.items()):
        raise InfeasibleStratumError(n, strata)
    if n >= 19 and not allow_long:
        raise ValueError(f"n={n} is a long run; pass allow_long=True "
                         "(CLI: --allow-long) to proceed")
    ctx = build_field(n)
    pairs: list[tuple[int, int]] = []
    for t in sorted(strata):
        if t == 1:
            continue  # only k = 0 fixed by squaring
        expected = strata[t] // 18 * 3
        if expected > LAZY_STRATUM_THRESHOLD:
            stratum_keys, key_of, gamma_of_key, members = _stratum_tables(ctx, t)
            if len(stratum_keys) != expected:
                raise AssertionError(
                    f"stratum t={t}: {len(stratum_keys)} items, "
                    f"expected {expected}")
            _progress(f"stratum t={t}: {expected} items, lazy search", verbose)
            pairs.extend(_solve_stratum_lazy(ctx, stratum_keys, key_of,
                                             gamma_of_key, members,
                                             node_limit, time_limit, verbose))
            continue
        inst = frobenius_problem(ctx, t, verbose=verbose)
        if inst.n_items != expected:
            raise AssertionError(
                f"stratum t={t}: {inst.n_items} items, expected {expected}")
        result = solve(inst, node_limit=node_limit, time_limit=time_limit)
        if isinstance(result, Unsatisfiable):
            raise SearchUnsatisfiable(f"stratum t={t} unsatisfiable", result)
        if isinstance(result, LimitExceeded):
            raise SearchLimitExceeded(
                f"stratum t={t} stopped: {result.reason} "
                f"after {result.nodes} nodes", result)
        assert check_solution(inst, result)
        _progress(f"stratum t={t} solved in {result.nodes} nodes", verbose)
        pairs.extend(inst.tags[s] for s in result.chosen)
    pairs.sort()
    cert = FrobeniusCertificate(n=n, poly=ctx.poly, pairs=tuple(pairs))
    _verify_frobenius_partition(ctx, cert)
    return cert


def _verify_frobenius_partition(ctx: FieldCtx, cert: FrobeniusCertificate) -> None:
    M = ctx.order
    covered: set[int] = set()
    for i, j in frobenius_reps(ctx, cert.pairs):
        for k in (i, j, (j - i) % M):
            gam = gamma(ctx, k)
            if covered.intersection(gam):
                raise AssertionError(f"orbit partition overlap at rep ({i},{j})")
            covered.update(gam)
    if covered != set(range(1, M)):
        raise AssertionError("orbit partition does not cover Z_{2^n-1} minus 0")
