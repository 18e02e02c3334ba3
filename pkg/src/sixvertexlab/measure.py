"""The probability measure on path collections with k rows and M columns.

The top cross-section law is

    P(lambda^k = mu) = F_mu([u]^k) f(mu; [v]^M, rho) / Z,
    Z = (q;q)_k ((1 - u/s)/(1 - su))^k ((1 - quv)/(1 - uv))^{kM},

supported on signatures with distinct parts >= 1.  Two routes build the pmf:

* "contour": P(mu) = Fhat(mu) * I_C(mu; M), where Fhat is the scaled strict
  row transfer and I_C the normalized composite-contour integral.  Both
  factors are O(1) for mu near a M, so this route scales to large M.
* "direct": literal assembly F * f / Z from the boundary nu-sum; exact and
  cheap for small M, used as the cross-check oracle.

Lower rows given the top row follow the six-vertex Gibbs property: the
conditional law on half-strict Gelfand-Tsetlin patterns with fixed top row
is proportional to w1^{N1} ... w6^{N6}, the N_i counting vertex types over
the window [1, lam_max] x [1, k].  Conditional sampling is exact enumeration
over GT_lambda (no Markov chain mixing questions at desk scale).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .asymptotics import CompositeContour, constants, contour_nodes
from .boundary import QuadratureError, f_direct_batch
from .core import ModelParams, Signature, as_parts, q_pochhammer
from .paths import PathCollection
from .symfunc import (F_all, F_scaled_pair_table, _scaled_row_factors,
                      _scaled_row_event_weight,
                      _strict_interlacing_successors)
from .weights import six_vertex_weights


class MassDeficitError(RuntimeError):
    def __init__(self, message: str, report: dict):
        super().__init__(f"{message}: {report}")
        self.report = report


class EnumerationCapError(RuntimeError):
    pass


@dataclass(frozen=True)
class MeasureSpec:
    """Identifies one measure: parameters plus the row/column counts."""

    params: ModelParams
    n_rows: int
    m_cols: int


def project_rows(spec: MeasureSpec, k: int) -> MeasureSpec:
    """The measure's own projection to its bottom k rows: same column data,
    spectral parameters restricted to the first k rows."""
    if not (1 <= k <= spec.n_rows):
        raise ValueError(f"need 1 <= k <= {spec.n_rows}, got {k}")
    p = spec.params
    u_vec = p.u_vec[:k] if p.u_vec is not None else None
    return MeasureSpec(params=ModelParams(q=p.q, u=p.u, v=p.v, u_vec=u_vec,
                                          v_vec=p.v_vec),
                       n_rows=k, m_cols=spec.m_cols)


def partition_Z(k: int, M: int, params: ModelParams) -> float:
    """(q;q)_k ((1 - u/s)/(1 - su))^k ((1 - quv)/(1 - uv))^{kM}."""
    q, s, u, v = params.q, params.s, params.u, params.v
    out = q_pochhammer(q, q, k) * ((1 - u / s) / (1 - s * u)) ** k
    out *= ((1 - q * u * v) / (1 - u * v)) ** (k * M)
    return out


# ---------------------------------------------------------------------------
# top-row pmf


@dataclass(frozen=True)
class TopRowPMF:
    """Exact (truncated) law of the top cross-section.

    Atoms are canonical part tuples in colexicographic order so iteration,
    serialization and inverse-CDF sampling are reproducible bit for bit.
    """

    k: int
    M: int
    params: ModelParams
    route: str
    window: tuple[int, int]
    atoms: tuple[tuple[int, ...], ...]
    probs: tuple[float, ...]

    @property
    def total_mass(self) -> float:
        return float(np.sum(np.asarray(self.probs)))

    def prob(self, sig) -> float:
        target = as_parts(sig)
        try:
            return self.probs[self.atoms.index(target)]
        except ValueError:
            return 0.0

    def as_dict(self) -> dict[tuple[int, ...], float]:
        return dict(zip(self.atoms, self.probs))

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """count atom indices drawn by inverse CDF (deterministic per rng)."""
        cdf = np.cumsum(np.asarray(self.probs))
        u = rng.random(count) * cdf[-1]
        return np.searchsorted(cdf, u, side="right").clip(0, len(cdf) - 1)


def sample_top_row(pmf: TopRowPMF, seed: int, count: int) -> list[Signature]:
    """i.i.d. inverse-CDF draws from a pmf; identical seeds give identical
    output."""
    rng = np.random.default_rng(seed)
    idx = pmf.sample(rng, count)
    return [Signature(pmf.atoms[i]) for i in idx]


def _colex_sorted(atoms: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    return sorted(atoms, key=lambda t: tuple(reversed(t)))


def _strict_box(k: int, lo: int, hi: int):
    """Strict descending tuples with all parts in [lo, hi]."""
    import itertools
    for combo in itertools.combinations(range(hi, lo - 1, -1), k):
        yield combo


def _ic_window(k: int, lo: int, hi: int, M: int, params: ModelParams,
               tol: float, contour: CompositeContour | None = None,
               max_segment_nodes: int = 1 << 12) -> np.ndarray:
    """Normalized boundary integrals I_C(mu; M) for every exponent box entry,
    as an array indexed by (mu_1 - lo, ..., mu_k - lo)."""
    from .asymptotics import log_ratio_s, log_ratio_v
    if contour is None:
        contour = CompositeContour()
    s, u, q = params.s, params.u, params.q
    m_vals = np.arange(lo, hi + 1)

    def evaluate(ct: CompositeContour) -> np.ndarray:
        z, wts = contour_nodes(params, M, ct)
        ls = log_ratio_s(z, params)
        lv = log_ratio_v(z, params)
        base = s * (1 - s * u) / ((1 - s * z) * (1 - u / s)) * wts
        with np.errstate(under="ignore"):
            A = np.exp(np.multiply.outer(m_vals, ls) + M * lv) * base
        if k == 1:
            return A.sum(axis=1).real
        kern = (z[:, None] - z[None, :]) / (z[:, None] - q * z[None, :])
        if k == 2:
            return (A @ kern @ A.T).real
        if k == 3:
            out = np.empty((len(m_vals),) * 3)
            kt = kern.T.copy()
            for i3, _m3 in enumerate(m_vals):
                inner = (kern * A[i3]) @ kt          # C(n1, n2)
                out[:, :, i3] = (A @ (kern * inner) @ A.T).real
            return out
        raise ValueError(f"pmf engine supports k <= 3, got k = {k}")

    prev = evaluate(contour)
    while contour.segment_nodes < max_segment_nodes:
        contour = contour.doubled()
        cur = evaluate(contour)
        scale = np.abs(cur).max()
        if np.abs(cur - prev).max() < tol * max(scale, 1e-300):
            return cur
        prev = cur
    raise QuadratureError("pmf contour quadrature did not converge",
                          {"nodes": contour.segment_nodes, "k": k, "M": M,
                           "window": (lo, hi)})


def _f_scaled_window(k: int, lo: int, hi: int, params: ModelParams) -> np.ndarray:
    """Fhat(mu) = F_mu([u]^k) t^{-|mu|} on the strict box, same indexing as
    _ic_window; nonstrict entries hold garbage and are never read."""
    W = hi - lo + 1
    if k == 1:
        stay, land, casc, dep = _scaled_row_factors(params)
        return np.full(W, land)
    if k == 2:
        table = F_scaled_pair_table(params)
        gaps = np.arange(lo, hi + 1)[:, None] - np.arange(lo, hi + 1)[None, :]
        out = np.zeros((W, W))
        pos = gaps >= 1
        out[pos] = np.vectorize(table)(gaps[pos])
        return out
    if k == 3:
        # one vectorized row on top of the two-row closed form; the transfer
        # from (c1, c2) splits into three separable blocks by whether the
        # middle exit hits c2 (stay), c1 (cascade) or the open interval
        stay, land, casc, dep = _scaled_row_factors(params)
        pair = F_scaled_pair_table(params)
        out = np.zeros((W, W, W))
        for c1 in range(lo + 1, hi + 1):
            i1 = c1 - lo
            a1 = np.full(W - i1, land * dep)
            a1[0] = stay  # path at c1 stays put
            for c2 in range(lo, c1):
                i2 = c2 - lo
                amp = pair(c1 - c2)
                g3 = np.full(i2 + 1, land * dep)
                g3[i2] = casc  # new path lands exactly on the vacated c2
                if i2 >= 1:
                    out[i1:, i2, :i2] += amp * stay * land * a1[:, None]
                out[i1 + 1:, i1, :i2 + 1] += amp * land * casc * g3[None, :]
                if i2 + 1 < i1:
                    out[i1:, i2 + 1:i1, :i2 + 1] += (amp * land
                                                     * a1[:, None, None]
                                                     * g3[None, None, :])
        return out
    raise ValueError(f"pmf engine supports k <= 3, got k = {k}")


def _pmf_window(k: int, M: int, params: ModelParams, lo: int, hi: int,
                route: str, quad_tol: float) -> dict:
    if route == "contour":
        ic = _ic_window(k, lo, hi, M, params, quad_tol)
        fhat = _f_scaled_window(k, lo, hi, params)
        probs = {}
        for mu in _strict_box(k, lo, hi):
            idx = tuple(m - lo for m in mu)
            probs[mu] = float(fhat[idx] * ic[idx])
        return probs
    if route == "direct":
        f_tab = f_direct_batch(k, hi, params.v, M, params)
        F_tab = F_all((), (params.u,) * k, params, hi)
        z = partition_Z(k, M, params)
        probs = {}
        for mu, f_val in f_tab.items():
            if mu[-1] < 1:
                continue
            F_val = complex(F_tab.get(mu, 0.0)).real
            probs[mu] = F_val * f_val / z
        return probs
    raise ValueError(f"unknown route {route!r}")


def admissible_ratio(params: ModelParams) -> float:
    """r = |(u-s)(v-s)/((1-su)(1-sv))| < 1; one extra column of support
    multiplies a pmf term by about r."""
    s = params.s
    return abs((params.u - s) / (1 - s * params.u)
               * (params.v - s) / (1 - s * params.v))


def top_row_pmf(k: int, M: int, params: ModelParams, tol: float = 1e-6,
                route: str = "contour", quad_tol: float = 1e-10,
                max_part: int = 100_000) -> TopRowPMF:
    """Exact truncated law of the top cross-section (k <= 3).

    The support window around a M grows until (i) the mass added by the last
    extension is below tol/10 and (ii) the top boundary layer certifies a
    geometric tail below tol/2 via the admissible ratio r < 1.  A total mass
    off 1 by more than tol raises MassDeficitError; passing this check
    exercises every formula in the package at once.
    """
    if k > 3:
        raise ValueError("top_row_pmf supports k <= 3")
    cst = constants(params)
    center, width = cst.a * M, cst.d * math.sqrt(M)
    r = admissible_ratio(params)
    # geometric floor: r^hi below tol regardless of the Gaussian scale
    geom_hi = int(math.ceil(math.log(tol / 10.0) / math.log(r))) + k
    lo = max(1, math.floor(center - 7.0 * width)) if route == "contour" else 1
    hi = max(lo + k, math.ceil(center + 7.0 * width), geom_hi)
    step = max(4, math.ceil(2.0 * width))
    probs = _pmf_window(k, M, params, lo, hi, route, quad_tol)
    mass = sum(probs.values())
    while hi < max_part:
        new_lo = max(1, lo - step) if route == "contour" else lo
        new_hi = hi + step
        new_probs = _pmf_window(k, M, params, new_lo, new_hi, route, quad_tol)
        new_mass = sum(new_probs.values())
        gained = abs(new_mass - mass)
        lo, hi, probs, mass = new_lo, new_hi, new_probs, new_mass
        edge = sum(p for mu, p in probs.items() if mu[0] == hi)
        tail_bound = abs(edge) * r / (1.0 - r)
        if gained < tol / 10.0 and tail_bound < tol / 2.0:
            break
    if abs(mass - 1.0) > tol:
        raise MassDeficitError("top-row pmf mass is off 1 beyond tolerance",
                               {"mass": mass, "k": k, "M": M, "route": route,
                                "window": (lo, hi), "tol": tol})
    atoms = _colex_sorted([mu for mu in probs])
    return TopRowPMF(k=k, M=M, params=params, route=route, window=(lo, hi),
                     atoms=tuple(atoms),
                     probs=tuple(float(probs[a]) for a in atoms))


# ---------------------------------------------------------------------------
# half-strict Gelfand-Tsetlin patterns and the Gibbs conditional


@dataclass(frozen=True)
class HalfStrictGTPattern:
    """Rows mu^1, ..., mu^k; row j strictly increasing of length j, and
    consecutive rows interlace: mu^{j+1}_1 <= mu^j_1 <= mu^{j+1}_2 <= ..."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for j, row in enumerate(self.rows, start=1):
            if len(row) != j:
                raise ValueError(f"row {j} must have {j} entries, got {row}")
            if any(a >= b2 for a, b2 in zip(row, row[1:])):
                raise ValueError(f"row {j} is not strictly increasing: {row}")
        for lower, upper in zip(self.rows, self.rows[1:]):
            for i, x in enumerate(lower):
                if not (upper[i] <= x <= upper[i + 1]):
                    raise ValueError(
                        f"rows {lower} and {upper} do not interlace")

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def top(self) -> tuple[int, ...]:
        return self.rows[-1]


@dataclass(frozen=True)
class GibbsVertexCounts:
    """Vertex-type census (N1..N6) over the window [1, lam_max] x [1, k]."""

    n1: int
    n2: int
    n3: int
    n4: int
    n5: int
    n6: int
    window_cols: int
    window_rows: int

    def __post_init__(self):
        total = self.n1 + self.n2 + self.n3 + self.n4 + self.n5 + self.n6
        if total != self.window_cols * self.window_rows:
            raise ValueError(f"census {total} != window area "
                             f"{self.window_cols * self.window_rows}")

    def as_tuple(self) -> tuple[int, ...]:
        return (self.n1, self.n2, self.n3, self.n4, self.n5, self.n6)


def enumerate_gt_patterns(top_increasing, cap: int = 2_000_000) -> list[HalfStrictGTPattern]:
    """All half-strict patterns with the given (strictly increasing) top row."""
    top = tuple(top_increasing)
    if any(a >= b for a, b in zip(top, top[1:])):
        raise ValueError(f"top row must be strictly increasing, got {top}")

    def shrink(upper: tuple[int, ...]):
        j = len(upper) - 1
        if j == 0:
            yield ()
            return

        def rec(i: int, prev: int, acc: list[int]):
            if i == j:
                yield tuple(acc)
                return
            lo_i = max(upper[i], prev + 1)
            for x in range(lo_i, upper[i + 1] + 1):
                acc.append(x)
                yield from rec(i + 1, x, acc)
                acc.pop()

        yield from rec(0, -10 ** 9, [])

    full: list[HalfStrictGTPattern] = []

    def rec_pattern(rows_desc: list[tuple[int, ...]]):
        if len(full) > cap:
            raise EnumerationCapError(
                f"|GT_lambda| exceeds enumeration cap {cap} for top {top}")
        bottom = rows_desc[-1]
        if len(bottom) == 1:
            full.append(HalfStrictGTPattern(rows=tuple(reversed(rows_desc))))
            return
        for nxt in shrink(bottom):
            rows_desc.append(nxt)
            rec_pattern(rows_desc)
            rows_desc.pop()

    rec_pattern([top])
    return full


def _pattern_row_grid(bottom: tuple[int, ...], top: tuple[int, ...],
                      n_cols: int) -> list[tuple[int, int, int, int]]:
    """Reconstruct one row's vertex types from consecutive sections
    (increasing convention; one path enters from the left)."""
    bset, tset = set(bottom), set(top)
    h = 1
    row = []
    for x in range(n_cols):
        i1 = 1 if x in bset else 0
        i2 = 1 if x in tset else 0
        j2 = i1 + h - i2
        assert j2 in (0, 1), "sections do not interlace"
        row.append((i1, h, i2, j2))
        h = j2
    assert h == 0
    return row


def pattern_to_collection(pattern: HalfStrictGTPattern) -> PathCollection:
    """The configuration corresponding to a pattern (rows are cross-sections)."""
    n_cols = pattern.top[-1] + 2
    rows = []
    prev: tuple[int, ...] = ()
    for row_sec in pattern.rows:
        rows.append(tuple(_pattern_row_grid(prev, row_sec, n_cols)))
        prev = row_sec
    lam_desc = tuple(sorted(pattern.top, reverse=True))
    return PathCollection(family="F", mu=(), lam=lam_desc, n_rows=pattern.k,
                          n_cols=n_cols, rows=tuple(rows))


_TYPE_INDEX = {(0, 0, 0, 0): 0, (1, 1, 1, 1): 1, (1, 0, 1, 0): 2,
               (0, 1, 0, 1): 3, (1, 0, 0, 1): 4, (0, 1, 1, 0): 5}


def gibbs_vertex_counts(pattern: HalfStrictGTPattern) -> GibbsVertexCounts:
    """Census over the stated window [1, lam_max] x [1, k] (column 0 excluded)."""
    lam_max = pattern.top[-1]
    counts = [0] * 6
    prev: tuple[int, ...] = ()
    for row_sec in pattern.rows:
        grid = _pattern_row_grid(prev, row_sec, lam_max + 1)
        for x in range(1, lam_max + 1):
            counts[_TYPE_INDEX[grid[x]]] += 1
        prev = row_sec
    return GibbsVertexCounts(*counts, window_cols=lam_max, window_rows=pattern.k)


def gibbs_pattern_weight(pattern: HalfStrictGTPattern,
                         params: ModelParams) -> float:
    """w1^{N1} ... w6^{N6} over the window."""
    ws = six_vertex_weights(params)
    counts = gibbs_vertex_counts(pattern)
    out = 1.0
    for w_i, n_i in zip(ws, counts.as_tuple()):
        out *= w_i ** n_i
    return out


def conditional_lower_rows_batch(lam, params: ModelParams, count: int,
                                 seed: int | None = None,
                                 rng: np.random.Generator | None = None,
                                 cap: int = 500_000) -> list[HalfStrictGTPattern]:
    """count exact draws of the lower rows given the top row lam (a strict
    signature with smallest part >= 1): enumerate GT_lambda once, weight by
    the six-vertex census, and inverse-CDF sample."""
    lam = as_parts(lam)
    if not all(a > b for a, b in zip(lam, lam[1:])) or lam[-1] < 1:
        raise ValueError(f"top row must be strict with parts >= 1, got {lam}")
    top = tuple(sorted(lam))
    if rng is None:
        rng = np.random.default_rng(seed)
    patterns = enumerate_gt_patterns(top, cap=cap)
    weights = np.array([gibbs_pattern_weight(pat, params) for pat in patterns])
    cdf = np.cumsum(weights)
    idx = np.searchsorted(cdf, rng.random(count) * cdf[-1], side="right")
    idx = np.minimum(idx, len(patterns) - 1)
    return [patterns[i] for i in idx]


def conditional_lower_rows(lam, params: ModelParams, seed: int | None = None,
                           rng: np.random.Generator | None = None,
                           cap: int = 500_000) -> HalfStrictGTPattern:
    """One exact draw of the lower rows given the top row lam."""
    return conditional_lower_rows_batch(lam, params, 1, seed=seed, rng=rng,
                                        cap=cap)[0]


def conditional_k2_weights(params: ModelParams) -> tuple[float, float, float]:
    """Relative Gibbs weights of the middle entry c given a k = 2 top row
    (l1 < l2): (c = l1, interior, c = l2) -> (w2, w5 w6, w3 w4), after
    cancelling the c-independent factors."""
    w1, w2, w3, w4, w5, w6 = six_vertex_weights(params)
    return w2, w5 * w6, w3 * w4


def sample_conditional_k2(tops_desc: np.ndarray, params: ModelParams,
                          rng: np.random.Generator) -> np.ndarray:
    """Vectorized middle-row draws for k = 2 tops (descending pairs lam1 > lam2);
    returns the sampled c with lam2 <= c <= lam1."""
    lam1 = tops_desc[:, 0].astype(np.int64)
    lam2 = tops_desc[:, 1].astype(np.int64)
    w_low, w_mid, w_high = conditional_k2_weights(params)
    gap = lam1 - lam2
    total_low = np.full(len(lam1), w_low)
    total_mid = np.maximum(gap - 1, 0) * w_mid
    total_high = w_high * np.ones(len(lam1))
    total = total_low + total_mid + total_high
    r = rng.random(len(lam1)) * total
    c = np.where(r < total_low, lam2, 0)
    in_mid = (r >= total_low) & (r < total_low + total_mid)
    # uniform over the interior lam2+1 .. lam1-1
    frac = np.zeros_like(r)
    np.divide(r - total_low, np.maximum(total_mid, 1e-300), out=frac,
              where=total_mid > 0)
    mid_val = lam2 + 1 + np.floor(frac * np.maximum(gap - 1, 1)).astype(np.int64)
    mid_val = np.minimum(mid_val, lam1 - 1)
    c = np.where(in_mid, mid_val, c)
    c = np.where(r >= total_low + total_mid, lam1, c)
    return c
