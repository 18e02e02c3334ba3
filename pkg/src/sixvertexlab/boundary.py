"""The boundary weight function f(lambda; v, rho) and contour evaluators.

Two independent routes are provided.  The direct route evaluates

    f(lambda; v, rho) = (-1)^k (q; q)_k  sum_nu  prod_j (-s)^{nu_j}
                                         G^c_{lambda/nu}(v, ..., v)

with nu running over signatures with distinct parts >= 1 (everything else
contributes 0); the sum is pushed through the conjugated row transfer by
linearity, which prunes structurally-zero skew terms early.  The contour
route evaluates the k-fold integral

    f = c(lambda) (q;q)_k  oint..oint  prod_{a<b} (u_a - u_b)/(u_a - q u_b)
        prod_i [ 1/(-s (1 - s u_i)) ((1 - s u_i)/(u_i - s))^{lambda_i} ]
        prod_{i,j} (1 - q u_i v_j)/(1 - u_i v_j)  du_i/(2 pi I)

over a zero-centered circle of radius R in (s, min v_j^{-1}), by
tensor-product periodic-trapezoid quadrature with adaptive node doubling.
The same engine evaluates the analogous integral for G^c_lambda.

Both integrals are real for real inputs by conjugation symmetry of the
integrand over the circle; the real part is taken only after asserting the
imaginary residue is small.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import ModelParams, as_parts, q_pochhammer
from .symfunc import TransferRow, _rank_filter
from .weights import conjugation_factor


class QuadratureError(RuntimeError):
    """Raised when adaptive quadrature fails to converge; carries diagnostics."""

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(f"{message}: {diagnostics}")
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class CircleContour:
    """Zero-centered positively oriented circle with an initial node count."""

    radius: float
    nodes: int = 64

    def __post_init__(self):
        if self.radius <= 0 or self.nodes < 4:
            raise ValueError(f"invalid contour: {self}")


def default_radius(params: ModelParams, v_values) -> float:
    """Midpoint of the admissible band (s, min |v|^{-1}), maximizing distance
    to both pole families."""
    v_values = tuple(abs(v) for v in v_values)
    hi = min(1.0 / v for v in v_values)
    if hi <= params.s:
        raise ValueError(f"no admissible radius: s = {params.s}, min 1/|v| = {hi}")
    return 0.5 * (params.s + hi)


def _check_radius(R: float, params: ModelParams, v_values) -> None:
    hi = min(1.0 / abs(v) for v in v_values)
    if not (params.s < R < hi):
        raise ValueError(f"radius {R} outside admissible band ({params.s}, {hi})")


def _tensor_circle_integral(phi_rows: np.ndarray, R: float, q: float) -> complex:
    """oint..oint prod_{a<b} (u_a-u_b)/(u_a-q u_b) prod_i phi_i(u_i) du_i/(2 pi I)
    with phi_i sampled on the circle nodes (phi_rows[i, node])."""
    k, n = phi_rows.shape
    z = R * np.exp(2j * np.pi * np.arange(n) / n)
    base = phi_rows * (z / n)  # quadrature weight du/(2 pi I) = z/n per node
    if k == 1:
        return complex(base[0].sum())
    kern = (z[:, None] - z[None, :]) / (z[:, None] - q * z[None, :])
    if k == 2:
        return complex(base[0] @ kern @ base[1])
    if k == 3:
        return complex(np.einsum("i,j,k,ij,ik,jk->", base[0], base[1], base[2],
                                 kern, kern, kern, optimize=True))
    raise ValueError(f"circle quadrature supports k <= 3, got k = {k}")


def _adaptive_circle(phi_maker, k: int, R: float, q: float, contour: CircleContour,
                     tol: float, max_nodes: int) -> complex:
    n = contour.nodes
    prev = None
    while n <= max_nodes:
        z = R * np.exp(2j * np.pi * np.arange(n) / n)
        est = _tensor_circle_integral(phi_maker(z), R, q)
        if prev is not None:
            rel = abs(est - prev) / max(abs(est), 1e-300)
            if rel < tol:
                return est
        prev = est
        n *= 2
    rel = abs(est - prev) / max(abs(est), 1e-300) if prev is not None else float("inf")
    raise QuadratureError("circle quadrature did not converge",
                          {"nodes": n // 2, "estimate": repr(est),
                           "prev_estimate": repr(prev), "rel_change": rel})


def Gc_contour(lam, v_values, params: ModelParams, contour: CircleContour | None = None,
               tol: float = 1e-9, max_nodes: int = 1 << 14) -> complex:
    """G^c_lambda(v_1..v_N) for lam with lam_k >= 1, by the k-fold large-circle
    integral; independent of the transfer evaluators."""
    lam = as_parts(lam)
    v_values = tuple(v_values)
    k = len(lam)
    if k == 0 or lam[-1] < 1:
        raise ValueError(f"contour formula requires lam_k >= 1, got {lam}")
    if len(v_values) < k:
        raise ValueError(f"need at least k = {k} spectral values")
    s, q = params.s, params.q
    if max(abs(v) for v in v_values) >= 1.0 / s:
        raise ValueError("all |v_i| must be below 1/s")
    if contour is None:
        contour = CircleContour(default_radius(params, v_values))
    _check_radius(contour.radius, params, v_values)

    def phi(z: np.ndarray) -> np.ndarray:
        col = np.ones_like(z)
        for v in v_values:
            col = col * (1.0 - q * z * v) / (1.0 - z * v)
        ratio = (1.0 - s * z) / (z - s)
        base = col / ((1.0 - s * z) * (z - s))
        return np.stack([base * ratio ** p for p in lam])

    val = _adaptive_circle(phi, k, contour.radius, q, contour, tol, max_nodes)
    return complex(val) * conjugation_factor(lam, params) * q_pochhammer(q, q, k)


def f_contour(lam, v: float, M: int, params: ModelParams,
              contour: CircleContour | None = None, tol: float = 1e-9,
              max_nodes: int = 1 << 14) -> float:
    """f(lambda; [v]^M, rho) by the k-fold circle integral (lam_k >= 1)."""
    lam = as_parts(lam)
    k = len(lam)
    if k == 0 or lam[-1] < 1:
        raise ValueError(f"contour formula requires lam_k >= 1, got {lam}")
    if any(a == b for a, b in zip(lam, lam[1:])):
        return 0.0  # c(lambda) vanishes
    s, q = params.s, params.q
    if not (0 < v < 1.0 / s):
        raise ValueError(f"need v in (0, 1/s), got {v}")
    if contour is None:
        contour = CircleContour(default_radius(params, (v,)))
    _check_radius(contour.radius, params, (v,))

    def phi(z: np.ndarray) -> np.ndarray:
        col = ((1.0 - q * z * v) / (1.0 - z * v)) ** M
        ratio = (1.0 - s * z) / (z - s)
        base = col / (-s * (1.0 - s * z))
        return np.stack([base * ratio ** p for p in lam])

    val = _adaptive_circle(phi, k, contour.radius, q, contour, tol, max_nodes)
    val = complex(val) * conjugation_factor(lam, params) * q_pochhammer(q, q, k)
    if abs(val.imag) > tol * max(1.0, abs(val.real)):
        raise QuadratureError("f contour integral has a non-real residue",
                              {"estimate": repr(val), "tol": tol})
    return val.real


def _strict_below(lam: tuple[int, ...]):
    """Distinct-part nu with nu_i in [1, lam_i] rank-wise (the support of the
    boundary sum inside lam)."""
    k = len(lam)

    def rec(i: int, hi: int, acc: list[int]):
        if i == k:
            yield tuple(acc)
            return
        top = min(hi, lam[i])
        for p in range(top, 0, -1):
            acc.append(p)
            yield from rec(i + 1, p - 1, acc)
            acc.pop()

    yield from rec(0, lam[0] if lam else 0, [])


def f_direct(lam, v: float, M: int, params: ModelParams) -> float:
    """f(lambda; [v]^M, rho) by the boundary sum over distinct nu >= 1.

    Returns 0 for lam with a zero part or a repeated part.  The nu-sum is
    evaluated by linearity through M conjugated transfer rows, restricted to
    nu contained in lam (all other skew terms vanish).
    """
    lam = as_parts(lam)
    k = len(lam)
    if k == 0:
        return 1.0
    if lam[-1] <= 0 or any(a == b for a, b in zip(lam, lam[1:])):
        return 0.0
    s, q = params.q ** -0.5, params.q
    states: dict[tuple[int, ...], complex] = {}
    for nu in _strict_below(lam):
        states[nu] = (-s) ** sum(nu)
    row = TransferRow(params, v, conjugated=True, left_entry=False)
    for _ in range(M):
        states = row.apply(states, lam[0])
        states = _rank_filter(states, lam, 0, False)
    val = states.get(lam, 0.0)
    out = (-1.0) ** k * q_pochhammer(q, q, k) * val
    return complex(out).real


def f_direct_batch(k: int, max_part: int, v: float, M: int,
                   params: ModelParams) -> dict[tuple[int, ...], float]:
    """f(lambda; [v]^M, rho) for every strict lambda of length k with parts in
    [1, max_part], from a single forward pass of the boundary sum."""
    s, q = params.s, params.q
    states: dict[tuple[int, ...], complex] = {}
    for combo in combinations(range(max_part, 0, -1), k):
        states[combo] = (-s) ** sum(combo)
    row = TransferRow(params, v, conjugated=True, left_entry=False)
    for _ in range(M):
        states = row.apply(states, max_part)
    pref = (-1.0) ** k * q_pochhammer(q, q, k)
    out: dict[tuple[int, ...], float] = {}
    for sig, val in states.items():
        if all(a > b for a, b in zip(sig, sig[1:])) and sig[-1] >= 1:
            out[sig] = complex(pref * val).real
    return out
