"""Projection-driven decompositions of Q-systems: central, irreducible,
intermediate, plus direct sums and reduced Q-system construction."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .category import CategoryData
from .errors import (
    CategoryMismatchError,
    ConditionError,
    NormalizationError,
    NotProjectionError,
    NotSimpleError,
)
from .frobenius import (
    QSystem,
    check_qsystem,
    hom0_algebra,
    left_endo_algebra,
)
from .morphisms import (
    Morphism,
    ObjectExpr,
    compose,
    endo_power,
    identity,
    inclusion,
    obj_dim,
    range_isometry,
    tensor,
)


@dataclass
class ReducedQSystem:
    parent: QSystem
    projection: Morphism
    isometry: Morphism
    child: QSystem
    n_p: Morphism
    n_p_scalar: bool
    n_p_spectrum: list[float]


def _projection_residual(p: Morphism) -> float:
    return max((compose(p, p) - p).max_abs(), (p - p.adjoint()).max_abs())


def two_to_three_residual(q: QSystem, p: Morphism) -> float:
    """Residual of the compatible-projection relations
    (p x p) o x = (p x 1) o x o p = (1 x p) o x o p."""
    cat = q.cat
    idt = identity(cat, q.theta)
    a = compose(tensor(p, p), q.x)
    b = compose(tensor(p, idt), compose(q.x, p))
    c = compose(tensor(idt, p), compose(q.x, p))
    return max((a - b).max_abs(), (a - c).max_abs(), (b - c).max_abs())


def reduced_qsystem(
    cat: CategoryData,
    q: QSystem,
    p: Morphism,
    tol: float | None = None,
    require_normalized: bool = True,
) -> ReducedQSystem:
    tol = cat.tol if tol is None else tol
    if _projection_residual(p) > 1e2 * tol:
        raise NotProjectionError("p is not an orthogonal projection")
    res23 = two_to_three_residual(q, p)
    if res23 > 1e2 * tol:
        raise ConditionError(f"compatibility relations violated: residual {res23:g}")
    theta_p, s = range_isometry(cat, p)
    w1 = compose(s.adjoint(), q.w)
    x1 = compose(tensor(s.adjoint(), s.adjoint()), compose(q.x, s))
    n_p = compose(x1.adjoint(), x1)
    spectrum: list[float] = []
    for b in n_p.blocks.values():
        if b.size:
            spectrum.extend(np.linalg.eigvalsh((b + b.conj().T) / 2.0).tolist())
    spectrum.sort()
    scalar = bool(spectrum) and (spectrum[-1] - spectrum[0]) < 1e3 * tol
    dim_p = obj_dim(cat, theta_p)
    r = compose(q.x, q.w)
    norm_val = complex(compose(r.adjoint(), compose(tensor(p, p), r)).scalar())
    if require_normalized and abs(norm_val - dim_p) > 1e3 * tol * max(1.0, dim_p):
        raise NormalizationError(
            f"trace normalization fails: r*(PxP)r = {norm_val:g}, dim = {dim_p:g}; "
            f"n_p spectrum {np.round(spectrum, 10).tolist()}"
        )
    n_half = endo_power(n_p, 0.5)
    n_mhalf = endo_power(n_p, -0.5)
    w_p = dim_p ** (-0.25) * compose(n_half, w1)
    x_p = dim_p ** (0.25) * compose(tensor(n_mhalf, n_mhalf), compose(x1, n_half))
    child = QSystem(cat, theta_p, w_p, x_p)
    return ReducedQSystem(
        parent=q,
        projection=p,
        isometry=s,
        child=child,
        n_p=n_p,
        n_p_scalar=scalar,
        n_p_spectrum=spectrum,
    )


def central_decomposition(
    cat: CategoryData, q: QSystem, tol: float | None = None, seed: int | None = None
) -> list[tuple[Morphism, ReducedQSystem]]:
    """Split a Q-system into factor Q-systems along the minimal projections of
    its two-sided centre algebra."""
    alg = hom0_algebra(cat, q, tol)
    kwargs = {} if seed is None else {"seed": seed}
    out = []
    for p in alg.minimal_idempotents(**kwargs):
        out.append((p, reduced_qsystem(cat, q, p, tol)))
    return out


def _pbar_candidates(q: QSystem, p: Morphism) -> list[Morphism]:
    cat = q.cat
    idt = identity(cat, q.theta)
    r = compose(q.x, q.w)
    left = compose(
        tensor(r.adjoint(), idt), compose(tensor(idt, tensor(p, idt)), tensor(idt, r))
    )
    right = compose(
        tensor(idt, r.adjoint()), compose(tensor(tensor(idt, p), idt), tensor(r, idt))
    )
    return [left, right]


def irreducible_decomposition(
    cat: CategoryData, q: QSystem, tol: float | None = None, seed: int | None = None
) -> list[tuple[Morphism, Morphism, Morphism, ReducedQSystem]]:
    """Decompose a simple Q-system into irreducible sub-Q-systems via minimal
    projections p of the left module endomorphism algebra, their rotated
    partners pbar, and the compatible projections P = pbar p."""
    tol = cat.tol if tol is None else tol
    h0 = hom0_algebra(cat, q, tol)
    if h0.dim != 1:
        raise NotSimpleError(f"Q-system is not simple: centre dimension {h0.dim}")
    alg = left_endo_algebra(cat, q, tol)
    kwargs = {} if seed is None else {"seed": seed}
    out = []
    for p in alg.minimal_idempotents(**kwargs):
        pbar = None
        for cand in _pbar_candidates(q, p):
            comm = (compose(cand, p) - compose(p, cand)).max_abs()
            prod = compose(cand, p)
            if comm < 1e2 * tol and _projection_residual(prod) < 1e2 * tol:
                pbar = cand
                break
        if pbar is None:
            raise ConditionError("no commuting rotated partner projection found")
        big_p = compose(pbar, p)
        out.append((p, pbar, big_p, reduced_qsystem(cat, q, big_p, tol)))
    return out


def check_intermediate(
    cat: CategoryData, q: QSystem, p: Morphism, tol: float | None = None
) -> ReducedQSystem:
    """Verify that p cuts out an intermediate Q-system and build it."""
    tol = cat.tol if tol is None else tol
    failed = []
    res23 = two_to_three_residual(q, p)
    if res23 > 1e2 * tol:
        failed.append(f"compatibility (residual {res23:g})")
    res_pw = (compose(p, q.w) - q.w).max_abs()
    if res_pw > 1e2 * tol:
        failed.append(f"unit preservation p w = w (residual {res_pw:g})")
    if failed:
        raise ConditionError("; ".join(failed))
    return reduced_qsystem(cat, q, p, tol, require_normalized=False)


def direct_sum_qsystems(cat: CategoryData, parts: list[QSystem]) -> QSystem:
    """Direct sum of Q-systems: d^2 = sum d_i^2, with the weighted unit and
    multiplication of the summands."""
    for part in parts:
        if part.cat is not cat:
            raise CategoryMismatchError("all parts must live in the same category")
    if len(parts) == 1:
        return parts[0]
    theta = parts[0].theta
    for part in parts[1:]:
        theta = theta.oplus(part.theta)
    d = float(np.sqrt(sum(part.d ** 2 for part in parts)))
    offsets = []
    pos = 0
    for part in parts:
        offsets.append(pos)
        pos += len(part.theta.summands)
    incls = []
    for part, off in zip(parts, offsets):
        s = None
        for k in range(len(part.theta.summands)):
            term = compose(inclusion(cat, theta, off + k), inclusion(cat, part.theta, k).adjoint())
            s = term if s is None else s + term
        incls.append(s)
    w = None
    x = None
    for part, s in zip(parts, incls):
        wi = np.sqrt(part.d / d) * compose(s, part.w)
        xi = np.sqrt(d / part.d) * compose(tensor(s, s), compose(part.x, s.adjoint()))
        w = wi if w is None else w + wi
        x = xi if x is None else x + xi
    return QSystem(cat, theta, w, x)
