"""Braiding-dependent constructions: braided products, left and right centres,
the canonical Q-system of a rational category, full centres, and Z-matrices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .category import CategoryData, deligne_product, modular_data, pair_label, split_label
from .errors import (
    CategoryMismatchError,
    NotModularError,
    RoundingError,
)
from .decompose import ReducedQSystem, check_intermediate
from .frobenius import QSystem, check_commutative
from .morphisms import (
    Morphism,
    ObjectExpr,
    braiding,
    compose,
    engine,
    hom_basis,
    identity,
    inclusion,
    right_trace,
    standard_pair,
    tensor,
    zero_morphism,
)


def braided_product(cat: CategoryData, qa: QSystem, qb: QSystem, sign: str = "+") -> QSystem:
    """The product Q-system on theta_A theta_B with the braiding inserted."""
    if qa.cat is not cat or qb.cat is not cat:
        raise CategoryMismatchError("factors must live in the given category")
    theta = qa.theta @ qb.theta
    w = tensor(qa.w, qb.w)
    eps = braiding(cat, qa.theta, qb.theta, sign)
    ida = identity(cat, qa.theta)
    idb = identity(cat, qb.theta)
    x = compose(tensor(tensor(ida, eps), idb), tensor(qa.x, qb.x))
    return QSystem(cat, theta, w, x)


@dataclass
class CentreProjections:
    pplus: Morphism
    pminus: Morphism


def centre_projections(cat: CategoryData, q: QSystem) -> CentreProjections:
    """The left and right centre projections P+- = d^-1 (r* x 1)(1 x eps+-)(x x 1)x."""
    idt = identity(cat, q.theta)
    r = compose(q.x, q.w)
    out = {}
    for sign in ("+", "-"):
        eps = braiding(cat, q.theta, q.theta, sign)
        qp = compose(
            tensor(r.adjoint(), idt),
            compose(tensor(idt, eps), compose(tensor(q.x, idt), q.x)),
        )
        out[sign] = (1.0 / q.d) * qp
    return CentreProjections(pplus=out["+"], pminus=out["-"])


def centre_qsystem(cat: CategoryData, q: QSystem, side: str = "+", tol: float | None = None) -> ReducedQSystem:
    """The maximal commutative intermediate Q-system cut out by P+ or P-."""
    cp = centre_projections(cat, q)
    p = cp.pplus if side == "+" else cp.pminus
    return check_intermediate(cat, q, p, tol)


# ---- the canonical Q-system in C x C^opp -----------------------------


def embed_left(cat: CategoryData, prod: CategoryData, q: QSystem) -> QSystem:
    """Carry a Q-system of C into C x C^opp along a -> (a, unit)."""
    unit2 = cat.unit
    return QSystem(
        prod,
        _embed_obj(cat, prod, q.theta),
        _embed_morphism(cat, prod, q.w),
        _embed_morphism(cat, prod, q.x),
    )


def _embed_obj(cat: CategoryData, prod: CategoryData, x: ObjectExpr) -> ObjectExpr:
    unit2 = cat.unit
    return ObjectExpr.from_words(
        [tuple(pair_label(a, unit2) for a in w) for w in x.summands]
    )


def _embed_morphism(cat: CategoryData, prod: CategoryData, f: Morphism) -> Morphism:
    unit2 = cat.unit
    blocks = {pair_label(c, unit2): b for c, b in f.blocks.items()}
    return Morphism(prod, _embed_obj(cat, prod, f.dom), _embed_obj(cat, prod, f.cod), blocks)


def opposite_product_category(cat: CategoryData) -> CategoryData:
    """C x C^opp, cached on the category."""
    prod = getattr(cat, "_opp_product", None)
    if prod is None:
        prod = deligne_product(cat, cat, reverse_right=True)
        cat._opp_product = prod
    return prod


def _conj_hom_matrix(cat: CategoryData, rho: str, sigma: str, tau: str, sign: str = "-") -> np.ndarray:
    """Matrix of the antiunitary map Hom(tau, rho sigma) -> Hom(taubar, rhobar sigmabar)
    realized by entrywise conjugation followed by Frobenius rotation, unitarized."""
    rb, sb, tb = cat.dual[rho], cat.dual[sigma], cat.dual[tau]
    dom = ObjectExpr.word(tau)
    cod = ObjectExpr.word(rho, sigma)
    dom_c = ObjectExpr.word(tb)
    cod_c = ObjectExpr.word(rb, sb)
    basis = hom_basis(cat, dom, cod)
    basis_c = hom_basis(cat, dom_c, cod_c)
    n = len(basis)
    if n == 0:
        return np.zeros((0, 0))
    pair_w = standard_pair(cat, cod)          # conj = (sigmabar rhobar)
    pair_t = standard_pair(cat, dom)          # conj = taubar
    id_c = identity(cat, pair_w.conj)
    eps = braiding(cat, ObjectExpr.word(sb), ObjectExpr.word(rb), sign)
    mat = np.zeros((len(basis_c), n), dtype=complex)
    for mu, t in enumerate(basis):
        tc = Morphism(cat, t.dom, t.cod, {c: np.conj(b) for c, b in t.blocks.items()})
        g = compose(tensor(id_c, tc.adjoint()), pair_w.r)      # Hom(1, sb rb tau)
        rot0 = compose(
            tensor(id_c, pair_t.rbar.adjoint()),
            tensor(g, identity(cat, pair_t.conj)),
        )                                                       # Hom(taubar, sb rb)
        rot = compose(eps, rot0)                                # Hom(taubar, rb sb)
        for nu, b in enumerate(basis_c):
            num = 0.0 + 0.0j
            den = 0.0
            for c in rot.blocks:
                num += np.vdot(b.block(c), rot.block(c))
                den += np.sum(np.abs(b.block(c)) ** 2)
            mat[nu, mu] = num / den if den else 0.0
    u, _, vh = np.linalg.svd(mat)
    return u @ vh


def canonical_qsystem(cat: CategoryData) -> tuple[CategoryData, QSystem]:
    """The canonical commutative Q-system R in C x C^opp with
    Theta = sum_rho (rho, rhobar) and d_R = dim(C)^(1/2)."""
    cached = getattr(cat, "_canonical_q", None)
    if cached is not None:
        return cached
    prod = opposite_product_category(cat)
    words = [(pair_label(a, cat.dual[a]),) for a in cat.labels]
    theta = ObjectExpr.from_words(words)
    d_r = float(np.sqrt(cat.global_dim))
    unit_idx = cat.labels.index(cat.unit)
    pu = pair_label(cat.unit, cat.unit)
    unit_iso = Morphism(
        prod, ObjectExpr.unit(), ObjectExpr.word(pu), {pu: np.ones((1, 1), dtype=complex)}
    )
    w = np.sqrt(d_r) * compose(inclusion(prod, theta, unit_idx), unit_iso)
    x = zero_morphism(prod, theta, theta @ theta)
    for it, tau in enumerate(cat.labels):
        t_tau = inclusion(prod, theta, it)
        for ir, rho in enumerate(cat.labels):
            for isg, sigma in enumerate(cat.labels):
                n_mult = cat.n(rho, sigma, tau)
                if n_mult == 0:
                    continue
                u_mat = _conj_hom_matrix(cat, rho, sigma, tau)
                t_r = inclusion(prod, theta, ir)
                t_s = inclusion(prod, theta, isg)
                pr, ps, pt = (
                    pair_label(rho, cat.dual[rho]),
                    pair_label(sigma, cat.dual[sigma]),
                    pair_label(tau, cat.dual[tau]),
                )
                dom = ObjectExpr.word(pt)
                cod = ObjectExpr.word(pr, ps)
                n2 = cat.n(cat.dual[rho], cat.dual[sigma], cat.dual[tau])
                col = np.zeros((n_mult * n2, 1), dtype=complex)
                for mu in range(n_mult):
                    for nu in range(n2):
                        col[mu * n2 + nu, 0] = u_mat[nu, mu]
                e = Morphism(prod, dom, cod, {pt: col})
                coeff = np.sqrt(cat.dims[rho] * cat.dims[sigma] / cat.dims[tau]) / np.sqrt(d_r)
                x = x + coeff * compose(tensor(t_r, t_s), compose(e, t_tau.adjoint()))
    q = QSystem(prod, theta, w, x)
    cat._canonical_q = (prod, q)
    return prod, q


def full_centre(cat: CategoryData, q: QSystem, tol: float | None = None) -> tuple[CategoryData, ReducedQSystem]:
    """Z[A] = left centre of (A x 1) x+ R inside C x C^opp."""
    prod, qr = canonical_qsystem(cat)
    qa1 = embed_left(cat, prod, q)
    bp = braided_product(prod, qa1, qr, "+")
    return prod, centre_qsystem(prod, bp, "+", tol)


def z_matrix(cat: CategoryData, q: QSystem, tol: float | None = None) -> tuple[np.ndarray, dict]:
    """The modular invariant matrix: Z[rho, sigma] = multiplicity of
    (rho, sigmabar) in the full centre of the Q-system."""
    tol = cat.tol if tol is None else tol
    md = modular_data(cat)
    if not md.is_modular:
        raise NotModularError("Z-matrix requires a modular category")
    prod, rz = full_centre(cat, q, tol)
    n = len(cat.labels)
    z = np.zeros((n, n), dtype=int)
    for word in rz.child.theta.summands:
        if len(word) != 1:
            raise RoundingError(f"full-centre object contains a non-simple word {word}")
        a, b = split_label(word[0])
        z[cat.labels.index(a), cat.labels.index(cat.dual[b])] += 1
    s, t = md.s_matrix, md.t_matrix
    res_s = float(np.abs(z @ s - s @ z).max())
    res_t = float(np.abs(z @ t - t @ z).max())
    info = {"s_commutator": res_s, "t_commutator": res_t, "z11": int(z[0, 0])}
    return z, info


def killing_check(cat: CategoryData, tol: float | None = None) -> dict:
    """Partial trace of the monodromy of each (rho, 1) around the canonical
    object: annihilates every rho except the unit, where it gives dim(C)."""
    tol = cat.tol if tol is None else tol
    prod, qr = canonical_qsystem(cat)
    out = {}
    for a in cat.labels:
        obj = ObjectExpr.word(pair_label(a, cat.unit))
        mono = compose(
            braiding(prod, qr.theta, obj, "+"), braiding(prod, obj, qr.theta, "+")
        )
        k = right_trace(prod, mono, qr.theta, obj, obj)
        target = cat.global_dim if a == cat.unit else 0.0
        val = complex(k.scalar()) if a == cat.unit else complex(
            np.max(np.abs(np.concatenate([b.reshape(-1) for b in k.blocks.values()])))
            if k.blocks
            else 0.0
        )
        out[a] = {"value": val, "target": target, "ok": abs(val - target) < 1e3 * tol}
    return out
