"""Q-systems: axiom checks, normalization, commutativity, and the finite
dimensional algebras (module endomorphisms, relative commutant) attached to them."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .category import CategoryData
from .errors import (
    NonStandardizableError,
    NotFrobeniusError,
    ShapeError,
)
from .morphisms import (
    Morphism,
    ObjectExpr,
    braiding,
    compose,
    conj_object,
    endo_power,
    engine,
    hom_basis,
    identity,
    morphism_from_json,
    obj_dim,
    random_morphism,
    tensor,
    zero_morphism,
)

DEFAULT_SEED = 0xC0FFEE


@dataclass
class QSystem:
    cat: CategoryData
    theta: ObjectExpr
    w: Morphism
    x: Morphism

    @property
    def d(self) -> float:
        return float(np.sqrt(obj_dim(self.cat, self.theta)))

    @property
    def r(self) -> Morphism:
        """The canonical self-conjugate pair vector r = x o w in Hom(1, theta^2)."""
        return compose(self.x, self.w)


@dataclass
class AxiomReport:
    unit: float
    associativity: float
    frobenius: float
    special: float
    standard_w: float
    standard_x: float
    d: float
    tol: float

    @property
    def unit_ok(self) -> bool:
        return self.unit < self.tol

    @property
    def associativity_ok(self) -> bool:
        return self.associativity < self.tol

    @property
    def frobenius_ok(self) -> bool:
        return self.frobenius < self.tol

    @property
    def special_ok(self) -> bool:
        return self.special < self.tol

    @property
    def standard_ok(self) -> bool:
        return max(self.standard_w, self.standard_x) < self.tol

    @property
    def ok(self) -> bool:
        return (
            self.unit_ok
            and self.associativity_ok
            and self.frobenius_ok
            and self.special_ok
            and self.standard_ok
        )

    def as_dict(self) -> dict:
        return {
            "unit": self.unit,
            "associativity": self.associativity,
            "frobenius": self.frobenius,
            "special": self.special,
            "standard_w": self.standard_w,
            "standard_x": self.standard_x,
            "d": self.d,
            "ok": self.ok,
        }


def _check_shapes(q: QSystem) -> None:
    if q.w.dom != ObjectExpr.unit() or q.w.cod != q.theta:
        raise ShapeError("w must lie in Hom(1, theta)")
    if q.x.dom != q.theta or q.x.cod != q.theta @ q.theta:
        raise ShapeError("x must lie in Hom(theta, theta^2)")


def check_qsystem(cat: CategoryData, q: QSystem, tol: float | None = None) -> AxiomReport:
    _check_shapes(q)
    tol = cat.tol if tol is None else tol
    theta = q.theta
    idt = identity(cat, theta)
    w, x = q.w, q.x
    unit_l = (compose(tensor(w.adjoint(), idt), x) - idt).max_abs()
    unit_r = (compose(tensor(idt, w.adjoint()), x) - idt).max_abs()
    asso = (compose(tensor(x, idt), x) - compose(tensor(idt, x), x)).max_abs()
    xxs = compose(x, x.adjoint())
    frob_l = (compose(tensor(idt, x.adjoint()), tensor(x, idt)) - xxs).max_abs()
    frob_r = (compose(tensor(x.adjoint(), idt), tensor(idt, x)) - xxs).max_abs()
    n = compose(x.adjoint(), x)
    lam = _mean_eigen(n)
    special = (n - lam * idt).max_abs()
    d = q.d
    standard_w = abs(complex(compose(w.adjoint(), w).scalar()) - d)
    standard_x = (n - d * idt).max_abs()
    return AxiomReport(
        unit=max(unit_l, unit_r),
        associativity=asso,
        frobenius=max(frob_l, frob_r),
        special=special,
        standard_w=standard_w,
        standard_x=standard_x,
        d=d,
        tol=tol,
    )


def _mean_eigen(f: Morphism) -> complex:
    num = 0.0 + 0.0j
    den = 0
    for b in f.blocks.values():
        num += np.trace(b)
        den += b.shape[0]
    eng = engine(f.cat)
    total = sum(eng.obj_sector_dim(f.dom, c) for c in f.cat.labels)
    return num / total if total else 0.0


def check_commutative(cat: CategoryData, q: QSystem, sign: str = "+") -> tuple[bool, float]:
    eps = braiding(cat, q.theta, q.theta, sign)
    res = (compose(eps, q.x) - q.x).max_abs()
    return res < cat.tol, float(res)


def make_special_standard(cat: CategoryData, q: QSystem, tol: float | None = None) -> QSystem:
    """Normalize a C* Frobenius triple to the special standard form."""
    tol = cat.tol if tol is None else tol
    rep = check_qsystem(cat, q, tol)
    if max(rep.unit, rep.associativity, rep.frobenius) > 1e2 * tol:
        raise NotFrobeniusError("triple is not a C* Frobenius algebra")
    n = compose(q.x.adjoint(), q.x)
    n_half = endo_power(n, 0.5)
    n_mhalf = endo_power(n, -0.5)
    dimth = obj_dim(cat, q.theta)
    w1 = dimth ** (-0.25) * compose(n_half, q.w)
    x1 = dimth ** (0.25) * compose(tensor(n_mhalf, n_mhalf), compose(q.x, n_half))
    out = QSystem(cat, q.theta, w1, x1)
    rep2 = check_qsystem(cat, out, tol)
    if rep2.special > 1e2 * tol:
        raise NonStandardizableError("specialness cannot be reached by the n-deformation")
    if rep2.standard_w > 1e2 * tol or rep2.standard_x > 1e2 * tol:
        raise NonStandardizableError(
            f"standardness norms mismatch: w {rep2.standard_w}, x {rep2.standard_x}"
        )
    return out


@dataclass
class Diverged:
    spectrum: list[float]
    iterations: int


def iterate_specialize(
    cat: CategoryData,
    q: QSystem,
    max_iter: int = 200,
    scale: float | None = None,
    tol: float | None = None,
):
    """Run the specialization recursion m_{k+1} = x* (m_k x m_k) x.

    Starting from a multiple of the identity; if the limit is invertible,
    deform by its square root and normalize.  Returns a QSystem or Diverged.
    """
    tol = cat.tol if tol is None else tol
    idt = identity(cat, q.theta)
    m = (scale if scale is not None else 1.0 / q.d) * idt

    def step(g: Morphism) -> Morphism:
        return compose(q.x.adjoint(), compose(tensor(g, g), q.x))

    def hs_norm(g: Morphism) -> float:
        return float(np.sqrt(sum(np.sum(np.abs(b) ** 2) for b in g.blocks.values())))

    # the scalar direction of the quadratic map is unstable, so iterate the
    # normalized direction and put the scale back at the end
    m = (1.0 / hs_norm(m)) * m
    it = 0
    for it in range(max_iter):
        m_next = step(m)
        nn = hs_norm(m_next)
        if nn < 1e-300:
            return Diverged(spectrum=[], iterations=it + 1)
        m_next = (1.0 / nn) * m_next
        delta = (m_next - m).max_abs()
        m = m_next
        if delta < tol:
            break
    fm = step(m)
    c = sum(np.vdot(m.block(ch), fm.block(ch)) for ch in cat.labels if m.blocks.get(ch) is not None)
    c = np.real(c) / max(hs_norm(m) ** 2, 1e-300)
    if abs(c) < 1e3 * tol:
        return Diverged(spectrum=[], iterations=it + 1)
    m = (1.0 / c) * m
    eigs: list[float] = []
    for b in m.blocks.values():
        eigs.extend(np.linalg.eigvalsh((b + b.conj().T) / 2.0).tolist())
    if not eigs or min(eigs) < 1e3 * tol:
        return Diverged(spectrum=sorted(eigs), iterations=it + 1)
    n = endo_power(m, 0.5)
    n_inv = endo_power(m, -0.5)
    w1 = compose(n_inv, q.w)
    x1 = compose(tensor(n, n), compose(q.x, n_inv))
    # fix the two scalar normalizations
    d = q.d
    nw = complex(compose(w1.adjoint(), w1).scalar())
    alpha = np.sqrt(d / np.real(nw))
    w1 = alpha * w1
    nx = _mean_eigen(compose(x1.adjoint(), x1))
    beta = np.sqrt(d / np.real(nx))
    x1 = beta * x1
    out = QSystem(cat, q.theta, w1, x1)
    return out


# ---- linear solving of morphism spaces -------------------------------


def morphism_vector(f: Morphism) -> np.ndarray:
    eng = engine(f.cat)
    parts = []
    for c in f.cat.labels:
        nr = eng.obj_sector_dim(f.cod, c)
        nc = eng.obj_sector_dim(f.dom, c)
        if nr and nc:
            parts.append(f.block(c).reshape(-1))
    if not parts:
        return np.zeros(0, dtype=complex)
    return np.concatenate(parts)


def solve_morphism_space(
    cat: CategoryData,
    dom: ObjectExpr,
    cod: ObjectExpr,
    conditions,
    tol: float | None = None,
) -> list[Morphism]:
    """Orthonormal basis of {t in Hom(dom, cod): cond(t) = 0 for all conditions}.

    Each condition maps a Morphism linearly to a Morphism; solved by SVD
    thresholding.
    """
    tol = cat.tol if tol is None else tol
    basis = hom_basis(cat, dom, cod)
    if not basis:
        return []
    cols = []
    for b in basis:
        out = [morphism_vector(cond(b)) for cond in conditions]
        cols.append(np.concatenate(out) if out else np.zeros(0, dtype=complex))
    a = np.stack(cols, axis=1) if cols[0].size else np.zeros((1, len(basis)), dtype=complex)
    u, s, vh = np.linalg.svd(a)
    thresh = max(tol, (s[0] * 1e-10 if s.size else 0.0))
    rank = int(np.sum(s > thresh))
    null = vh[rank:].conj().T
    out = []
    for k in range(null.shape[1]):
        f = zero_morphism(cat, dom, cod)
        for i, b in enumerate(basis):
            coef = null[i, k]
            if abs(coef) > 1e-14:
                f = f + coef * b
        out.append(f)
    return out


# ---- finite dimensional algebras -------------------------------------


@dataclass
class AlgebraPresentation:
    """A finite dimensional *-algebra given by a concrete basis, a bilinear
    product, an antilinear star, and its unit element."""

    cat: CategoryData
    basis: list
    product: object
    star: object
    unit_element: Morphism
    central_flags: list[bool] | None = None
    _mult: np.ndarray | None = field(default=None, repr=False)
    _star: np.ndarray | None = field(default=None, repr=False)
    _gram_pinv: np.ndarray | None = field(default=None, repr=False)
    _vecs: np.ndarray | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _ensure_tables(self) -> None:
        if self._mult is not None:
            return
        vecs = np.stack([morphism_vector(b) for b in self.basis], axis=1)
        self._vecs = vecs
        self._gram_pinv = np.linalg.pinv(vecs)
        n = self.dim
        mult = np.zeros((n, n, n), dtype=complex)
        star = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                mult[:, i, j] = self.coeffs(self.product(self.basis[i], self.basis[j]))
            star[:, i] = self.coeffs(self.star(self.basis[i]))
        self._mult = mult
        self._star = star

    def coeffs(self, f: Morphism) -> np.ndarray:
        if self._gram_pinv is None:
            vecs = np.stack([morphism_vector(b) for b in self.basis], axis=1)
            self._vecs = vecs
            self._gram_pinv = np.linalg.pinv(vecs)
        return self._gram_pinv @ morphism_vector(f)

    def element(self, coeffs: np.ndarray) -> Morphism:
        f = zero_morphism(self.cat, self.basis[0].dom, self.basis[0].cod)
        for i, b in enumerate(self.basis):
            if abs(coeffs[i]) > 1e-14:
                f = f + coeffs[i] * b
        return f

    def multiply(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        self._ensure_tables()
        return np.einsum("kij,i,j->k", self._mult, u, v)

    def star_coeffs(self, u: np.ndarray) -> np.ndarray:
        self._ensure_tables()
        return self._star @ np.conj(u)

    def unit_coeffs(self) -> np.ndarray:
        return self.coeffs(self.unit_element)

    def left_mult(self, u: np.ndarray) -> np.ndarray:
        self._ensure_tables()
        return np.einsum("kij,i->kj", self._mult, u)

    def centre_coeff_basis(self) -> list[np.ndarray]:
        self._ensure_tables()
        n = self.dim
        rows = []
        for j in range(n):
            # [z, b_j] = 0 as a linear condition on the coefficients of z
            rows.append(self._mult[:, :, j] - self._mult[:, j, :])
        a = np.concatenate(rows, axis=0)
        u, s, vh = np.linalg.svd(a)
        thresh = max(1e-9, (s[0] * 1e-10 if s.size else 0.0))
        rank = int(np.sum(s > thresh))
        return [vh[k].conj() for k in range(rank, vh.shape[0])]

    def random_selfadjoint(self, rng: np.random.Generator, sub_basis=None) -> np.ndarray:
        self._ensure_tables()
        vs = sub_basis if sub_basis is not None else [np.eye(self.dim)[i] for i in range(self.dim)]
        u = np.zeros(self.dim, dtype=complex)
        for v in vs:
            u = u + (rng.standard_normal() + 1j * rng.standard_normal()) * v
        return u + self.star_coeffs(u)

    def spectral_idempotents(self, h: np.ndarray, cluster_tol: float = 1e-6) -> list[np.ndarray]:
        """Spectral idempotents of an element via its left regular representation."""
        self._ensure_tables()
        lh = self.left_mult(h)
        eigs = np.linalg.eigvals(lh)
        clusters: list[list[complex]] = []
        for lam in sorted(eigs, key=lambda z: (np.real(z), np.imag(z))):
            if clusters and abs(lam - np.mean(clusters[-1])) < cluster_tol:
                clusters[-1].append(lam)
            else:
                clusters.append([lam])
        reps = [complex(np.mean(c)) for c in clusters]
        e = self.unit_coeffs()
        out = []
        for i, lam in enumerate(reps):
            p = e.copy()
            for j, mu in enumerate(reps):
                if i == j:
                    continue
                p = self.multiply(p, (h - mu * e) / (lam - mu))
            out.append(p)
        return out

    def minimal_idempotents(self, seed: int = DEFAULT_SEED, cluster_tol: float = 1e-6) -> list[Morphism]:
        """Minimal idempotents, via a seeded random central element followed by
        a seeded random corner split.  Self-adjoint for a C* star."""
        self._ensure_tables()
        rng = np.random.default_rng(seed)
        centre = self.centre_coeff_basis()
        z = self.random_selfadjoint(rng, centre)
        central = [p for p in self.spectral_idempotents(z, cluster_tol) if np.linalg.norm(p) > 1e-8]
        out = []
        for ce in central:
            h0 = self.random_selfadjoint(rng)
            h = self.multiply(ce, self.multiply(h0, ce))
            h = (h + self.star_coeffs(h)) / 2.0
            for p in self.spectral_idempotents(h, cluster_tol):
                q = self.multiply(ce, self.multiply(p, ce))
                if np.linalg.norm(q) > 1e-8:
                    out.append(q)
        return [self.element(p) for p in out]


def _compose_product(a: Morphism, b: Morphism) -> Morphism:
    return compose(a, b)


def _adjoint_star(a: Morphism) -> Morphism:
    return a.adjoint()


def hom0_algebra(cat: CategoryData, q: QSystem, tol: float | None = None) -> AlgebraPresentation:
    """The algebra {t in Hom(theta,theta): (1 x t) x = x t = (t x 1) x}."""
    idt = identity(cat, q.theta)
    conds = [
        lambda t: compose(tensor(idt, t), q.x) - compose(q.x, t),
        lambda t: compose(tensor(t, idt), q.x) - compose(q.x, t),
    ]
    basis = solve_morphism_space(cat, q.theta, q.theta, conds, tol)
    return AlgebraPresentation(
        cat=cat,
        basis=basis,
        product=_compose_product,
        star=_adjoint_star,
        unit_element=idt,
    )


def left_endo_algebra(cat: CategoryData, q: QSystem, tol: float | None = None) -> AlgebraPresentation:
    """The algebra {t in Hom(theta,theta): (1 x t) x = x t} of left module
    endomorphisms of the Q-system over itself."""
    idt = identity(cat, q.theta)
    conds = [lambda t: compose(tensor(idt, t), q.x) - compose(q.x, t)]
    basis = solve_morphism_space(cat, q.theta, q.theta, conds, tol)
    return AlgebraPresentation(
        cat=cat,
        basis=basis,
        product=_compose_product,
        star=_adjoint_star,
        unit_element=idt,
    )


def relative_commutant_algebra(cat: CategoryData, q: QSystem, tol: float | None = None) -> AlgebraPresentation:
    """Hom(theta, 1) with the convolution product q1*q2 = (q1 x q2) o x and
    the star q -> adjoint((1 x q) o x o w); flags the central elements."""
    tol = cat.tol if tol is None else tol
    unit_obj = ObjectExpr.unit()
    basis = hom_basis(cat, q.theta, unit_obj)
    idt = identity(cat, q.theta)

    def product(q1: Morphism, q2: Morphism) -> Morphism:
        return compose(tensor(q1, q2), q.x)

    def star(qq: Morphism) -> Morphism:
        return compose(tensor(idt, qq), compose(q.x, q.w)).adjoint()

    unit = q.w.adjoint()
    flags = []
    for b in basis:
        lhs = compose(tensor(b, idt), q.x)
        rhs = compose(tensor(idt, b), q.x)
        flags.append((lhs - rhs).max_abs() < 1e2 * tol)
    return AlgebraPresentation(
        cat=cat,
        basis=basis,
        product=product,
        star=star,
        unit_element=unit,
        central_flags=flags,
    )


# ---- constructors ----------------------------------------------------


def trivial_qsystem_in(cat: CategoryData) -> QSystem:
    u = ObjectExpr.unit()
    return QSystem(cat, u, identity(cat, u), identity(cat, u))


def matrix_qsystem(cat: CategoryData, iota: ObjectExpr) -> QSystem:
    """The full matrix algebra Q-system of an object: theta = iota (x) conj(iota),
    w = rbar_iota, x = 1 x r_iota x 1."""
    from .morphisms import standard_pair

    pair = standard_pair(cat, iota)
    theta = iota @ pair.conj
    w = pair.rbar
    x = tensor(tensor(identity(cat, iota), pair.r), identity(cat, pair.conj))
    return QSystem(cat, theta, w, x)


def ising_q(cat: CategoryData) -> QSystem:
    return matrix_qsystem(cat, ObjectExpr.word("sig"))


def qsystem_as_json(q: QSystem, category_ref: str = "") -> dict:
    return {
        "category_ref": category_ref,
        "theta": q.theta.as_json(),
        "w": q.w.as_json(),
        "x": q.x.as_json(),
    }


def qsystem_from_json(cat: CategoryData, data: dict) -> QSystem:
    builder = data.get("builder")
    if builder == "ising_q":
        return ising_q(cat)
    if builder == "trivial_q":
        return trivial_qsystem_in(cat)
    theta = ObjectExpr.from_words(data["theta"])
    w = morphism_from_json(cat, data["w"])
    x = morphism_from_json(cat, data["x"])
    return QSystem(cat, theta, w, x)


def qsystems_equivalent(cat: CategoryData, q1: QSystem, q2: QSystem, tol: float | None = None) -> bool:
    """Unitary equivalence: u theta1 -> theta2 with u w1 = w2, (u x u) x1 u* = x2.

    Least-squares solve for u followed by a unitarity polish; accepted at
    10 x tol residual.
    """
    tol = cat.tol if tol is None else tol
    eng = engine(cat)
    for c in cat.labels:
        if eng.obj_sector_dim(q1.theta, c) != eng.obj_sector_dim(q2.theta, c):
            return False
    basis = hom_basis(cat, q1.theta, q2.theta)
    if not basis:
        return q1.theta.is_zero and q2.theta.is_zero
    conds = [
        lambda u: compose(u, q1.w) - q2.w,
        lambda u: compose(tensor(u, u), q1.x) - compose(q2.x, u),
    ]
    # the second condition is quadratic in u; iterate a linearization from a
    # seeded start, polishing to a unitary every round
    rng = np.random.default_rng(DEFAULT_SEED)
    for _attempt in range(8):
        u = _polish_unitary(random_morphism(cat, q1.theta, q2.theta, rng))
        for _ in range(200):
            residual = max((cond(u)).max_abs() for cond in conds)
            if residual < 10 * tol:
                return True
            cols = []
            rhs_parts = [
                morphism_vector(q2.w),
                morphism_vector(compose(q2.x, u))
                + morphism_vector(compose(tensor(u, u), q1.x)),
            ]
            for b in basis:
                vec = np.concatenate(
                    [
                        morphism_vector(compose(b, q1.w)),
                        morphism_vector(compose(tensor(b, u), q1.x))
                        + morphism_vector(compose(tensor(u, b), q1.x)),
                    ]
                )
                cols.append(vec)
            a = np.stack(cols, axis=1)
            rhs = np.concatenate(rhs_parts)
            sol, *_ = np.linalg.lstsq(a, rhs, rcond=None)
            new_u = zero_morphism(cat, q1.theta, q2.theta)
            for i, b in enumerate(basis):
                if abs(sol[i]) > 1e-14:
                    new_u = new_u + sol[i] * b
            # damp far from a solution, take full Newton-like steps once close
            if residual > 1e-2:
                u = _polish_unitary(0.5 * (new_u + u))
            else:
                u = _polish_unitary(new_u)
        if max((cond(u)).max_abs() for cond in conds) < 10 * tol:
            return True
    return False


def _polish_unitary(f: Morphism) -> Morphism:
    blocks = {}
    for c, b in f.blocks.items():
        if b.size == 0 or b.shape[0] != b.shape[1]:
            blocks[c] = b
            continue
        uu, _, vvh = np.linalg.svd(b)
        blocks[c] = uu @ vvh
    return Morphism(f.cat, f.dom, f.cod, blocks)
