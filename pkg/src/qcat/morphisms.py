"""Intertwiners between tensor words of simples as per-sector block matrices.

An ObjectExpr is a formal direct sum of tensor words of simple labels.  A
Morphism stores, for every simple sector c, the matrix of the intertwiner
between the canonical fusion-tree bases (left-nested coupling paths) of its
domain and codomain.  Composition is per-sector matrix product; the monoidal
product is computed through cached F-recoupling unitaries.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .category import CategoryData
from .errors import ConjugacyError, ShapeError, UnknownLabelError

Word = tuple[str, ...]


@dataclass(frozen=True)
class ObjectExpr:
    summands: tuple[Word, ...]

    @staticmethod
    def word(*labels: str) -> "ObjectExpr":
        return ObjectExpr((tuple(labels),))

    @staticmethod
    def from_words(words) -> "ObjectExpr":
        return ObjectExpr(tuple(tuple(w) for w in words))

    @staticmethod
    def unit() -> "ObjectExpr":
        return ObjectExpr(((),))

    @staticmethod
    def zero() -> "ObjectExpr":
        return ObjectExpr(())

    @property
    def is_zero(self) -> bool:
        return not self.summands

    def tensor(self, other: "ObjectExpr") -> "ObjectExpr":
        return ObjectExpr(tuple(w1 + w2 for w1 in self.summands for w2 in other.summands))

    def __matmul__(self, other: "ObjectExpr") -> "ObjectExpr":
        return self.tensor(other)

    def oplus(self, other: "ObjectExpr") -> "ObjectExpr":
        return ObjectExpr(self.summands + other.summands)

    def as_json(self) -> list:
        return [list(w) for w in self.summands]


def conj_word(cat: CategoryData, w: Word) -> Word:
    return tuple(cat.dual[a] for a in reversed(w))


def conj_object(cat: CategoryData, x: ObjectExpr) -> ObjectExpr:
    return ObjectExpr(tuple(conj_word(cat, w) for w in x.summands))


def word_dim(cat: CategoryData, w: Word) -> float:
    d = 1.0
    for a in w:
        d *= cat.dims[a]
    return d


def obj_dim(cat: CategoryData, x: ObjectExpr) -> float:
    return sum(word_dim(cat, w) for w in x.summands)


@dataclass
class Morphism:
    cat: CategoryData
    dom: ObjectExpr
    cod: ObjectExpr
    blocks: dict[str, np.ndarray]

    def block(self, c: str) -> np.ndarray:
        b = self.blocks.get(c)
        if b is not None:
            return b
        eng = engine(self.cat)
        return np.zeros((eng.obj_sector_dim(self.cod, c), eng.obj_sector_dim(self.dom, c)), dtype=complex)

    def adjoint(self) -> "Morphism":
        return Morphism(self.cat, self.cod, self.dom, {c: b.conj().T for c, b in self.blocks.items()})

    @property
    def H(self) -> "Morphism":
        return self.adjoint()

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return compose(self, other)

    def __add__(self, other: "Morphism") -> "Morphism":
        if self.dom != other.dom or self.cod != other.cod:
            raise ShapeError("addition of morphisms with different shapes")
        out = dict(self.blocks)
        for c, b in other.blocks.items():
            out[c] = out[c] + b if c in out else b
        return Morphism(self.cat, self.dom, self.cod, out)

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "Morphism":
        return Morphism(self.cat, self.dom, self.cod, {c: scalar * b for c, b in self.blocks.items()})

    __rmul__ = __mul__

    def norm(self) -> float:
        """Largest operator norm over sectors."""
        out = 0.0
        for b in self.blocks.values():
            if b.size:
                out = max(out, float(np.linalg.norm(b, 2)))
        return out

    def max_abs(self) -> float:
        out = 0.0
        for b in self.blocks.values():
            if b.size:
                out = max(out, float(np.max(np.abs(b))))
        return out

    def scalar(self) -> complex:
        """The coefficient of a morphism 1 -> 1."""
        b = self.blocks.get(self.cat.unit)
        if b is None or b.size == 0:
            return 0.0 + 0.0j
        return complex(b[0, 0])

    def as_json(self) -> dict:
        eng = engine(self.cat)
        blocks = []
        for c in self.cat.labels:
            b = self.blocks.get(c)
            if b is None or b.size == 0:
                continue
            blocks.append(
                {
                    "sector": c,
                    "rows": b.shape[0],
                    "cols": b.shape[1],
                    "re": np.real(b).tolist(),
                    "im": np.imag(b).tolist(),
                }
            )
        return {"dom": self.dom.as_json(), "cod": self.cod.as_json(), "blocks": blocks}


def morphism_from_json(cat: CategoryData, data: dict) -> Morphism:
    dom = ObjectExpr.from_words(data["dom"])
    cod = ObjectExpr.from_words(data["cod"])
    blocks = {}
    for entry in data["blocks"]:
        mat = np.asarray(entry["re"], dtype=float) + 1j * np.asarray(entry["im"], dtype=float)
        blocks[entry["sector"]] = mat.reshape(entry["rows"], entry["cols"])
    return Morphism(cat, dom, cod, blocks)


class Engine:
    """Per-category fusion-tree machinery with recoupling caches."""

    def __init__(self, cat: CategoryData):
        self.cat = cat
        self._trees: dict[tuple[Word, str], list] = {}
        self._tree_index: dict[tuple[Word, str], dict] = {}
        self._split: dict[tuple[Word, Word], dict] = {}
        self._word_braid: dict[tuple[Word, Word, str], Morphism] = {}
        self._word_pair: dict[Word, tuple[Morphism, Morphism]] = {}

    # ---- fusion trees -------------------------------------------------

    def trees(self, w: Word, c: str) -> list:
        key = (w, c)
        got = self._trees.get(key)
        if got is not None:
            return got
        cat = self.cat
        if len(w) == 0:
            out = [()] if c == cat.unit else []
        elif len(w) == 1:
            if w[0] not in cat.dual:
                raise UnknownLabelError(f"unknown label {w[0]!r}")
            out = [()] if c == w[0] else []
        else:
            out = []
            for b in cat.labels:
                sub = self.trees(w[:-1], b)
                if not sub:
                    continue
                m = cat.n(b, w[-1], c)
                for t in sub:
                    for mu in range(m):
                        out.append(t + ((b, mu),))
        self._trees[key] = out
        return out

    def tree_index(self, w: Word, c: str) -> dict:
        key = (w, c)
        got = self._tree_index.get(key)
        if got is None:
            got = {t: i for i, t in enumerate(self.trees(w, c))}
            self._tree_index[key] = got
        return got

    def obj_basis(self, x: ObjectExpr, c: str) -> list:
        return [(i, t) for i, w in enumerate(x.summands) for t in self.trees(w, c)]

    def obj_sector_dim(self, x: ObjectExpr, c: str) -> int:
        return sum(len(self.trees(w, c)) for w in x.summands)

    def obj_offsets(self, x: ObjectExpr, c: str) -> list[int]:
        offs = [0]
        for w in x.summands:
            offs.append(offs[-1] + len(self.trees(w, c)))
        return offs

    def sectors(self, x: ObjectExpr) -> list[str]:
        return [c for c in self.cat.labels if self.obj_sector_dim(x, c)]

    # ---- recoupling ---------------------------------------------------

    def split(self, w1: Word, w2: Word) -> dict:
        """Per sector e: (S, split_list) with |canonical t> = sum_s S[s,t] |split s>.

        The split basis entries are (c, i1, d, i2, mu): tree i1 of w1 at c,
        tree i2 of w2 at d, fusion vertex mu of c x d -> e.
        """
        key = (w1, w2)
        got = self._split.get(key)
        if got is not None:
            return got
        cat = self.cat
        unit = cat.unit
        out: dict[str, tuple[np.ndarray, list]] = {}
        if len(w2) == 0:
            for e in cat.labels:
                n = len(self.trees(w1, e))
                if n:
                    out[e] = (np.eye(n, dtype=complex), [(e, i, unit, 0, 0) for i in range(n)])
        elif len(w1) == 0:
            for e in cat.labels:
                n = len(self.trees(w2, e))
                if n:
                    out[e] = (np.eye(n, dtype=complex), [(unit, 0, e, i, 0) for i in range(n)])
        elif len(w2) == 1:
            a = w2[0]
            w = w1 + w2
            for e in cat.labels:
                can = self.trees(w, e)
                if not can:
                    continue
                split_list = self._enumerate_split(w1, w2, e)
                sidx = {t: i for i, t in enumerate(split_list)}
                s = np.zeros((len(split_list), len(can)), dtype=complex)
                for col, tt in enumerate(can):
                    b, mu = tt[-1]
                    t_pre = tt[:-1]
                    i1 = self.tree_index(w1, b)[t_pre]
                    s[sidx[(b, i1, a, 0, mu)], col] = 1.0
                out[e] = (s, split_list)
        else:
            v, a = w2[:-1], w2[-1]
            prev = self.split(w1, v)
            w = w1 + w2
            wv = w1 + v
            for e in cat.labels:
                can = self.trees(w, e)
                if not can:
                    continue
                split_list = self._enumerate_split(w1, w2, e)
                sidx = {t: i for i, t in enumerate(split_list)}
                s = np.zeros((len(split_list), len(can)), dtype=complex)
                for col, tt in enumerate(can):
                    b, mu = tt[-1]
                    t_pre = tt[:-1]
                    if b not in prev:
                        continue
                    prev_s, prev_list = prev[b]
                    t_pre_idx = self.tree_index(wv, b)[t_pre]
                    for row_idx, (c, i1, dp, i2p, nu) in enumerate(prev_list):
                        coeff = prev_s[row_idx, t_pre_idx]
                        if abs(coeff) < 1e-15:
                            continue
                        fm = cat.fmat(c, dp, a, e)
                        rows = cat.f_rows(c, dp, a, e)
                        cols = cat.f_cols(c, dp, a, e)
                        ri = rows.index((b, nu, mu))
                        t2p = self.trees(v, dp)[i2p]
                        for ci, (dd, sig, tau) in enumerate(cols):
                            val = fm[ri, ci]
                            if abs(val) < 1e-15:
                                continue
                            t2 = t2p + ((dp, sig),)
                            i2 = self.tree_index(w2, dd)[t2]
                            s[sidx[(c, i1, dd, i2, tau)], col] += coeff * val
                out[e] = (s, split_list)
        self._split[key] = out
        return out

    def _enumerate_split(self, w1: Word, w2: Word, e: str) -> list:
        cat = self.cat
        out = []
        for c in cat.labels:
            n1 = len(self.trees(w1, c))
            if not n1:
                continue
            for d in cat.labels:
                n2 = len(self.trees(w2, d))
                if not n2:
                    continue
                m = cat.n(c, d, e)
                if not m:
                    continue
                for i1 in range(n1):
                    for i2 in range(n2):
                        for mu in range(m):
                            out.append((c, i1, d, i2, mu))
        return out


def engine(cat: CategoryData) -> Engine:
    eng = getattr(cat, "_engine", None)
    if eng is None:
        eng = Engine(cat)
        cat._engine = eng
    return eng


# ---- basic constructors ----------------------------------------------


def zero_morphism(cat: CategoryData, dom: ObjectExpr, cod: ObjectExpr) -> Morphism:
    return Morphism(cat, dom, cod, {})


def identity(cat: CategoryData, x: ObjectExpr) -> Morphism:
    eng = engine(cat)
    blocks = {}
    for c in cat.labels:
        n = eng.obj_sector_dim(x, c)
        if n:
            blocks[c] = np.eye(n, dtype=complex)
    return Morphism(cat, x, x, blocks)


def inclusion(cat: CategoryData, x: ObjectExpr, i: int) -> Morphism:
    """The isometry embedding the i-th summand word into x."""
    eng = engine(cat)
    sub = ObjectExpr((x.summands[i],))
    blocks = {}
    for c in cat.labels:
        n_sub = eng.obj_sector_dim(sub, c)
        n = eng.obj_sector_dim(x, c)
        if not n_sub:
            continue
        offs = eng.obj_offsets(x, c)
        b = np.zeros((n, n_sub), dtype=complex)
        b[offs[i] : offs[i] + n_sub, :] = np.eye(n_sub)
        blocks[c] = b
    return Morphism(cat, sub, x, blocks)


def sector_isometry(cat: CategoryData, x: ObjectExpr, c: str, k: int) -> Morphism:
    """The k-th canonical tree isometry Hom(c, x)."""
    eng = engine(cat)
    n = eng.obj_sector_dim(x, c)
    if k >= n:
        raise IndexError(f"sector {c!r} of the object has only {n} trees")
    col = np.zeros((n, 1), dtype=complex)
    col[k, 0] = 1.0
    return Morphism(cat, ObjectExpr.word(c), x, {c: col})


def hom_basis(cat: CategoryData, dom: ObjectExpr, cod: ObjectExpr) -> list[Morphism]:
    """Elementary-matrix basis of the full Hom space, in sector order."""
    eng = engine(cat)
    out = []
    for c in cat.labels:
        nr = eng.obj_sector_dim(cod, c)
        nc = eng.obj_sector_dim(dom, c)
        for i in range(nr):
            for j in range(nc):
                b = np.zeros((nr, nc), dtype=complex)
                b[i, j] = 1.0
                out.append(Morphism(cat, dom, cod, {c: b}))
    return out


def random_morphism(cat: CategoryData, dom: ObjectExpr, cod: ObjectExpr, rng: np.random.Generator) -> Morphism:
    eng = engine(cat)
    blocks = {}
    for c in cat.labels:
        nr = eng.obj_sector_dim(cod, c)
        nc = eng.obj_sector_dim(dom, c)
        if nr and nc:
            blocks[c] = rng.standard_normal((nr, nc)) + 1j * rng.standard_normal((nr, nc))
    return Morphism(cat, dom, cod, blocks)


# ---- composition and monoidal product --------------------------------


def compose(g: Morphism, f: Morphism) -> Morphism:
    if f.cod != g.dom:
        raise ShapeError("compose: codomain/domain mismatch")
    blocks = {}
    for c in set(f.blocks) & set(g.blocks):
        b = g.blocks[c] @ f.blocks[c]
        blocks[c] = b
    return Morphism(f.cat, f.dom, g.cod, blocks)


def tensor(f: Morphism, g: Morphism) -> Morphism:
    cat = f.cat
    eng = engine(cat)
    dom = f.dom @ g.dom
    cod = f.cod @ g.cod
    nd2 = len(g.dom.summands)
    nc2 = len(g.cod.summands)
    blocks: dict[str, np.ndarray] = {}
    for e in cat.labels:
        nrow = eng.obj_sector_dim(cod, e)
        ncol = eng.obj_sector_dim(dom, e)
        if not nrow or not ncol:
            continue
        out = np.zeros((nrow, ncol), dtype=complex)
        cod_offs = eng.obj_offsets(cod, e)
        dom_offs = eng.obj_offsets(dom, e)
        for i, w1d in enumerate(f.dom.summands):
            for j, w2d in enumerate(g.dom.summands):
                di = i * nd2 + j
                if dom_offs[di + 1] == dom_offs[di]:
                    continue
                sp_d = eng.split(w1d, w2d)
                if e not in sp_d:
                    continue
                s_dom, dom_list = sp_d[e]
                for k, w1c in enumerate(f.cod.summands):
                    for l, w2c in enumerate(g.cod.summands):
                        ci = k * nc2 + l
                        if cod_offs[ci + 1] == cod_offs[ci]:
                            continue
                        sp_c = eng.split(w1c, w2c)
                        if e not in sp_c:
                            continue
                        s_cod, cod_list = sp_c[e]
                        m = _split_block(eng, f, g, i, j, k, l, dom_list, cod_list)
                        if m is None:
                            continue
                        sub = s_cod.conj().T @ m @ s_dom
                        out[
                            cod_offs[ci] : cod_offs[ci + 1],
                            dom_offs[di] : dom_offs[di + 1],
                        ] += sub
        blocks[e] = out
    return Morphism(cat, dom, cod, blocks)


def _summand_block(eng: Engine, f: Morphism, i_dom: int, i_cod: int, c: str) -> np.ndarray:
    """The sub-block of f between summand i_dom of dom and i_cod of cod at sector c."""
    b = f.block(c)
    do = eng.obj_offsets(f.dom, c)
    co = eng.obj_offsets(f.cod, c)
    return b[co[i_cod] : co[i_cod + 1], do[i_dom] : do[i_dom + 1]]


def _split_block(eng, f, g, i, j, k, l, dom_list, cod_list):
    """Matrix of f (x) g between split bases, for fixed summand pairs."""
    cat = f.cat
    fsubs = {}
    gsubs = {}
    m = np.zeros((len(cod_list), len(dom_list)), dtype=complex)
    any_nz = False
    dom_groups: dict[tuple, list] = {}
    for idx, (c, i1, d, i2, mu) in enumerate(dom_list):
        dom_groups.setdefault((c, d, mu), []).append((idx, i1, i2))
    for idx2, (c, i1p, d, i2p, mu) in enumerate(cod_list):
        grp = dom_groups.get((c, d, mu))
        if not grp:
            continue
        if c not in fsubs:
            fsubs[c] = _summand_block(eng, f, i, k, c)
        if d not in gsubs:
            gsubs[d] = _summand_block(eng, g, j, l, d)
        fb = fsubs[c]
        gb = gsubs[d]
        if fb.size == 0 or gb.size == 0:
            continue
        for idx, i1, i2 in grp:
            v = fb[i1p, i1] * gb[i2p, i2]
            if v:
                m[idx2, idx] = v
                any_nz = True
    return m if any_nz else None


# ---- braiding --------------------------------------------------------


def _word_obj(w: Word) -> ObjectExpr:
    return ObjectExpr((w,))


def word_braiding(cat: CategoryData, u: Word, v: Word, sign: str) -> Morphism:
    eng = engine(cat)
    key = (u, v, sign)
    got = eng._word_braid.get(key)
    if got is not None:
        return got
    if len(u) == 0 or len(v) == 0:
        out = identity(cat, _word_obj(u + v))
    elif len(u) == 1 and len(v) == 1:
        a, b = u[0], v[0]
        blocks = {}
        for e in cat.labels:
            if sign == "+":
                rm = cat.rmat(a, b, e)
            else:
                rm = cat.rmat(b, a, e).conj().T
            if rm.size:
                blocks[e] = rm
        out = Morphism(cat, _word_obj((a, b)), _word_obj((b, a)), blocks)
    elif len(v) > 1:
        v1, b = v[:-1], (v[-1],)
        e1 = tensor(word_braiding(cat, u, v1, sign), identity(cat, _word_obj(b)))
        e2 = tensor(identity(cat, _word_obj(v1)), word_braiding(cat, u, b, sign))
        out = compose(e2, e1)
    else:
        u1, a = u[:-1], (u[-1],)
        e1 = tensor(identity(cat, _word_obj(u1)), word_braiding(cat, a, v, sign))
        e2 = tensor(word_braiding(cat, u1, v, sign), identity(cat, _word_obj(a)))
        out = compose(e2, e1)
    eng._word_braid[key] = out
    return out


def braiding(cat: CategoryData, x: ObjectExpr, y: ObjectExpr, sign: str = "+") -> Morphism:
    """The braiding x (x) y -> y (x) x; sign '-' gives the opposite braiding."""
    eng = engine(cat)
    dom = x @ y
    cod = y @ x
    ny = len(y.summands)
    nx = len(x.summands)
    blocks: dict[str, np.ndarray] = {}
    for e in cat.labels:
        nrow = eng.obj_sector_dim(cod, e)
        ncol = eng.obj_sector_dim(dom, e)
        if not nrow or not ncol:
            continue
        out = np.zeros((nrow, ncol), dtype=complex)
        do = eng.obj_offsets(dom, e)
        co = eng.obj_offsets(cod, e)
        for i, u in enumerate(x.summands):
            for j, v in enumerate(y.summands):
                di = i * ny + j
                ci = j * nx + i
                wb = word_braiding(cat, u, v, sign)
                b = wb.blocks.get(e)
                if b is None or b.size == 0:
                    continue
                out[co[ci] : co[ci + 1], do[di] : do[di + 1]] = b
        blocks[e] = out
    return Morphism(cat, dom, cod, blocks)


# ---- standard pairs, traces, rotations -------------------------------


@dataclass
class StandardPair:
    obj: ObjectExpr
    conj: ObjectExpr
    r: Morphism
    rbar: Morphism

    @property
    def dim(self) -> float:
        return float(np.real((self.r.adjoint() @ self.r).scalar()))


def _word_pair(cat: CategoryData, w: Word) -> tuple[Morphism, Morphism]:
    eng = engine(cat)
    got = eng._word_pair.get(w)
    if got is not None:
        return got
    unit_obj = ObjectExpr.unit()
    if len(w) == 0:
        r = identity(cat, unit_obj)
        rbar = identity(cat, unit_obj)
    elif len(w) == 1:
        a = w[0]
        abar = cat.dual[a]
        d = cat.dims[a]
        r = Morphism(cat, unit_obj, _word_obj((abar, a)), {cat.unit: np.array([[np.sqrt(d)]], dtype=complex)})
        rbar0 = Morphism(cat, unit_obj, _word_obj((a, abar)), {cat.unit: np.array([[np.sqrt(d)]], dtype=complex)})
        ida = identity(cat, _word_obj((a,)))
        zig = compose(tensor(ida, r.adjoint()), tensor(rbar0, ida))
        zeta = complex(zig.blocks[a][0, 0])
        if abs(zeta) < 1e-12:
            raise ConjugacyError(f"zig-zag vanishes for label {a!r}")
        phi = 1.0 / zeta
        if abs(abs(phi) - 1.0) > 1e2 * cat.tol:
            raise ConjugacyError(f"no unimodular conjugacy phase for {a!r}: |phi| = {abs(phi)}")
        rbar = phi * rbar0
        idab = identity(cat, _word_obj((abar,)))
        zig2 = compose(tensor(r.adjoint(), idab), tensor(idab, rbar))
        if (zig2 - idab).max_abs() > 1e2 * cat.tol:
            raise ConjugacyError(f"conjugacy relations unsolvable for {a!r}")
    else:
        v, a = w[:-1], (w[-1],)
        rv, rvbar = _word_pair(cat, v)
        ra, rabar = _word_pair(cat, a)
        abar_obj = _word_obj(conj_word(cat, a))
        vbar_obj = _word_obj(conj_word(cat, v))
        r = compose(tensor(tensor(identity(cat, abar_obj), rv), identity(cat, _word_obj(a))), ra)
        rbar = compose(tensor(tensor(identity(cat, _word_obj(v)), rabar), identity(cat, vbar_obj)), rvbar)
    eng._word_pair[w] = (r, rbar)
    return r, rbar


def standard_pair(cat: CategoryData, x: ObjectExpr) -> StandardPair:
    xbar = conj_object(cat, x)
    unit_obj = ObjectExpr.unit()
    r = zero_morphism(cat, unit_obj, xbar @ x)
    rbar = zero_morphism(cat, unit_obj, x @ xbar)
    for i, w in enumerate(x.summands):
        rw, rwbar = _word_pair(cat, w)
        inc = inclusion(cat, x, i)
        inc_bar = inclusion(cat, xbar, i)
        r = r + compose(tensor(inc_bar, inc), rw)
        rbar = rbar + compose(tensor(inc, inc_bar), rwbar)
    return StandardPair(obj=x, conj=xbar, r=r, rbar=rbar)


def left_trace(cat: CategoryData, f: Morphism, x: ObjectExpr, rest_dom: ObjectExpr, rest_cod: ObjectExpr) -> Morphism:
    """Partial trace over the left factor x of f in Hom(x rest_dom, x rest_cod)."""
    pair = standard_pair(cat, x)
    idb = identity(cat, rest_dom)
    idc = identity(cat, rest_cod)
    idxbar = identity(cat, pair.conj)
    return compose(
        tensor(pair.r.adjoint(), idc),
        compose(tensor(idxbar, f), tensor(pair.r, idb)),
    )


def right_trace(cat: CategoryData, f: Morphism, x: ObjectExpr, rest_dom: ObjectExpr, rest_cod: ObjectExpr) -> Morphism:
    """Partial trace over the right factor x of f in Hom(rest_dom x, rest_cod x)."""
    pair = standard_pair(cat, x)
    idb = identity(cat, rest_dom)
    idc = identity(cat, rest_cod)
    idxbar = identity(cat, pair.conj)
    return compose(
        tensor(idc, pair.rbar.adjoint()),
        compose(tensor(f, idxbar), tensor(idb, pair.rbar)),
    )


def trace(cat: CategoryData, f: Morphism) -> complex:
    """Scalar trace of an endomorphism, via the standard pair of its object."""
    if f.dom != f.cod:
        raise ShapeError("trace requires an endomorphism")
    u = ObjectExpr.unit()
    return left_trace(cat, f, f.dom, u, u).scalar()


def frobenius_rotate(
    f: Morphism,
    pair: StandardPair,
    side: str,
    direction: str,
    rest_dom: ObjectExpr,
    rest_cod: ObjectExpr,
) -> Morphism:
    """The four Frobenius conjugation maps w.r.t. a (standard) pair.

    left/down:  Hom(g2, obj g1)   -> Hom(conj g2, g1)
    left/up:    Hom(conj g2, g1)  -> Hom(g2, obj g1)
    right/down: Hom(g2, g1 obj)   -> Hom(g2 conj, g1)
    right/up:   Hom(g2 conj, g1)  -> Hom(g2, g1 obj)

    Here g2 = rest_dom and g1 = rest_cod of the *input* map f.
    """
    cat = f.cat
    id1 = identity(cat, rest_cod)
    id2 = identity(cat, rest_dom)
    if side == "left" and direction == "down":
        return compose(tensor(pair.r.adjoint(), id1), tensor(identity(cat, pair.conj), f))
    if side == "left" and direction == "up":
        return compose(tensor(identity(cat, pair.obj), f), tensor(pair.rbar, id2))
    if side == "right" and direction == "down":
        return compose(tensor(id1, pair.rbar.adjoint()), tensor(f, identity(cat, pair.conj)))
    if side == "right" and direction == "up":
        return compose(tensor(f, identity(cat, pair.obj)), tensor(id2, pair.r))
    raise ShapeError(f"unknown rotation {side}/{direction}")


# ---- numeric helpers on endomorphisms --------------------------------


def endo_function(f: Morphism, fn) -> Morphism:
    """Apply a real spectral function to a self-adjoint endomorphism."""
    blocks = {}
    for c, b in f.blocks.items():
        if b.size == 0:
            continue
        vals, vecs = np.linalg.eigh((b + b.conj().T) / 2.0)
        blocks[c] = vecs @ np.diag(fn(vals)) @ vecs.conj().T
    return Morphism(f.cat, f.dom, f.cod, blocks)


def endo_power(f: Morphism, p: float, floor: float = 1e-12) -> Morphism:
    def fn(vals):
        out = np.zeros_like(vals)
        mask = vals > floor
        out[mask] = vals[mask] ** p
        return out

    return endo_function(f, fn)


def range_isometry(cat: CategoryData, p: Morphism, cut: float = 0.5) -> tuple[ObjectExpr, Morphism]:
    """Split a projection p = s s*: returns (range object, isometry s).

    The range object is a sum of single-letter words, one per unit of rank,
    in sector label order.
    """
    eng = engine(cat)
    words = []
    cols: dict[str, np.ndarray] = {}
    for c in cat.labels:
        b = p.blocks.get(c)
        if b is None or b.size == 0:
            continue
        vals, vecs = np.linalg.eigh((b + b.conj().T) / 2.0)
        order = np.argsort(-vals)
        vals = vals[order]
        vecs = vecs[:, order]
        rank = int(np.sum(vals > cut))
        if rank:
            words.extend([(c,)] * rank)
            cols[c] = vecs[:, :rank]
    sub = ObjectExpr.from_words(words)
    blocks = {}
    for c in cat.labels:
        if c in cols:
            blocks[c] = cols[c]
    s = Morphism(cat, sub, p.dom, blocks)
    return sub, s
