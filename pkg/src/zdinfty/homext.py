"""Hom and Ext spaces with explicit bases, composition, trace, pairings.

Morphisms between torsion-free parts are constant block-diagonal matrices
preserving the lattice filtrations; the restriction functor forgets the block
constraint.  Ext between lattices is the cokernel of projecting the
restricted Hom onto its off-diagonal blocks; Ext out of a torsion summand is
computed against the divisible cokernel of the target's injective
resolution, which degreewise is the quotient of the target's module piece at
the summand's death degree by the x-power image of its birth degree.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import (
    ComposabilityError,
    NotLatticeMorphism,
    ShapeMismatch,
    ZdinftyError,
)
from .fields import check_same_field
from .lattice import adapted_coords
from .objects import CObject, TorsionPart, serre_twist


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class Morphism:
    """A map in the category, stored blockwise.

    a00/a11: constant matrices on the two ambient coordinate types; tt: the
    degreewise torsion-to-torsion matrices (one per degree where source and
    target torsion are both alive); ft: for each adapted lattice generator of
    the source, its image among the target torsion slots at the generator's
    jump.  The torsion-to-lattice component is always zero.
    """

    src: CObject
    dst: CObject
    a00: tuple
    a11: tuple
    tt: tuple  # ((degree, matrix), ...) over the canonical shared degrees
    ft: tuple  # per src lattice generator: vector over dst torsion slots

    def full_matrix(self) -> tuple:
        F = self.src.field
        p, q = self.src.p, self.src.q
        pp, qq = self.dst.p, self.dst.q
        rows = []
        for i in range(pp):
            rows.append(tuple(self.a00[i]) + tuple(F.zero for _ in range(q)))
        for i in range(qq):
            rows.append(tuple(F.zero for _ in range(p)) + tuple(self.a11[i]))
        return tuple(rows)

    def tt_at(self, d: int) -> tuple:
        for deg, mat in self.tt:
            if deg == d:
                return mat
        return linalg.zeros(
            self.src.field, self.dst.torsion.dim_at(d), self.src.torsion.dim_at(d)
        )

    def is_zero(self) -> bool:
        F = self.src.field
        for block in (self.a00, self.a11):
            for row in block:
                if any(not F.is_zero(c) for c in row):
                    return False
        for _, mat in self.tt:
            for row in mat:
                if any(not F.is_zero(c) for c in row):
                    return False
        for vec in self.ft:
            if any(not F.is_zero(c) for c in vec):
                return False
        return True


def morphism_vector(m: Morphism) -> tuple:
    """Flatten a morphism to coordinates (fixed order for a given src/dst)."""
    out = []
    for block in (m.a00, m.a11):
        for row in block:
            out.extend(row)
    for _, mat in m.tt:
        for row in mat:
            out.extend(row)
    for vec in m.ft:
        out.extend(vec)
    return tuple(out)


def _tt_degrees(X: CObject, Y: CObject) -> tuple:
    ds = []
    lo_x = X.torsion.min_degree()
    if lo_x is None or Y.torsion.min_degree() is None:
        return ()
    for d in range(lo_x, X.torsion.max_degree() + 1):
        if X.torsion.dim_at(d) > 0 and Y.torsion.dim_at(d) > 0:
            ds.append(d)
    return tuple(ds)


def identity_morphism(X: CObject) -> Morphism:
    F = X.field
    tt = tuple((d, linalg.identity(F, X.torsion.dim_at(d))) for d in _tt_degrees(X, X))
    ft = tuple(
        tuple(F.zero for _ in X.torsion.slots_at(jump))
        for jump, _ in X.lattice.generators()
    )
    return Morphism(X, X, linalg.identity(F, X.p), linalg.identity(F, X.q), tt, ft)


def morphism_from_parts(X: CObject, Y: CObject, a00, a11, tt_by_degree=None, ft=None) -> Morphism:
    F = X.field
    tt_by_degree = tt_by_degree or {}
    tt = tuple(
        (
            d,
            tt_by_degree.get(
                d, linalg.zeros(F, Y.torsion.dim_at(d), X.torsion.dim_at(d))
            ),
        )
        for d in _tt_degrees(X, Y)
    )
    if ft is None:
        ft = tuple(
            tuple(F.zero for _ in Y.torsion.slots_at(jump))
            for jump, _ in X.lattice.generators()
        )
    return Morphism(X, Y, tuple(map(tuple, a00)), tuple(map(tuple, a11)), tt, tuple(map(tuple, ft)))


def add_morphisms(f: Morphism, g: Morphism) -> Morphism:
    if f.src != g.src or f.dst != g.dst:
        raise ComposabilityError("morphism sum needs equal endpoints")
    F = f.src.field
    tt = {d: linalg.mat_add(F, f.tt_at(d), g.tt_at(d)) for d in _tt_degrees(f.src, f.dst)}
    ft = tuple(linalg.vec_add(F, u, v) for u, v in zip(f.ft, g.ft))
    return morphism_from_parts(
        f.src,
        f.dst,
        linalg.mat_add(F, f.a00, g.a00),
        linalg.mat_add(F, f.a11, g.a11),
        tt,
        ft,
    )


def scale_morphism(c, f: Morphism) -> Morphism:
    F = f.src.field
    tt = {d: linalg.mat_scale(F, c, f.tt_at(d)) for d in _tt_degrees(f.src, f.dst)}
    ft = tuple(linalg.vec_scale(F, c, v) for v in f.ft)
    return morphism_from_parts(
        f.src,
        f.dst,
        linalg.mat_scale(F, c, f.a00),
        linalg.mat_scale(F, c, f.a11),
        tt,
        ft,
    )


def compose(g: Morphism, f: Morphism) -> Morphism:
    """g after f."""
    if f.dst != g.src:
        raise ComposabilityError("endpoints do not match for composition")
    F = f.src.field
    X, Y, Z = f.src, f.dst, g.dst
    a00 = linalg.mm(F, g.a00, f.a00, Y.p, X.p)
    a11 = linalg.mm(F, g.a11, f.a11, Y.q, X.q)
    tt = {
        d: linalg.mm(F, g.tt_at(d), f.tt_at(d), Y.torsion.dim_at(d), X.torsion.dim_at(d))
        for d in _tt_degrees(X, Z)
    }
    ft = []
    y_gens = Y.lattice.generators()
    full_f = f.full_matrix()
    for j, (e, dir) in enumerate(X.lattice.generators()):
        vec = list(linalg.mat_vec(F, g.tt_at(e), f.ft[j]))
        if not vec:
            vec = [F.zero] * Z.torsion.dim_at(e)
        w = linalg.mat_vec(F, full_f, dir)
        gamma = adapted_coords(Y.lattice, w, e)
        if gamma is None:
            raise NotLatticeMorphism("composition source map does not preserve the lattice")
        for t, (et, _) in enumerate(y_gens):
            c = gamma[t]
            if F.is_zero(c):
                continue
            moved = linalg.mat_vec(F, Z.torsion.xpower(F, et, e), g.ft[t])
            for s in range(len(vec)):
                vec[s] = F.add(vec[s], F.mul(c, moved[s]))
        ft.append(tuple(vec))
    return morphism_from_parts(X, Z, a00, a11, tt, tuple(ft))


def sum_inclusion(big: CObject, factor: CObject, embed, tmap) -> Morphism:
    """Inclusion of one direct summand, from the embedding data."""
    F = big.field
    a00 = tuple(tuple(embed[i][k] for k in range(factor.p)) for i in range(big.p))
    a11 = tuple(
        tuple(embed[big.p + i][factor.p + k] for k in range(factor.q))
        for i in range(big.q)
    )
    tt = {}
    lo = factor.torsion.min_degree()
    if lo is not None:
        for d in range(lo, factor.torsion.max_degree() + 1):
            rows = []
            fslots = factor.torsion.slots_at(d)
            for i in big.torsion.slots_at(d):
                row = [F.zero] * len(fslots)
                for col, fs in enumerate(fslots):
                    if tmap[fs] == i:
                        row[col] = F.one
                rows.append(tuple(row))
            tt[d] = tuple(rows)
    return morphism_from_parts(factor, big, a00, a11, tt)


def sum_projection(big: CObject, factor: CObject, embed, tmap) -> Morphism:
    """Projection of a direct sum onto one summand."""
    F = big.field
    a_full = linalg.transpose(embed)
    a00 = tuple(tuple(a_full[i][k] for k in range(big.p)) for i in range(factor.p))
    a11 = tuple(
        tuple(a_full[factor.p + i][big.p + k] for k in range(big.q))
        for i in range(factor.q)
    )
    tt = {}
    lo = factor.torsion.min_degree()
    if lo is not None:
        for d in range(lo, factor.torsion.max_degree() + 1):
            rows = []
            for i in factor.torsion.slots_at(d):
                row = [F.zero] * big.torsion.dim_at(d)
                row[big.torsion.slots_at(d).index(tmap[i])] = F.one
                rows.append(tuple(row))
            tt[d] = tuple(rows)
    return morphism_from_parts(big, factor, a00, a11, tt)


def serre_twist_morphism(f: Morphism) -> Morphism:
    """The twist applied to a morphism: swap the blocks, shift the rest."""
    F = f.src.field
    X, Y = f.src, f.dst
    VX, VY = serre_twist(X), serre_twist(Y)
    tt = {d: f.tt_at(d - 1) for d in _tt_degrees(VX, VY)}
    p = X.p
    ft = []
    for ep, dirp in VX.lattice.generators():
        # undo the coordinate swap and the shift to land back in X
        dir = tuple(dirp[VX.p + i] if i < p else dirp[i - p] for i in range(X.rank))
        gamma = adapted_coords(X.lattice, dir, ep - 1)
        if gamma is None:
            raise ZdinftyError("twisted generator escapes the original lattice")
        vec = [F.zero] * VY.torsion.dim_at(ep)
        for j, (e_j, _) in enumerate(X.lattice.generators()):
            c = gamma[j]
            if F.is_zero(c):
                continue
            moved = linalg.mat_vec(F, Y.torsion.xpower(F, e_j, ep - 1), f.ft[j])
            for s in range(len(vec)):
                vec[s] = F.add(vec[s], F.mul(c, moved[s]))
        ft.append(tuple(vec))
    return morphism_from_parts(VX, VY, f.a11, f.a00, tt, tuple(ft))


def serre_twist_class(c: ExtClass) -> "ExtClass":
    """The twist applied to an extension class.

    Off-diagonal blocks swap; torsion representatives are transported through
    the coordinate swap and re-expressed in the twisted adapted basis.
    """
    F = c.src.field
    X, Y = c.src, c.dst
    VX, VY = serre_twist(X), serre_twist(Y)
    tor = []
    y_gens = Y.lattice.generators()
    for i, (n, a) in enumerate(X.torsion.summands):
        h = n - a
        slots = Y.module_slots_at(h)
        amb = [F.zero] * Y.rank
        tcoeffs = {}
        for pos, lab in enumerate(slots):
            coeff = c.tor[i][pos]
            if lab[0] == "F":
                _, dir = y_gens[lab[1]]
                for t in range(Y.rank):
                    amb[t] = F.add(amb[t], F.mul(coeff, dir[t]))
            else:
                tcoeffs[lab[1]] = coeff
        swapped = tuple(
            amb[Y.p + t] if t < Y.q else amb[t - Y.q] for t in range(Y.rank)
        )
        gamma = adapted_coords(VY.lattice, swapped, h + 1)
        if gamma is None:
            raise ZdinftyError("twisted representative escapes the filtration")
        vec = []
        for lab in VY.module_slots_at(h + 1):
            if lab[0] == "F":
                vec.append(gamma[lab[1]])
            else:
                vec.append(tcoeffs.get(lab[1], F.zero))
        tor.append(tuple(vec))
    return ext_space(VX, VY).reduce(c.h10, c.h01, tuple(tor))


def module_xpower(Y: CObject, d_from: int, d_to: int) -> tuple:
    """Multiplication by x^(d_to-d_from) on the module slots of Y."""
    F = Y.field
    src = Y.module_slots_at(d_from)
    dst = Y.module_slots_at(d_to)
    pos = {lab: k for k, lab in enumerate(dst)}
    tor = Y.torsion.xpower(F, d_from, d_to)
    tor_src = Y.torsion.slots_at(d_from)
    tor_dst = Y.torsion.slots_at(d_to)
    rows = [[F.zero] * len(src) for _ in dst]
    for col, lab in enumerate(src):
        kind, idx = lab
        if kind == "F":
            rows[pos[lab]][col] = F.one
        else:
            scol = tor_src.index(idx)
            for srow, tidx in enumerate(tor_dst):
                c = tor[srow][scol]
                if not F.is_zero(c):
                    rows[pos[("T", tidx)]][col] = c
    return tuple(tuple(r) for r in rows)


def morphism_degreewise(m: Morphism, d: int) -> tuple:
    """Matrix of the morphism on the degree-d module slots."""
    F = m.src.field
    X, Y = m.src, m.dst
    src = X.module_slots_at(d)
    dst = Y.module_slots_at(d)
    pos = {lab: k for k, lab in enumerate(dst)}
    rows = [[F.zero] * len(src) for _ in dst]
    full = m.full_matrix()
    x_gens = X.lattice.generators()
    tt = m.tt_at(d)
    t_src = X.torsion.slots_at(d)
    t_dst = Y.torsion.slots_at(d)
    for col, lab in enumerate(src):
        kind, idx = lab
        if kind == "F":
            e, dir = x_gens[idx]
            w = linalg.mat_vec(F, full, dir)
            gamma = adapted_coords(Y.lattice, w, d)
            if gamma is None:
                raise NotLatticeMorphism("morphism does not preserve the lattice")
            for t, c in enumerate(gamma):
                if not F.is_zero(c):
                    rows[pos[("F", t)]][col] = c
            moved = linalg.mat_vec(F, Y.torsion.xpower(F, e, d), m.ft[idx])
            for srow, tidx in enumerate(t_dst):
                c = moved[srow]
                if not F.is_zero(c):
                    rows[pos[("T", tidx)]][col] = F.add(rows[pos[("T", tidx)]][col], c)
        else:
            scol = t_src.index(idx)
            for srow, tidx in enumerate(t_dst):
                c = tt[srow][scol]
                if not F.is_zero(c):
                    rows[pos[("T", tidx)]][col] = c
    return tuple(tuple(r) for r in rows)


def validate_morphism(m: Morphism) -> None:
    """Raise unless the stored data is an actual morphism."""
    F = m.src.field
    full = m.full_matrix()
    from .lattice import GradedVector, membership

    for e, dir in m.src.lattice.generators():
        w = linalg.mat_vec(F, full, dir)
        if not membership(m.dst.lattice, GradedVector(e, w)):
            raise NotLatticeMorphism("block matrix does not preserve the filtration")
    lo = m.src.torsion.min_degree()
    if lo is not None:
        hi = m.src.torsion.max_degree()
        for d in range(lo, hi + 1):
            lhs = linalg.mat_mul(F, m.dst.torsion.xmatrix(F, d), m.tt_at(d))
            rhs = linalg.mat_mul(F, m.tt_at(d + 1), m.src.torsion.xmatrix(F, d))
            if lhs != rhs:
                raise ZdinftyError("torsion component does not commute with x")


# ---------------------------------------------------------------------------
# hom spaces


@dataclass(frozen=True)
class HomSpace:
    src: CObject
    dst: CObject
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)


def _annihilator(F, basis_rows, n):
    if not basis_rows:
        return linalg.identity(F, n)
    return linalg.nullspace(F, basis_rows)


def hom_kx_space(X: CObject, Y: CObject) -> tuple:
    """Basis of constant matrices A with A S_e(X) inside S_e(Y) for all e.

    This is the restriction to graded modules: no block constraint.  Both
    objects must be torsion-free.
    """
    check_same_field(X.field, Y.field)
    if not X.is_torsion_free() or not Y.is_torsion_free():
        raise NotLatticeMorphism("restricted hom needs torsion-free objects")
    return _constant_matrix_solutions(X, Y, block_diagonal=False)


def _constant_matrix_solutions(X: CObject, Y: CObject, block_diagonal: bool):
    """Constant matrices mapping the filtration of X into that of Y."""
    F = X.field
    r, rr = X.rank, Y.rank
    if r == 0 or rr == 0:
        return ()
    p, q, pp, qq = X.p, X.q, Y.p, Y.q
    if block_diagonal:
        nvars = pp * p + qq * q

        def entry_var(i, k):
            # position of unknown A[i][k] in the flattened vector, or None
            if i < pp and k < p:
                return i * p + k
            if i >= pp and k >= p:
                return pp * p + (i - pp) * q + (k - p)
            return None

    else:
        nvars = rr * r

        def entry_var(i, k):
            return i * r + k

    rows = []
    for e, dir in X.lattice.generators():
        basis = Y.lattice.subspace_at(e)
        for u in _annihilator(F, basis, rr):
            row = [F.zero] * nvars
            any_nz = False
            for i in range(rr):
                if F.is_zero(u[i]):
                    continue
                for k in range(r):
                    if F.is_zero(dir[k]):
                        continue
                    v = entry_var(i, k)
                    if v is not None:
                        row[v] = F.add(row[v], F.mul(u[i], dir[k]))
                        any_nz = True
            if any_nz or not linalg.is_zero_vector(F, row):
                rows.append(tuple(row))
    kernel = linalg.nullspace(F, rows) if rows else linalg.identity(F, nvars)
    out = []
    for vec in kernel:
        if block_diagonal:
            a00 = tuple(tuple(vec[i * p + k] for k in range(p)) for i in range(pp))
            a11 = tuple(
                tuple(vec[pp * p + i * q + k] for k in range(q)) for i in range(qq)
            )
            out.append((a00, a11))
        else:
            out.append(tuple(tuple(vec[i * r + k] for k in range(r)) for i in range(rr)))
    return tuple(out)


def hom_space(X: CObject, Y: CObject) -> HomSpace:
    """Basis of the category Hom: block-diagonal lattice maps, torsion
    intertwiners, and free-generator images in the target torsion."""
    check_same_field(X.field, Y.field)
    F = X.field
    basis = []
    # lattice part
    for a00, a11 in _constant_matrix_solutions(X, Y, block_diagonal=True):
        basis.append(morphism_from_parts(X, Y, a00, a11))
    # torsion-to-torsion intertwiners
    for tt in _torsion_intertwiners(X, Y):
        basis.append(
            morphism_from_parts(
                X, Y, linalg.zeros(F, Y.p, X.p), linalg.zeros(F, Y.q, X.q), tt
            )
        )
    # lattice generators into target torsion
    gens = X.lattice.generators()
    for j, (e, _) in enumerate(gens):
        for s in range(Y.torsion.dim_at(e)):
            ft = [
                [F.zero] * Y.torsion.dim_at(jump) for jump, _ in gens
            ]
            ft[j][s] = F.one
            basis.append(
                morphism_from_parts(
                    X,
                    Y,
                    linalg.zeros(F, Y.p, X.p),
                    linalg.zeros(F, Y.q, X.q),
                    None,
                    tuple(map(tuple, ft)),
                )
            )
    return HomSpace(X, Y, tuple(basis))


def _torsion_intertwiners(X: CObject, Y: CObject):
    F = X.field
    degrees = _tt_degrees(X, Y)
    if not degrees:
        return ()
    offsets = {}
    total = 0
    for d in degrees:
        offsets[d] = total
        total += Y.torsion.dim_at(d) * X.torsion.dim_at(d)

    def var(d, i, j):
        return offsets[d] + i * X.torsion.dim_at(d) + j

    lo = X.torsion.min_degree()
    hi = X.torsion.max_degree()
    rows = []
    for d in range(lo, hi + 1):
        na = X.torsion.dim_at(d)
        nb1 = Y.torsion.dim_at(d + 1)
        if na == 0 or nb1 == 0:
            continue
        xa = X.torsion.xmatrix(F, d)
        xb = Y.torsion.xmatrix(F, d)
        has_d = d in offsets
        has_d1 = (d + 1) in offsets
        for i in range(nb1):
            for j in range(na):
                row = [F.zero] * total
                if has_d:
                    for s in range(Y.torsion.dim_at(d)):
                        if not F.is_zero(xb[i][s]):
                            row[var(d, s, j)] = xb[i][s]
                if has_d1:
                    for t in range(X.torsion.dim_at(d + 1)):
                        if not F.is_zero(xa[t][j]):
                            row[var(d + 1, i, t)] = F.sub(
                                row[var(d + 1, i, t)], xa[t][j]
                            )
                if any(not F.is_zero(c) for c in row):
                    rows.append(tuple(row))
    kernel = linalg.nullspace(F, rows) if rows else linalg.identity(F, total)
    out = []
    for vec in kernel:
        tt = {}
        for d in degrees:
            na, nb = X.torsion.dim_at(d), Y.torsion.dim_at(d)
            tt[d] = tuple(
                tuple(vec[var(d, i, j)] for j in range(na)) for i in range(nb)
            )
        out.append(tt)
    return tuple(out)


# ---------------------------------------------------------------------------
# ext spaces


@dataclass(frozen=True)
class ExtClass:
    """Canonical coset representative of a degree-one extension class.

    h01/h10 are the off-diagonal blocks for the lattice parts; ``tor`` holds,
    per torsion summand (n, a) of the source, a vector over the target's
    module slots at degree n - a, read modulo the x^n image of the slots at
    degree -a.
    """

    src: CObject
    dst: CObject
    h01: tuple
    h10: tuple
    tor: tuple

    def is_zero(self) -> bool:
        F = self.src.field
        for block in (self.h01, self.h10):
            for row in block:
                if any(not F.is_zero(c) for c in row):
                    return False
        for vec in self.tor:
            if any(not F.is_zero(c) for c in vec):
                return False
        return True


@dataclass(frozen=True)
class ExtSpace:
    src: CObject
    dst: CObject
    basis: tuple
    ff_reduction: tuple  # (echelon rows, pivots) of the off-diagonal image
    tor_reduction: tuple  # per src torsion summand: (rows, pivots)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, h01, h10, tor) -> ExtClass:
        """Canonical representative of the class with the given raw data."""
        F = self.src.field
        p, q = self.src.p, self.src.q
        pp, qq = self.dst.p, self.dst.q
        flat = _flatten_offdiag(h01, h10)
        rows, pivots = self.ff_reduction
        red = linalg.reduce_against(F, rows, pivots, flat) if flat else ()
        h01r, h10r = _unflatten_offdiag(F, red, p, q, pp, qq)
        tor_out = []
        for i, vec in enumerate(tor):
            rows_i, piv_i = self.tor_reduction[i]
            tor_out.append(linalg.reduce_against(F, rows_i, piv_i, vec))
        return ExtClass(self.src, self.dst, h01r, h10r, tuple(tor_out))

    def coordinates(self, c: ExtClass) -> tuple:
        """Coefficients of a (reduced) class in the canonical basis."""
        F = self.src.field
        target = _class_vector(c)
        basis_vecs = [_class_vector(b) for b in self.basis]
        coords = linalg.coords_in_basis(F, basis_vecs, target)
        if coords is None:
            raise ZdinftyError("class representative is not reduced")
        return coords


def _flatten_offdiag(h01, h10):
    out = []
    for row in h01:
        out.extend(row)
    for row in h10:
        out.extend(row)
    return tuple(out)


def _unflatten_offdiag(F, flat, p, q, pp, qq):
    h01 = tuple(tuple(flat[i * p + k] for k in range(p)) for i in range(qq))
    off = qq * p
    h10 = tuple(tuple(flat[off + i * q + k] for k in range(q)) for i in range(pp))
    return h01, h10


def _class_vector(c: ExtClass) -> tuple:
    out = list(_flatten_offdiag(c.h01, c.h10))
    for vec in c.tor:
        out.extend(vec)
    return tuple(out)


def ext_space(X: CObject, Y: CObject) -> ExtSpace:
    """Basis of degree-one extensions of X by Y with canonical representatives."""
    check_same_field(X.field, Y.field)
    F = X.field
    p, q, pp, qq = X.p, X.q, Y.p, Y.q
    n_off = qq * p + pp * q

    image_vectors = []
    if X.rank > 0 and Y.rank > 0:
        x_lat = CObject(F, TorsionPart(()), X.lattice)
        y_lat = CObject(F, TorsionPart(()), Y.lattice)
        for A in hom_kx_space(x_lat, y_lat):
            h01 = tuple(tuple(A[pp + i][k] for k in range(p)) for i in range(qq))
            h10 = tuple(tuple(A[i][p + k] for k in range(q)) for i in range(pp))
            image_vectors.append(_flatten_offdiag(h01, h10))
    ff_reduction = linalg.rref(F, image_vectors) if image_vectors else ((), ())

    tor_reduction = []
    for n, a in X.torsion.summands:
        img_cols = []
        power = module_xpower(Y, -a, n - a)
        for col in range(Y.module_dim_at(-a)):
            img_cols.append(tuple(power[i][col] for i in range(len(power))))
        tor_reduction.append(linalg.rref(F, img_cols) if img_cols else ((), ()))
    tor_reduction = tuple(tor_reduction)

    space = ExtSpace(X, Y, (), ff_reduction, tor_reduction)

    basis = []
    rows, pivots = ff_reduction
    pivset = set(pivots)
    for fcoord in range(n_off):
        if fcoord in pivset:
            continue
        flat = [F.zero] * n_off
        flat[fcoord] = F.one
        red = linalg.reduce_against(F, rows, pivots, flat)
        h01, h10 = _unflatten_offdiag(F, red, p, q, pp, qq)
        tor = tuple(
            tuple(F.zero for _ in range(Y.module_dim_at(n_i - a_i)))
            for n_i, a_i in X.torsion.summands
        )
        basis.append(ExtClass(X, Y, h01, h10, tor))
    for i, (n_i, a_i) in enumerate(X.torsion.summands):
        dim_i = Y.module_dim_at(n_i - a_i)
        rows_i, piv_i = tor_reduction[i]
        pivset_i = set(piv_i)
        for fcoord in range(dim_i):
            if fcoord in pivset_i:
                continue
            vec = [F.zero] * dim_i
            vec[fcoord] = F.one
            red = linalg.reduce_against(F, rows_i, piv_i, vec)
            tor = [
                tuple(F.zero for _ in range(Y.module_dim_at(n_j - a_j)))
                for n_j, a_j in X.torsion.summands
            ]
            tor[i] = tuple(red)
            basis.append(
                ExtClass(
                    X,
                    Y,
                    linalg.zeros(F, qq, p),
                    linalg.zeros(F, pp, q),
                    tuple(tor),
                )
            )
    return ExtSpace(X, Y, tuple(basis), ff_reduction, tor_reduction)


def zero_class(X: CObject, Y: CObject) -> ExtClass:
    F = X.field
    return ExtClass(
        X,
        Y,
        linalg.zeros(F, Y.q, X.p),
        linalg.zeros(F, Y.p, X.q),
        tuple(
            tuple(F.zero for _ in range(Y.module_dim_at(n - a)))
            for n, a in X.torsion.summands
        ),
    )


# ---------------------------------------------------------------------------
# Yoneda composition


@dataclass(frozen=True)
class DegreeTwoWitness:
    """Product of two degree-one classes: identically zero here.

    Carried as a value (not an error) so composition pipelines can observe
    the flag; the category is hereditary, so nothing is lost.
    """

    src: CObject
    dst: CObject
    flag: str = "Degree2NotSupported"

    def is_zero(self) -> bool:
        return True


def yoneda_compose(g, f):
    """Yoneda product g . f for morphisms and degree-one classes."""
    if isinstance(g, Morphism) and isinstance(f, Morphism):
        return compose(g, f)
    if isinstance(g, ExtClass) and isinstance(f, Morphism):
        return _class_after_morphism(g, f)
    if isinstance(g, Morphism) and isinstance(f, ExtClass):
        return _morphism_after_class(g, f)
    if isinstance(g, ExtClass) and isinstance(f, ExtClass):
        if f.dst != g.src:
            raise ComposabilityError("endpoints do not match for composition")
        return DegreeTwoWitness(f.src, g.dst)
    raise ComposabilityError(f"cannot compose {type(g).__name__} with {type(f).__name__}")


def _class_after_morphism(g: ExtClass, f: Morphism) -> ExtClass:
    """Precompose a class in Ext(X, Y) with f: X' -> X."""
    if f.dst != g.src:
        raise ComposabilityError("endpoints do not match for composition")
    F = f.src.field
    Xp, X, Y = f.src, g.src, g.dst
    h01 = linalg.mm(F, g.h01, f.a00, X.p, Xp.p)
    h10 = linalg.mm(F, g.h10, f.a11, X.q, Xp.q)

    # lattice generators of X' hitting torsion of X drag in the torsion
    # classes, re-expressed as a constant matrix into the divisible cokernel
    if Xp.rank > 0 and Y.rank > 0 and any(
        any(not F.is_zero(c) for c in vec) for vec in f.ft
    ):
        gens = Xp.lattice.generators()
        wcols = []
        for j, (e, _) in enumerate(gens):
            slots = X.torsion.slots_at(e)
            w = [F.zero] * Y.rank
            for sidx, i in enumerate(slots):
                c = f.ft[j][sidx]
                if F.is_zero(c):
                    continue
                amb = _tor_lattice_ambient(g, i)
                for t in range(Y.rank):
                    w[t] = F.add(w[t], F.mul(c, amb[t]))
            wcols.append(tuple(w))
        G = Xp.lattice.generator_matrix()
        Ginv = linalg.inverse(F, G)
        D = linalg.mat_mul(F, linalg.transpose(wcols), Ginv)
        p, q, pp, qq = Xp.p, Xp.q, Y.p, Y.q
        d01 = tuple(tuple(D[pp + i][k] for k in range(p)) for i in range(qq))
        d10 = tuple(tuple(D[i][p + k] for k in range(q)) for i in range(pp))
        h01 = linalg.mat_add(F, h01, d01)
        h10 = linalg.mat_add(F, h10, d10)

    tor = []
    for ip, (n_p, a_p) in enumerate(Xp.torsion.summands):
        dim_target = Y.module_dim_at(n_p - a_p)
        acc = [F.zero] * dim_target
        src_slots = Xp.torsion.slots_at(-a_p)
        dst_slots = X.torsion.slots_at(-a_p)
        tt = f.tt_at(-a_p)
        col = src_slots.index(ip)
        for srow, i in enumerate(dst_slots):
            c = tt[srow][col]
            if F.is_zero(c):
                continue
            n_i, a_i = X.torsion.summands[i]
            if n_p - a_p < n_i - a_i:
                raise ZdinftyError("inconsistent torsion component in composition")
            moved = linalg.mat_vec(
                F, module_xpower(Y, n_i - a_i, n_p - a_p), g.tor[i]
            )
            for s in range(dim_target):
                acc[s] = F.add(acc[s], F.mul(c, moved[s]))
        tor.append(tuple(acc))
    return ext_space(Xp, Y).reduce(h01, h10, tuple(tor))


def _tor_lattice_ambient(g: ExtClass, i: int):
    """Ambient vector of the lattice component of g.tor[i]."""
    F = g.src.field
    Y = g.dst
    n_i, a_i = g.src.torsion.summands[i]
    slots = Y.module_slots_at(n_i - a_i)
    gens = Y.lattice.generators()
    amb = [F.zero] * Y.rank
    for posn, lab in enumerate(slots):
        kind, idx = lab
        if kind != "F":
            continue
        c = g.tor[i][posn]
        if F.is_zero(c):
            continue
        _, dir = gens[idx]
        for t in range(Y.rank):
            amb[t] = F.add(amb[t], F.mul(c, dir[t]))
    return tuple(amb)


def _morphism_after_class(h: Morphism, c: ExtClass) -> ExtClass:
    """Postcompose a class in Ext(X, Y) with h: Y -> Y'."""
    if c.dst != h.src:
        raise ComposabilityError("endpoints do not match for composition")
    F = h.src.field
    X, Y, Yp = c.src, c.dst, h.dst
    h01 = linalg.mm(F, h.a11, c.h01, Y.q, X.p)
    h10 = linalg.mm(F, h.a00, c.h10, Y.p, X.q)
    tor = []
    for i, (n_i, a_i) in enumerate(X.torsion.summands):
        mat = morphism_degreewise(h, n_i - a_i)
        tor.append(linalg.mat_vec(F, mat, c.tor[i]))
    return ext_space(X, Yp).reduce(h01, h10, tuple(tor))


# ---------------------------------------------------------------------------
# trace map and Serre pairing


def eta(Fobj: CObject, c) -> object:
    """Trace functional on extensions of a torsion-free object by its twist.

    Well-defined on classes: off-diagonal projections of filtration-preserving
    maps into the shifted swap are nilpotent and contribute zero trace.
    Morphisms (degree zero) are sent to zero by convention.
    """
    F = Fobj.field
    if not Fobj.is_torsion_free():
        raise ShapeMismatch("trace functional is defined on torsion-free objects")
    if isinstance(c, Morphism):
        if c.src != Fobj or c.dst != serre_twist(Fobj):
            raise ShapeMismatch("trace functional needs a map from F to its twist")
        return F.zero
    if isinstance(c, DegreeTwoWitness):
        return F.zero
    if c.src != Fobj or c.dst != serre_twist(Fobj):
        raise ShapeMismatch("trace functional needs a class in Ext(F, VF)")
    return F.add(linalg.trace(F, c.h01), linalg.trace(F, c.h10))


def serre_gram(Fobj: CObject, G: CObject, flipped: bool = False):
    """Gram matrix of the duality pairing in the computed bases.

    Default: Hom(F, G) x Ext(G, VF) -> k by (f, g) -> eta(g . f).
    Flipped: Ext(F, G) x Hom(G, VF) -> k.
    """
    check_same_field(Fobj.field, G.field)
    if not (Fobj.is_torsion_free() and G.is_torsion_free()):
        raise ShapeMismatch("the pairing is computed for torsion-free objects")
    VF = serre_twist(Fobj)
    if not flipped:
        lefts = hom_space(Fobj, G).basis
        rights = ext_space(G, VF).basis
    else:
        lefts = ext_space(Fobj, G).basis
        rights = hom_space(G, VF).basis
    rows = []
    for f in lefts:
        row = []
        for g in rights:
            row.append(eta(Fobj, yoneda_compose(g, f)))
        rows.append(tuple(row))
    return tuple(rows)


@dataclass(frozen=True)
class SerreReport:
    X: CObject
    Y: CObject
    dim_hom: int
    dim_ext_twisted: int
    dims_match: bool
    gram_rank: int | None
    gram_nondegenerate: bool | None

    @property
    def passed(self) -> bool:
        ok = self.dims_match
        if self.gram_nondegenerate is not None:
            ok = ok and self.gram_nondegenerate
        return ok


def serre_check(X: CObject, Y: CObject) -> SerreReport:
    """Compare dim Hom(X, Y) with dim Ext(Y, VX); check the pairing rank."""
    d_hom = hom_space(X, Y).dim
    d_ext = ext_space(Y, serre_twist(X)).dim
    gram_rank = None
    gram_ok = None
    if X.is_torsion_free() and Y.is_torsion_free():
        gram = serre_gram(X, Y)
        gram_rank = linalg.rank(X.field, gram) if gram else 0
        gram_ok = gram_rank == d_hom == d_ext
    return SerreReport(X, Y, d_hom, d_ext, d_hom == d_ext, gram_rank, gram_ok)


def euler_form(X: CObject, Y: CObject) -> int:
    """dim Hom(X, Y) - dim Ext(X, Y)."""
    return hom_space(X, Y).dim - ext_space(X, Y).dim
