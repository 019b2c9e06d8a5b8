"""Almost split sequences, extension middles, quiver windows.

A degree-one class is realized as an honest short exact sequence: for
torsion-free ends the middle lattice is generated by the twisted columns
[B' | A B; 0 | B]; in the presence of torsion the extension is assembled
degreewise (the class data feeds the x-action and the localization chart),
its canonical form is reconstructed, and an equivariant isomorphism
transports the inclusion and projection onto the canonical middle.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg, window
from .errors import (
    NotIndecomposable,
    ShapeMismatch,
    WindowTooSmall,
    WitnessNotFound,
    ZdinftyError,
)
from .fields import FieldSpec
from .homext import (
    ExtClass,
    Morphism,
    ext_space,
    hom_space,
    module_xpower,
    morphism_degreewise,
    morphism_from_parts,
    sum_inclusion,
    sum_projection,
    zero_class,
)
from .decomp import (
    IndecLabel,
    decompose,
    label_to_object,
    serre_twist_label,
)
from .lattice import canonicalize
from .objects import (
    CObject,
    TorsionPart,
    direct_sum,
    model_of,
    from_window,
    serre_twist,
    shift,
    sigma,
    window_bounds,
)


@dataclass(frozen=True)
class ShortExactSeq:
    left: CObject
    middle: CObject
    right: CObject
    inject: Morphism  # left -> middle
    surject: Morphism  # middle -> right
    cls: ExtClass  # in Ext(right, left)

    def is_split(self) -> bool:
        return self.cls.is_zero()


def split_sequence(Y: CObject, X: CObject) -> ShortExactSeq:
    """The split extension of X by Y."""
    Z, e1, e2, t1, t2 = direct_sum(Y, X)
    inject = sum_inclusion(Z, Y, e1, t1)
    surject = sum_projection(Z, X, e2, t2)
    return ShortExactSeq(Y, Z, X, inject, surject, zero_class(X, Y))


def extension_object(c: ExtClass) -> ShortExactSeq:
    """Short exact sequence 0 -> Y -> E -> X -> 0 realizing the class."""
    X, Y = c.src, c.dst
    if c.is_zero():
        return split_sequence(Y, X)
    if X.is_torsion_free() and Y.is_torsion_free():
        return _lattice_extension(c)
    return _general_extension(c)


def _embeddings(Y: CObject, X: CObject):
    """Ambient coordinate embeddings for the middle: [Y0 X0 | Y1 X1]."""
    F = Y.field
    pE, qE = Y.p + X.p, Y.q + X.q
    rE = pE + qE

    def build(obj, p_off, q_off):
        rows = [[F.zero] * obj.rank for _ in range(rE)]
        for j in range(obj.p):
            rows[p_off + j][j] = F.one
        for j in range(obj.q):
            rows[pE + q_off + j][obj.p + j] = F.one
        return tuple(map(tuple, rows))

    return build(Y, 0, 0), build(X, Y.p, Y.q), pE, qE


def _offdiag_full(c: ExtClass):
    """The class blocks as a full rY x rX matrix."""
    F = c.src.field
    X, Y = c.src, c.dst
    rows = []
    for i in range(Y.p):
        rows.append(tuple(F.zero for _ in range(X.p)) + tuple(c.h10[i]))
    for i in range(Y.q):
        rows.append(tuple(c.h01[i]) + tuple(F.zero for _ in range(X.q)))
    return tuple(rows)


def _lattice_extension(c: ExtClass) -> ShortExactSeq:
    F = c.src.field
    X, Y = c.src, c.dst
    embY, embX, pE, qE = _embeddings(Y, X)
    A = _offdiag_full(c)
    gens = []
    for e, dir in Y.lattice.generators():
        gens.append((e, linalg.mat_vec(F, embY, dir)))
    for e, dir in X.lattice.generators():
        twisted = linalg.mat_vec(F, embY, linalg.mat_vec(F, A, dir))
        vec = linalg.vec_add(F, twisted, linalg.mat_vec(F, embX, dir))
        gens.append((e, vec))
    E = CObject(F, TorsionPart(()), canonicalize(F, gens, pE, qE))
    a00_i = tuple(tuple(embY[i][k] for k in range(Y.p)) for i in range(pE))
    a11_i = tuple(tuple(embY[pE + i][Y.p + k] for k in range(Y.q)) for i in range(qE))
    inject = morphism_from_parts(Y, E, a00_i, a11_i)
    projX = linalg.transpose(embX)
    a00_s = tuple(tuple(projX[i][k] for k in range(pE)) for i in range(X.p))
    a11_s = tuple(tuple(projX[X.p + i][pE + k] for k in range(qE)) for i in range(X.q))
    surject = morphism_from_parts(E, X, a00_s, a11_s)
    return ShortExactSeq(Y, E, X, inject, surject, c)


def _general_extension(c: ExtClass) -> ShortExactSeq:
    F = c.src.field
    X, Y = c.src, c.dst
    loX, hiX = window_bounds(X)
    loY, hiY = window_bounds(Y)
    lo, hi = min(loX, loY), max(hiX, hiY)
    wmY, chartY, slotsY = model_of(Y, lo, hi)
    wmX, chartX, slotsX = model_of(X, lo, hi)
    embY, embX, pE, qE = _embeddings(Y, X)
    rE = pE + qE

    dims = tuple(wmY.dim_at(d) + wmX.dim_at(d) for d in range(lo, hi + 1))
    xmaps = []
    for d in range(lo, hi):
        ny, ny1 = wmY.dim_at(d), wmY.dim_at(d + 1)
        nx, nx1 = wmX.dim_at(d), wmX.dim_at(d + 1)
        xy, xx = wmY.xmap(d), wmX.xmap(d)
        rows = []
        for i in range(ny1):
            row = list(xy[i]) + [F.zero] * nx
            rows.append(row)
        for i in range(nx1):
            rows.append([F.zero] * ny + list(xx[i]))
        # the class twists the top of each torsion summand of X into Y
        for t, (n, a) in enumerate(X.torsion.summands):
            if d == n - a - 1:
                col = ny + slotsX[d].index(("T", t))
                for i in range(ny1):
                    rows[i][col] = F.add(rows[i][col], c.tor[t][i])
        xmaps.append(tuple(map(tuple, rows)))
    A = _offdiag_full(c)
    chart_cols = []
    for t in range(wmY.dim_at(hi)):
        col = tuple(chartY[i][t] for i in range(Y.rank))
        chart_cols.append(linalg.mat_vec(F, embY, col))
    for t in range(wmX.dim_at(hi)):
        col = tuple(chartX[i][t] for i in range(X.rank))
        vec = linalg.mat_vec(F, embX, col)
        vec = linalg.vec_add(F, vec, linalg.mat_vec(F, embY, linalg.mat_vec(F, A, col)))
        chart_cols.append(vec)
    chart = linalg.transpose(chart_cols) if chart_cols else ()
    wmE = window.WindowModule(F, lo, hi, dims, tuple(xmaps))
    E = from_window(wmE, chart, pE, qE)

    wmM, chartM, _ = model_of(E, lo, hi)
    phi = _transport_iso(wmE, chart, wmM, chartM, pE, qE, rE)
    phi_inv = {d: linalg.inverse(F, phi[d]) for d in range(lo, hi + 1)}

    psi_in = {}
    psi_out = {}
    for d in range(lo, hi + 1):
        ny = wmY.dim_at(d)
        psi_in[d] = tuple(tuple(row[:ny]) for row in phi[d])
        psi_out[d] = tuple(tuple(row) for row in phi_inv[d][ny:]) if phi_inv[d] else ()
    inject = morphism_from_degreewise(Y, E, psi_in, lo, hi)
    surject = morphism_from_degreewise(E, X, psi_out, lo, hi)
    return ShortExactSeq(Y, E, X, inject, surject, c)


def _transport_iso(wmA, chartA, wmB, chartB, p, q, r):
    """Equivariant degreewise isomorphism A -> B, type-diagonal at the top."""
    F = wmA.field
    constraints = []
    if r > 0:
        inv = linalg.inverse(F, chartA)
        for i in range(r):
            for j in range(r):
                ti = 0 if i < p else 1
                tj = 0 if j < p else 1
                if ti == tj:
                    continue
                C = []
                for s in range(wmB.dim_at(wmB.hi)):
                    row = []
                    for t in range(wmA.dim_at(wmA.hi)):
                        row.append(F.mul(chartB[i][s], inv[t][j]))
                    C.append(tuple(row))
                constraints.append(tuple(C))
    basis = window.intertwiner_space(wmA, wmB, constraints)
    phi = window.find_equivariant_iso(wmA, wmB, basis)
    if phi is None:
        raise ZdinftyError("no equivariant isomorphism onto the canonical middle")
    return phi


def morphism_from_degreewise(src: CObject, dst: CObject, psi, lo: int, hi: int) -> Morphism:
    """Recover blockwise morphism data from degreewise slot matrices."""
    F = src.field
    src_slots = {d: src.module_slots_at(d) for d in range(lo, hi + 1)}
    dst_slots = {d: dst.module_slots_at(d) for d in range(lo, hi + 1)}
    if src.rank > 0:
        Gs = src.lattice.generator_matrix()
        Gd = dst.lattice.generator_matrix() if dst.rank > 0 else ()
        # ambient block matrix from the top of the window
        psi_top_lat = []
        for pos, lab in enumerate(dst_slots[hi]):
            psi_top_lat.append(tuple(psi[hi][pos][t] for t in range(len(src_slots[hi]))))
        M = linalg.mm(
            F,
            linalg.mm(F, Gd, psi_top_lat, dst.rank, src.rank) if dst.rank else (),
            linalg.inverse(F, Gs),
            src.rank,
            src.rank,
        )
        a00 = tuple(tuple(M[i][k] for k in range(src.p)) for i in range(dst.p))
        a11 = tuple(
            tuple(M[dst.p + i][src.p + k] for k in range(src.q)) for i in range(dst.q)
        )
        for i in range(dst.rank):
            for k in range(src.rank):
                if (i < dst.p) != (k < src.p) and not F.is_zero(M[i][k]):
                    raise ShapeMismatch("degreewise map is not type-diagonal")
    else:
        a00 = linalg.zeros(F, dst.p, 0)
        a11 = linalg.zeros(F, dst.q, 0)
    tt = {}
    for d in range(lo, hi + 1):
        src_t = [pos for pos, lab in enumerate(src_slots[d]) if lab[0] == "T"]
        dst_t = [pos for pos, lab in enumerate(dst_slots[d]) if lab[0] == "T"]
        src_f = [pos for pos, lab in enumerate(src_slots[d]) if lab[0] == "F"]
        if src_t and dst_t:
            tt[d] = tuple(
                tuple(psi[d][i][j] for j in src_t) for i in dst_t
            )
        # torsion may not hit the lattice
        dst_f = [pos for pos, lab in enumerate(dst_slots[d]) if lab[0] == "F"]
        for i in dst_f:
            for j in src_t:
                if not F.is_zero(psi[d][i][j]):
                    raise ShapeMismatch("torsion maps into the lattice part")
    ft = []
    for j, (e, _) in enumerate(src.lattice.generators()):
        pos_j = src_slots[e].index(("F", j))
        vec = []
        for pos, lab in enumerate(dst_slots[e]):
            if lab[0] == "T":
                vec.append(psi[e][pos][pos_j])
        ft.append(tuple(vec))
    return morphism_from_parts(src, dst, a00, a11, tt, tuple(ft))


def class_of_sequence(inject: Morphism, surject: Morphism) -> ExtClass:
    """Extension class of 0 -> Y -> E -> X -> 0 from its two maps."""
    if inject.dst != surject.src:
        raise ShapeMismatch("maps do not share a middle object")
    F = inject.src.field
    Y, E, X = inject.src, inject.dst, surject.dst
    space = ext_space(X, Y)
    tor = []
    for i, (n, a) in enumerate(X.torsion.summands):
        d0 = -a
        p_mat = morphism_degreewise(surject, d0)
        gen_pos = X.module_slots_at(d0).index(("T", i))
        target = tuple(
            F.one if k == gen_pos else F.zero for k in range(X.module_dim_at(d0))
        )
        v = linalg.solve(F, p_mat, target)
        if v is None:
            raise ZdinftyError("surjection misses a torsion generator")
        lifted = linalg.mat_vec(F, module_xpower(E, d0, n - a), v)
        i_mat = morphism_degreewise(inject, n - a)
        y = linalg.solve(F, i_mat, lifted)
        if y is None:
            raise ZdinftyError("x-power of the lift escapes the kernel")
        tor.append(tuple(y))
    h01 = linalg.zeros(F, Y.q, X.p)
    h10 = linalg.zeros(F, Y.p, X.q)
    if X.rank > 0 and Y.rank > 0:
        # a graded splitting of the surjection on the free part
        lifts = []
        for j, (e, _) in enumerate(X.lattice.generators()):
            p_mat = morphism_degreewise(surject, e)
            pos = X.module_slots_at(e).index(("F", j))
            target = tuple(
                F.one if k == pos else F.zero for k in range(X.module_dim_at(e))
            )
            v = linalg.solve(F, p_mat, target)
            if v is None:
                raise ZdinftyError("surjection misses a lattice generator")
            lifts.append((e, v))
        # a type-diagonal retraction of the localized inclusion
        iota = inject.full_matrix()
        W = _block_left_inverse(F, iota, E.p, E.q, Y.p, Y.q)
        e_gens = E.lattice.generators()
        cols = []
        for (e, v) in lifts:
            slots = E.module_slots_at(e)
            amb = [F.zero] * E.rank
            for pos, lab in enumerate(slots):
                if lab[0] != "F":
                    continue
                cpos = v[pos]
                if F.is_zero(cpos):
                    continue
                _, dir = e_gens[lab[1]]
                for t in range(E.rank):
                    amb[t] = F.add(amb[t], F.mul(cpos, dir[t]))
            cols.append(linalg.mat_vec(F, W, tuple(amb)))
        G = X.lattice.generator_matrix()
        D = linalg.mm(F, linalg.transpose(cols), linalg.inverse(F, G), X.rank, X.rank)
        h01 = tuple(tuple(D[Y.p + i][k] for k in range(X.p)) for i in range(Y.q))
        h10 = tuple(tuple(D[i][X.p + k] for k in range(X.q)) for i in range(Y.p))
    return space.reduce(h01, h10, tuple(tor))


def _block_left_inverse(F, iota, pE, qE, pY, qY):
    """Type-diagonal W with W . iota = identity on the smaller space."""
    rE, rY = pE + qE, pY + qY
    rows = []
    b0 = [[iota[i][k] for k in range(pY)] for i in range(pE)]
    b1 = [[iota[pE + i][pY + k] for k in range(qY)] for i in range(qE)]
    w0 = _left_inverse(F, b0, pE, pY)
    w1 = _left_inverse(F, b1, qE, qY)
    for i in range(pY):
        rows.append(tuple(w0[i]) + tuple(F.zero for _ in range(qE)))
    for i in range(qY):
        rows.append(tuple(F.zero for _ in range(pE)) + tuple(w1[i]))
    return tuple(rows)


def _left_inverse(F, B, nrows, ncols):
    out = []
    Bt = [[B[i][k] for i in range(nrows)] for k in range(ncols)]
    for i in range(ncols):
        target = tuple(F.one if k == i else F.zero for k in range(ncols))
        w = linalg.solve(F, Bt, target) if ncols else ()
        if w is None:
            raise ZdinftyError("inclusion has no type-diagonal retraction")
        out.append(tuple(w))
    return out


def verify_exact(seq: ShortExactSeq, pad: int = 1) -> None:
    """Degreewise check: mono, epi, image equals kernel."""
    F = seq.left.field
    lows = [window_bounds(o)[0] for o in (seq.left, seq.middle, seq.right) if not o.is_zero()]
    highs = [window_bounds(o)[1] for o in (seq.left, seq.middle, seq.right) if not o.is_zero()]
    if not lows:
        return
    lo, hi = min(lows) - pad, max(highs) + pad
    for d in range(lo, hi + 1):
        mi = morphism_degreewise(seq.inject, d)
        ms = morphism_degreewise(seq.surject, d)
        n_left = seq.left.module_dim_at(d)
        n_mid = seq.middle.module_dim_at(d)
        n_right = seq.right.module_dim_at(d)
        if n_left + n_right != n_mid:
            raise ZdinftyError(f"degree {d}: dimensions are not additive")
        if len(linalg.nullspace(F, mi, ncols=n_left)) != 0:
            raise ZdinftyError(f"degree {d}: inclusion is not injective")
        if linalg.rank(F, ms) != n_right:
            raise ZdinftyError(f"degree {d}: projection is not surjective")
        comp = linalg.mm(F, ms, mi, n_mid, n_left)
        for row in comp:
            for entry in row:
                if not F.is_zero(entry):
                    raise ZdinftyError(f"degree {d}: composite is nonzero")


# ---------------------------------------------------------------------------
# almost split sequences


@dataclass(frozen=True)
class AlmostSplitSequence:
    seq: ShortExactSeq
    left_label: IndecLabel
    middle_factors: tuple
    right_label: IndecLabel


def almost_split(X: CObject) -> AlmostSplitSequence:
    """The almost split sequence ending in an indecomposable object.

    The left term is the twist of X; the class is the generator of the
    one-dimensional extension space.
    """
    from .decomp import identify

    if X.is_zero() or hom_space(X, X).dim != 1:
        raise NotIndecomposable("almost split sequences end in indecomposables")
    VX = serre_twist(X)
    space = ext_space(X, VX)
    if space.dim != 1:
        raise ZdinftyError(
            f"extension space against the twist has dimension {space.dim}, expected 1"
        )
    seq = extension_object(space.basis[0])
    dec = decompose(seq.middle)
    return AlmostSplitSequence(seq, identify(VX), dec.factors, identify(X))


def no_proj_no_inj_witness(X: CObject, bound: int = 8):
    """Least twists certifying X is neither projective nor injective.

    Returns (n_epi, n_mono): the least n with nonzero extensions of X by the
    n-fold negative shift of its swap, and dually.
    """
    if X.is_zero() or hom_space(X, X).dim != 1:
        raise NotIndecomposable("witness search expects an indecomposable object")
    n_epi = None
    n_mono = None
    for n in range(1, bound + 1):
        if n_epi is None and ext_space(X, shift(sigma(X), -n)).dim > 0:
            n_epi = n
        if n_mono is None and ext_space(shift(sigma(X), n), X).dim > 0:
            n_mono = n
        if n_epi is not None and n_mono is not None:
            return n_epi, n_mono
    raise WitnessNotFound(f"no witness within twist bound {bound}")


# ---------------------------------------------------------------------------
# quiver windows


@dataclass(frozen=True)
class QuiverWindow:
    nodes: tuple  # sorted IndecLabels
    arrows: tuple  # sorted (src, dst) pairs with multiplicity
    translation: tuple  # sorted (node, tau(node)) pairs within the window
    boundary_dropped: int


def quiver_window(
    field: FieldSpec, m_max: int, a_min: int, a_max: int, n_max: int
) -> QuiverWindow:
    """Mesh-generated window of the two quiver components.

    Arrows into each node are the middle summands of its almost split
    sequence; arrows with an endpoint outside the window are dropped and
    counted.
    """
    from .decomp import rank_one_label, rank_two_label, wing

    if m_max < 1 or n_max < 1 or a_min > a_max:
        raise WindowTooSmall("window needs m_max >= 1, n_max >= 1, a_min <= a_max")
    if a_max - a_min < 1:
        raise WindowTooSmall("window cannot contain a full mesh")

    def labels_in(mm, alo, ahi, nn):
        out = []
        for a in range(alo, ahi + 1):
            out.append(rank_one_label(0, a))
            out.append(rank_one_label(1, a))
            for m in range(1, mm + 1):
                out.append(rank_two_label(m, a))
            for n in range(1, nn + 1):
                out.append(wing(n, a))
        return out

    inside = set(labels_in(m_max, a_min, a_max, n_max))
    enlarged = set(labels_in(m_max + 1, a_min - 1, a_max + 1, n_max + 1))
    arrows = []
    dropped = 0
    for B in sorted(enlarged, key=lambda l: l.sort_key()):
        mesh = almost_split(label_to_object(field, B))
        for A in mesh.middle_factors:
            if A in inside and B in inside:
                arrows.append((A, B))
            elif A in inside or B in inside:
                dropped += 1
    translation = []
    for node in inside:
        tau = serre_twist_label(node)
        if tau in inside:
            translation.append((node, tau))
    nodes = tuple(sorted(inside, key=lambda l: l.sort_key()))
    arrows.sort(key=lambda ab: (ab[0].sort_key(), ab[1].sort_key()))
    translation.sort(key=lambda ab: ab[0].sort_key())
    return QuiverWindow(nodes, tuple(arrows), tuple(translation), dropped)


def node_id(label: IndecLabel) -> str:
    if label.kind == "rank_one":
        i, a = label.params
        return f"F{i}_{a}"
    if label.kind == "rank_two":
        m, a = label.params
        return f"F_{m}_{a}"
    n, a = label.params
    return f"T_{n}_{a}"


def dot_export(w: QuiverWindow) -> str:
    """Deterministic DOT digraph; dashed edges mark the translation."""
    lines = ["digraph ar_quiver {"]
    for node in w.nodes:
        lines.append(f'  "{node_id(node)}";')
    for a, b in w.arrows:
        lines.append(f'  "{node_id(a)}" -> "{node_id(b)}";')
    for node, tau in w.translation:
        lines.append(f'  "{node_id(node)}" -> "{node_id(tau)}" [style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def window_to_json(w: QuiverWindow) -> dict:
    """JSON-ready form of a quiver window (schema zdinfty.quiver/1)."""
    return {
        "schema": "zdinfty.quiver/1",
        "nodes": [str(n) for n in w.nodes],
        "arrows": [[str(a), str(b)] for a, b in w.arrows],
        "translation": {str(n): str(t) for n, t in w.translation},
        "boundary_dropped": w.boundary_dropped,
    }
