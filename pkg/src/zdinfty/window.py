"""Degreewise models of graded modules on a finite degree window.

A window module records, for degrees lo..hi, a basis dimension per degree and
the multiplication-by-x matrices between consecutive degrees.  Together with
a chart identifying the top degree with the ambient space k^r this is enough
to recover the canonical torsion/lattice data of a finitely generated object:
the lattice filtration is the image in the localization, and the torsion
summand multiset falls out of the ranks of the x-power maps on the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import ZdinftyError
from .fields import FieldSpec
from .lattice import GradedLattice, from_filtration


@dataclass(frozen=True)
class WindowModule:
    field: FieldSpec
    lo: int
    hi: int
    dims: tuple  # length hi - lo + 1
    xmaps: tuple  # length hi - lo; xmaps[i]: degree lo+i -> lo+i+1

    def __post_init__(self):
        if len(self.dims) != self.hi - self.lo + 1:
            raise ZdinftyError("window dimensions do not match the degree range")
        if len(self.xmaps) != self.hi - self.lo:
            raise ZdinftyError("window x-maps do not match the degree range")

    def dim_at(self, d: int) -> int:
        if d < self.lo or d > self.hi:
            return 0
        return self.dims[d - self.lo]

    def xmap(self, d: int) -> tuple:
        """Matrix of multiplication by x from degree d to d+1."""
        if d < self.lo or d >= self.hi:
            return linalg.zeros(self.field, self.dim_at(d + 1), self.dim_at(d))
        return self.xmaps[d - self.lo]

    def xpower(self, d_from: int, d_to: int) -> tuple:
        out = linalg.identity(self.field, self.dim_at(d_from))
        for d in range(d_from, d_to):
            out = _mm(self.field, self.xmap(d), out, self.dim_at(d), self.dim_at(d_from))
        return out


_mm = linalg.mm


def reconstruct_parts(wm: WindowModule, chart, p: int, q: int):
    """Recover (torsion summands, lattice) from a window model.

    ``chart`` is an invertible r x dim(hi) matrix identifying the top degree
    with k^r; the window must reach high enough that all torsion is dead and
    the filtration has stabilized at the top.  Returns a sorted tuple of
    torsion summands (n, a) and the canonical GradedLattice.
    """
    F = wm.field
    r = p + q
    if wm.dim_at(wm.hi) != r or (r > 0 and linalg.inverse(F, chart) is None):
        raise ZdinftyError("window chart is not an isomorphism onto k^r")

    # Maps into the localization chart, degree by degree from the top.
    to_chart = {wm.hi: chart}
    for d in range(wm.hi - 1, wm.lo - 1, -1):
        to_chart[d] = _mm(F, to_chart[d + 1], wm.xmap(d), wm.dim_at(d + 1), wm.dim_at(d))

    pieces = []
    kernels = {}
    for d in range(wm.lo, wm.hi + 1):
        cols = [tuple(to_chart[d][i][j] for i in range(r)) for j in range(wm.dim_at(d))]
        pieces.append((d, cols))
        kernels[d] = linalg.nullspace(F, to_chart[d], ncols=wm.dim_at(d))
    lat = from_filtration(F, p, q, pieces) if r > 0 else GradedLattice(F, p, q, ())

    if kernels[wm.hi]:
        raise ZdinftyError("torsion still alive at the top of the window")

    def rho(s: int, t: int) -> int:
        # number of torsion summands alive on all of [s, t]
        if s < wm.lo or t > wm.hi or t < s:
            return 0
        basis = kernels[s]
        if not basis:
            return 0
        imgs = [linalg.mat_vec(F, wm.xpower(s, t), v) for v in basis]
        return linalg.rank(F, imgs)

    summands = []
    for s in range(wm.lo, wm.hi + 1):
        for t in range(s, wm.hi + 1):
            n = rho(s, t) - rho(s - 1, t) - rho(s, t + 1) + rho(s - 1, t + 1)
            if n < 0:
                raise ZdinftyError("inconsistent torsion ranks in window model")
            summands.extend([(t - s + 1, -s)] * n)
    return tuple(sorted(summands)), lat


def quotient_model(field: FieldSpec, lo: int, hi: int, ambient_dims, relation_rows):
    """Window model of (coordinate spaces modulo relation subspaces).

    ``ambient_dims[d]`` is the number of coordinate slots at degree d, where
    slot i at degree d maps to slot i at degree d+1 when both exist (slots are
    aligned by index; extra slots at d+1 are new).  ``relation_rows[d]`` is a
    list of vectors spanning the subspace to quotient by.  Returns the window
    module together with, per degree, the chosen coset-representative slots.
    """
    reps = {}
    bases = {}
    for d in range(lo, hi + 1):
        rel, pivots = linalg.rref(field, relation_rows.get(d, ()))
        pivset = set(pivots)
        free = tuple(j for j in range(ambient_dims.get(d, 0)) if j not in pivset)
        reps[d] = free
        bases[d] = (rel, pivots)

    def project(d, vec):
        rel, pivots = bases[d]
        red = linalg.reduce_against(field, rel, pivots, vec)
        return tuple(red[j] for j in reps[d])

    dims = tuple(len(reps[d]) for d in range(lo, hi + 1))
    xmaps = []
    for d in range(lo, hi):
        cols = []
        na = ambient_dims.get(d + 1, 0)
        for j in reps[d]:
            vec = [field.zero] * na
            if j < na:
                vec[j] = field.one
            cols.append(project(d + 1, tuple(vec)))
        xmaps.append(linalg.transpose(cols))
    return WindowModule(field, lo, hi, dims, tuple(xmaps)), reps, project


def intertwiner_space(A: WindowModule, B: WindowModule, top_constraint=None):
    """Basis of degreewise maps phi with x . phi = phi . x on the window.

    Each basis element is a dict degree -> matrix.  ``top_constraint`` may be
    a list of linear conditions on the top-degree block, given as matrices C
    with sum C[i][j] * phi_hi[i][j] = 0.
    """
    if (A.lo, A.hi) != (B.lo, B.hi):
        raise ZdinftyError("intertwiner solve needs aligned windows")
    F = A.field
    offsets = {}
    total = 0
    for d in range(A.lo, A.hi + 1):
        offsets[d] = total
        total += B.dim_at(d) * A.dim_at(d)

    def var(d, i, j):
        return offsets[d] + i * A.dim_at(d) + j

    rows = []
    for d in range(A.lo, A.hi):
        xa, xb = A.xmap(d), B.xmap(d)
        na, nb = A.dim_at(d), B.dim_at(d)
        na1, nb1 = A.dim_at(d + 1), B.dim_at(d + 1)
        for i in range(nb1):
            for j in range(na):
                row = [F.zero] * total
                # (phi_{d+1} xa)_{ij} - (xb phi_d)_{ij} = 0
                for t in range(na1):
                    if not F.is_zero(xa[t][j]):
                        row[var(d + 1, i, t)] = F.add(row[var(d + 1, i, t)], xa[t][j])
                for s in range(nb):
                    if not F.is_zero(xb[i][s]):
                        row[var(d, s, j)] = F.sub(row[var(d, s, j)], xb[i][s])
                if any(not F.is_zero(c) for c in row):
                    rows.append(tuple(row))
    if top_constraint:
        for C in top_constraint:
            row = [F.zero] * total
            for i in range(B.dim_at(A.hi)):
                for j in range(A.dim_at(A.hi)):
                    if not F.is_zero(C[i][j]):
                        row[var(A.hi, i, j)] = C[i][j]
            rows.append(tuple(row))

    kernel = linalg.nullspace(F, rows) if rows else linalg.identity(F, total)
    basis = []
    for vec in kernel:
        phi = {}
        for d in range(A.lo, A.hi + 1):
            na, nb = A.dim_at(d), B.dim_at(d)
            phi[d] = tuple(
                tuple(vec[var(d, i, j)] for j in range(na)) for i in range(nb)
            )
        basis.append(phi)
    return basis


def find_equivariant_iso(A: WindowModule, B: WindowModule, basis, seed: int = 0):
    """An invertible intertwiner from a spanning set, or None.

    Tries the basis elements and then seeded small integer combinations.
    """
    import random

    F = A.field
    if A.dims != B.dims:
        return None

    def invertible(phi):
        return all(
            linalg.inverse(F, phi[d]) is not None for d in range(A.lo, A.hi + 1)
        )

    for phi in basis:
        if invertible(phi):
            return phi
    rng = random.Random(seed)
    for _ in range(200):
        coeffs = [F.of_int(rng.randint(-4, 4)) for _ in basis]
        phi = {}
        for d in range(A.lo, A.hi + 1):
            acc = linalg.zeros(F, B.dim_at(d), A.dim_at(d))
            for c, b in zip(coeffs, basis):
                if not F.is_zero(c):
                    acc = linalg.mat_add(F, acc, linalg.mat_scale(F, c, b[d]))
            phi[d] = acc
        if invertible(phi):
            return phi
    return None
