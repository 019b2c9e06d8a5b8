"""Objects of the category: torsion plus a typed graded lattice.

Every finitely generated object splits as T + F with T a finite sum of
graded cyclic torsion modules T(n, a) (generator in degree -a, alive for n
degrees) and F a full-rank graded lattice.  The split is stored, not
recomputed.  This module owns the structural functors (degree shift, the
type swap sigma, the twist V = sigma then shift by -1), symbolic injective
resolutions, and conversion from free presentations.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg, window
from .errors import DimensionMismatch, InconsistentTypes, NotFullRank, ZdinftyError
from .fields import FieldSpec, check_same_field
from .lattice import (
    GradedLattice,
    canonicalize,
    direct_sum as lattice_direct_sum,
    shift_lattice,
    sigma_lattice,
)
from .poly import Poly


@dataclass(frozen=True)
class TorsionPart:
    """Multiset of cyclic summands (n, a): degrees -a .. -a+n-1, each 1-dimensional."""

    summands: tuple

    @staticmethod
    def of(summands) -> "TorsionPart":
        ss = tuple(sorted((int(n), int(a)) for n, a in summands))
        for n, _ in ss:
            if n < 1:
                raise ZdinftyError(f"torsion summand needs positive length, got {n}")
        return TorsionPart(ss)

    def is_zero(self) -> bool:
        return not self.summands

    def alive(self, i: int, d: int) -> bool:
        n, a = self.summands[i]
        return -a <= d <= -a + n - 1

    def slots_at(self, d: int) -> tuple:
        return tuple(i for i in range(len(self.summands)) if self.alive(i, d))

    def dim_at(self, d: int) -> int:
        return len(self.slots_at(d))

    def min_degree(self):
        return min((-a for _, a in self.summands), default=None)

    def max_degree(self):
        return max((-a + n - 1 for n, a in self.summands), default=None)

    def total_dim(self) -> int:
        return sum(n for n, _ in self.summands)

    def xmatrix(self, F: FieldSpec, d: int):
        """Multiplication by x from the degree-d slots to the degree-(d+1) slots."""
        src = self.slots_at(d)
        dst = self.slots_at(d + 1)
        pos = {i: k for k, i in enumerate(dst)}
        rows = [[F.zero] * len(src) for _ in dst]
        for col, i in enumerate(src):
            if i in pos:
                rows[pos[i]][col] = F.one
        return tuple(tuple(r) for r in rows)

    def xpower(self, F: FieldSpec, d_from: int, d_to: int):
        out = linalg.identity(F, self.dim_at(d_from))
        for d in range(d_from, d_to):
            out = linalg.mm(F, self.xmatrix(F, d), out, self.dim_at(d), self.dim_at(d_from))
        return out

    def shifted(self, s: int) -> "TorsionPart":
        return TorsionPart.of((n, a + s) for n, a in self.summands)


@dataclass(frozen=True)
class CObject:
    """An object T + F: stored torsion summands and an embedded lattice."""

    field: FieldSpec
    torsion: TorsionPart
    lattice: GradedLattice

    def __post_init__(self):
        check_same_field(self.field, self.lattice.field)

    @property
    def p(self) -> int:
        return self.lattice.p

    @property
    def q(self) -> int:
        return self.lattice.q

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def is_zero(self) -> bool:
        return self.torsion.is_zero() and self.rank == 0

    def is_torsion_free(self) -> bool:
        return self.torsion.is_zero()

    def is_torsion(self) -> bool:
        return self.rank == 0

    def module_dim_at(self, d: int) -> int:
        """k-dimension of the degree-d piece of the underlying graded module."""
        return self.lattice.dim_at(d) + self.torsion.dim_at(d)

    def module_slots_at(self, d: int) -> tuple:
        """Degree-d basis labels: ('F', generator index) then ('T', summand index)."""
        gens = self.lattice.generators()
        out = [("F", j) for j, (jump, _) in enumerate(gens) if jump <= d]
        out += [("T", i) for i in self.torsion.slots_at(d)]
        return tuple(out)


# ---------------------------------------------------------------------------
# constructors


def zero_object(field: FieldSpec) -> CObject:
    return CObject(field, TorsionPart(()), GradedLattice(field, 0, 0, ()))


def make_object(field: FieldSpec, torsion, lattice: GradedLattice) -> CObject:
    return CObject(field, TorsionPart.of(torsion), lattice)


def rank_one(field: FieldSpec, i: int, a: int) -> CObject:
    """The rank-one object of type i whose lattice jumps at degree -a."""
    if i not in (0, 1):
        raise ZdinftyError(f"type must be 0 or 1, got {i}")
    p, q = (1, 0) if i == 0 else (0, 1)
    lat = canonicalize(field, [(-a, (field.one,))], p, q)
    return CObject(field, TorsionPart(()), lat)


def rank_two(field: FieldSpec, m: int, a: int) -> CObject:
    """The rank-two object with diagonal direction at -a and conductor m."""
    if m < 1:
        raise ZdinftyError(f"rank-two objects need m >= 1, got {m}")
    one, zero = field.one, field.zero
    lat = canonicalize(field, [(-a, (one, one)), (m - a, (one, zero))], 1, 1)
    return CObject(field, TorsionPart(()), lat)


def torsion_cyclic(field: FieldSpec, n: int, a: int) -> CObject:
    return CObject(field, TorsionPart.of([(n, a)]), GradedLattice(field, 0, 0, ()))


# ---------------------------------------------------------------------------
# structural functors


def shift(X: CObject, s: int) -> CObject:
    """Degree shift: torsion (n, a) to (n, a+s), lattice jumps e to e-s."""
    return CObject(X.field, X.torsion.shifted(s), shift_lattice(X.lattice, s))


def sigma(X: CObject) -> CObject:
    """Swap the two ambient coordinate types; torsion is untouched."""
    return CObject(X.field, X.torsion, sigma_lattice(X.lattice))


def serre_twist(X: CObject) -> CObject:
    """The twist V: sigma followed by shift by -1; acts as the translate on objects."""
    return shift(sigma(X), -1)


def serre_untwist(X: CObject) -> CObject:
    """Inverse of the twist: shift by +1 followed by sigma."""
    return sigma(shift(X, 1))


def direct_sum(X: CObject, Y: CObject):
    """Direct sum with embedding data.

    Returns (Z, embed_X, embed_Y, tmap_X, tmap_Y): the ambient embedding
    matrices for the lattice parts and, for each input, the map from its
    torsion summand indices to summand indices of Z.
    """
    check_same_field(X.field, Y.field)
    lat, e1, e2 = lattice_direct_sum(X.lattice, Y.lattice)
    merged = []
    for src_tag, T in (("X", X.torsion), ("Y", Y.torsion)):
        for i, s in enumerate(T.summands):
            merged.append((s, src_tag, i))
    merged.sort(key=lambda t: t[0])
    tmap_x = {}
    tmap_y = {}
    for new_idx, (_, tag, i) in enumerate(merged):
        if tag == "X":
            tmap_x[i] = new_idx
        else:
            tmap_y[i] = new_idx
    Z = CObject(X.field, TorsionPart(tuple(s for s, _, _ in merged)), lat)
    return Z, e1, e2, tmap_x, tmap_y


def direct_sum_many(objs):
    """Iterated direct sum; returns (Z, per-input embedding data)."""
    if not objs:
        raise ZdinftyError("empty direct sum needs an explicit field")
    acc = objs[0]
    F = acc.field
    embeds = [(linalg.identity(F, acc.rank), {i: i for i in range(len(acc.torsion.summands))})]
    for Y in objs[1:]:
        acc2, e1, e2, t1, t2 = direct_sum(acc, Y)
        embeds = [
            (linalg.mat_mul(F, e1, emb), {i: t1[j] for i, j in tmap.items()})
            for emb, tmap in embeds
        ]
        embeds.append((e2, t2))
        acc = acc2
    return acc, embeds


# ---------------------------------------------------------------------------
# symbolic injectives


@dataclass(frozen=True)
class InjectiveProfile:
    """A finite direct sum of the three kinds of indecomposable injectives.

    ``divisible`` lists cutoffs c, each standing for the x-divisible torsion
    module k[x,x^-1]/x^c k[x] (alive in all degrees below c).
    """

    e0_copies: int
    e1_copies: int
    divisible: tuple

    def is_zero(self) -> bool:
        return self.e0_copies == 0 and self.e1_copies == 0 and not self.divisible


def injective_resolution(X: CObject):
    """Two-step resolution by indecomposable injectives.

    The lattice embeds in its localization, whose cokernel is divisible with
    cutoffs the jump multiset; a torsion summand embeds in its divisible hull
    with cutoff n - a, leaving a hull with cutoff -a.  Returns
    (description, I0, I1).
    """
    lat_jumps = X.lattice.jump_list
    i0 = InjectiveProfile(
        X.p,
        X.q,
        tuple(sorted(n - a for n, a in X.torsion.summands)),
    )
    i1 = InjectiveProfile(
        0,
        0,
        tuple(sorted(list(lat_jumps) + [-a for _, a in X.torsion.summands])),
    )
    desc = (
        "lattice part embeds in its localization; "
        "each torsion generator maps to its divisible hull in the same degree"
    )
    if X.is_zero():
        return desc, InjectiveProfile(0, 0, ()), InjectiveProfile(0, 0, ())
    return desc, i0, i1


# ---------------------------------------------------------------------------
# window models and presentations


def window_bounds(X: CObject, pad_low: int = 0, pad_high: int = 1):
    """A degree window on which X is fully visible and stable at the top."""
    lows = [j for j, _ in X.lattice.steps]
    highs = list(lows)
    td = X.torsion.min_degree()
    if td is not None:
        lows.append(td)
        highs.append(X.torsion.max_degree())
    if not lows:
        return (0, 1)
    return (min(lows) - pad_low, max(highs) + pad_high)


def model_of(X: CObject, lo: int, hi: int):
    """Window model of X with its localization chart.

    Degree-d basis: adapted lattice generators with jump <= d, then torsion
    slots, in the order of ``module_slots_at``.  Requires hi beyond all jumps
    and torsion support.
    """
    F = X.field
    if X.rank > 0 and hi < X.lattice.max_jump():
        raise ZdinftyError("window top below the lattice jumps")
    td = X.torsion.max_degree()
    if td is not None and hi <= td:
        raise ZdinftyError("window top does not kill the torsion")
    dims = []
    xmaps = []
    slot_table = {d: X.module_slots_at(d) for d in range(lo, hi + 1)}
    for d in range(lo, hi + 1):
        dims.append(len(slot_table[d]))
    for d in range(lo, hi):
        src, dst = slot_table[d], slot_table[d + 1]
        pos = {lab: k for k, lab in enumerate(dst)}
        rows = [[F.zero] * len(src) for _ in dst]
        for col, lab in enumerate(src):
            kind, idx = lab
            if kind == "F":
                rows[pos[lab]][col] = F.one
            elif lab in pos:
                rows[pos[lab]][col] = F.one
        xmaps.append(tuple(tuple(r) for r in rows))
    wm = window.WindowModule(F, lo, hi, tuple(dims), tuple(xmaps))
    gens = X.lattice.generators()
    chart_cols = [dir for _, dir in gens]
    chart = linalg.transpose(chart_cols) if chart_cols else ()
    return wm, chart, slot_table


def from_window(wm: window.WindowModule, chart, p: int, q: int) -> CObject:
    summands, lat = window.reconstruct_parts(wm, chart, p, q)
    return CObject(wm.field, TorsionPart(summands), lat)


@dataclass(frozen=True)
class Presentation:
    """Free graded presentation: generators (rows) and relations (columns).

    entry(i, j) is homogeneous of degree col_degrees[j] - row_degrees[i];
    ``loc_iso`` is a constant r x rows matrix sending generator classes to
    ambient coordinates after inverting x, and ``type_marks`` assigns each of
    the r localized coordinates its type.
    """

    field: FieldSpec
    row_degrees: tuple
    col_degrees: tuple
    entries: tuple  # rows x cols of Poly
    type_marks: tuple
    loc_iso: tuple

    def __post_init__(self):
        for i, row in enumerate(self.entries):
            if len(row) != len(self.col_degrees):
                raise DimensionMismatch("presentation row of wrong length")
            for j, e in enumerate(row):
                want = self.col_degrees[j] - self.row_degrees[i]
                if e.is_zero():
                    continue
                if not e.is_homogeneous() or e.degree != want:
                    raise ZdinftyError(
                        f"entry ({i},{j}) must be homogeneous of degree {want}"
                    )
        if len(self.entries) != len(self.row_degrees):
            raise DimensionMismatch("presentation needs one row per generator")

    def scalar_relations(self):
        """Constant coefficients alpha[i][j] of the homogeneous entries."""
        F = self.field
        out = []
        for i, row in enumerate(self.entries):
            out.append(
                tuple(
                    e.coeff(self.col_degrees[j] - self.row_degrees[i])
                    for j, e in enumerate(row)
                )
            )
        return tuple(out)


def presentation_of_polys(field, row_degrees, col_degrees, entry_polys, type_marks, loc_iso):
    entries = tuple(
        tuple(
            e if isinstance(e, Poly) else Poly.of(field, e)
            for e in row
        )
        for row in entry_polys
    )
    return Presentation(
        field,
        tuple(row_degrees),
        tuple(col_degrees),
        entries,
        tuple(type_marks),
        tuple(tuple(r) for r in loc_iso),
    )


def from_presentation(P: Presentation) -> CObject:
    """Canonical object presented by generators and homogeneous relations.

    The torsion summands are the elementary divisors of the cokernel; the
    lattice is its image in the localization, with types from ``type_marks``.
    Raises InconsistentTypes when ``loc_iso`` does not kill the relations and
    NotFullRank when the localized rank differs from len(type_marks).
    """
    F = P.field
    nrows = len(P.row_degrees)
    r = len(P.type_marks)
    alpha = P.scalar_relations()

    for row in P.loc_iso:
        if len(row) != nrows:
            raise DimensionMismatch("loc_iso must have one column per generator")
    if len(P.loc_iso) != r:
        raise DimensionMismatch("loc_iso must have one row per localized coordinate")

    # loc_iso must factor through the localized cokernel.
    prod = linalg.mat_mul(F, P.loc_iso, alpha) if P.col_degrees else ()
    for row in prod:
        for c in row:
            if not F.is_zero(c):
                raise InconsistentTypes("loc_iso does not vanish on the relations")
    rel_rank = linalg.rank(F, linalg.transpose(alpha)) if P.col_degrees else 0
    if nrows - rel_rank != r or linalg.rank(F, P.loc_iso) != r:
        raise NotFullRank(
            f"localized rank is {nrows - rel_rank}, expected {r}"
        )

    # Normalize coordinates: type-0 rows of loc_iso first.
    order = sorted(range(r), key=lambda i: (P.type_marks[i], i))
    loc = tuple(P.loc_iso[i] for i in order)
    p = sum(1 for t in P.type_marks if t == 0)
    q = r - p

    if nrows == 0:
        return zero_object(F)
    lo = min(P.row_degrees)
    hi = max(list(P.row_degrees) + list(P.col_degrees)) + 1

    ambient_dims = {}
    relation_rows = {}
    for d in range(lo, hi + 1):
        ambient_dims[d] = nrows
        rows = []
        # slots of dead generators (degree below the generator) are relations
        for i, rd in enumerate(P.row_degrees):
            if d < rd:
                vec = [F.zero] * nrows
                vec[i] = F.one
                rows.append(tuple(vec))
        for j, cd in enumerate(P.col_degrees):
            if d >= cd:
                rows.append(tuple(alpha[i][j] for i in range(nrows)))
        relation_rows[d] = rows

    wm, reps, project = window.quotient_model(F, lo, hi, ambient_dims, relation_rows)
    # chart: basis slot i of the top degree maps to loc_iso column i
    chart_cols = []
    for i in reps[hi]:
        chart_cols.append(tuple(loc[t][i] for t in range(r)))
    chart = linalg.transpose(chart_cols) if chart_cols else ()
    return from_window(wm, chart, p, q)
