"""Graded Smith-type normal form oracle over k[x] for monomial matrices.

Homogeneous entries of a graded presentation are monomials, so the matrix
diagonalizes by homogeneous row and column operations with pivots of minimal
x-valuation and no gcd iteration.  Returns the torsion summands (length,
shift) and the degrees of the free generators of the cokernel.
"""


def graded_smith(field, row_degrees, col_degrees, entries):
    """Diagonalize; entries[i][j] is the scalar coefficient of the monomial
    x^(col_degrees[j]-row_degrees[i]) (zero when the entry vanishes).

    Returns (torsion, free_degrees): torsion as a sorted tuple of (n, a) with
    generator degree -a, free_degrees the sorted degrees of free generators.
    """
    rdeg = list(row_degrees)
    cdeg = list(col_degrees)
    A = [list(r) for r in entries]
    m, n = len(rdeg), len(cdeg)
    row_alive = list(range(m))
    col_alive = list(range(n))
    torsion = []
    killed_rows = []

    def valuation(i, j):
        return cdeg[j] - rdeg[i]

    while True:
        best = None
        for i in row_alive:
            for j in col_alive:
                if not field.is_zero(A[i][j]):
                    v = valuation(i, j)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        v, pi, pj = best
        assert v >= 0, "homogeneous matrix with negative-valuation entry"
        # clear column pj
        for i in row_alive:
            if i != pi and not field.is_zero(A[i][pj]):
                shift = rdeg[pi] - rdeg[i]
                assert shift >= 0
                c = field.div(A[i][pj], A[pi][pj])
                for j in col_alive:
                    if not field.is_zero(A[pi][j]):
                        # x^shift * row pi scaled lands in row i's grading
                        A[i][j] = field.sub(A[i][j], field.mul(c, A[pi][j]))
        # clear row pi
        for j in col_alive:
            if j != pj and not field.is_zero(A[pi][j]):
                c = field.div(A[pi][j], A[pi][pj])
                for i in row_alive:
                    if not field.is_zero(A[i][pj]):
                        A[i][j] = field.sub(A[i][j], field.mul(c, A[i][pj]))
        row_alive.remove(pi)
        col_alive.remove(pj)
        killed_rows.append(pi)
        if v > 0:
            torsion.append((v, -rdeg[pi]))
    free_degrees = sorted(rdeg[i] for i in row_alive)
    return tuple(sorted(torsion)), tuple(free_degrees)
