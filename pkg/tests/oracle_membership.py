"""Brute-force membership oracle: solvability of the k[x]-linear system.

Decides v in the module generated by x^jump_j * dir_j by solving for
bounded-degree polynomial coefficients c_j(x), one linear equation per
ambient coordinate per degree.  Independent of the filtration-based path.
"""

def kx_membership(field, gens, degree, coords, max_coeff_degree=None):
    """Whether x^degree * coords = sum c_j(x) x^jump_j dir_j is solvable."""
    if all(field.is_zero(c) for c in coords):
        return True
    if not gens:
        return False
    r = len(coords)
    if max_coeff_degree is None:
        max_coeff_degree = degree - min(j for j, _ in gens)
    if max_coeff_degree < 0:
        return False
    # unknowns: c[j][t] for generator j, coefficient of x^t, 0 <= t <= D
    D = max_coeff_degree
    nunk = len(gens) * (D + 1)
    degrees = sorted({j + t for j, _ in gens for t in range(D + 1)} | {degree})
    rows = []
    rhs = []
    for delta in degrees:
        for i in range(r):
            row = [field.zero] * nunk
            nonzero = False
            for jdx, (jump, dir) in enumerate(gens):
                t = delta - jump
                if 0 <= t <= D and not field.is_zero(dir[i]):
                    row[jdx * (D + 1) + t] = dir[i]
                    nonzero = True
            target = coords[i] if delta == degree else field.zero
            if nonzero or not field.is_zero(target):
                rows.append(row)
                rhs.append(target)
    return _solvable(field, rows, rhs)


def _solvable(field, rows, rhs):
    work = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(work[0]) if work else 0
    rank_row = 0
    for col in range(ncols - 1):
        piv = None
        for i in range(rank_row, len(work)):
            if not field.is_zero(work[i][col]):
                piv = i
                break
        if piv is None:
            continue
        work[rank_row], work[piv] = work[piv], work[rank_row]
        inv = field.inv(work[rank_row][col])
        work[rank_row] = [field.mul(inv, a) for a in work[rank_row]]
        for i in range(len(work)):
            if i != rank_row and not field.is_zero(work[i][col]):
                c = work[i][col]
                work[i] = [
                    field.sub(a, field.mul(c, b))
                    for a, b in zip(work[i], work[rank_row])
                ]
        rank_row += 1
    for row in work[rank_row:]:
        if not field.is_zero(row[-1]):
            return False
    for i in range(rank_row):
        if all(field.is_zero(a) for a in work[i][:-1]) and not field.is_zero(work[i][-1]):
            return False
    return True
