"""Independent oracles for the test suite.

Everything here is deliberately reimplemented from scratch on plain
Fraction lists, so a bug in the package's elimination code cannot hide
behind itself.  Slow is fine; these run on desk-scale inputs only.
"""

from fractions import Fraction


def frac_rows(M):
    """Copy a package matrix into plain Fraction rows."""
    return [
        [Fraction(int(x.numerator), int(x.denominator)) for x in M.row(i)]
        for i in range(M.nrows)
    ]


def gauss_rank(rows):
    """Rank by straightforward fraction-exact Gaussian elimination."""
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def matrix_rank(M):
    return gauss_rank(frac_rows(M))


def nullity(M):
    return M.ncols - matrix_rank(M)


def socle_dim(M):
    """dim ker X, computed independently: dim Hom(k, M) by hand."""
    return M.X.ncols - matrix_rank(M.X)


def intertwiner_space_dim(A, B):
    """dim of the solution space of X_B @ G = G @ X_A.

    The constraint is assembled entry by entry over the d_B x d_A
    unknowns of G, then solved by the local elimination, with no help
    from the package.
    """
    XA = frac_rows(A.X)
    XB = frac_rows(B.X)
    da, db = A.dim, B.dim
    if da == 0 or db == 0:
        return 0
    rows = []
    for i in range(db):
        for j in range(da):
            row = [Fraction(0)] * (db * da)
            for k in range(db):
                row[k * da + j] += XB[i][k]
            for l in range(da):
                row[i * da + l] -= XA[l][j]
            rows.append(row)
    return db * da - gauss_rank(rows)


def is_exact_at(prev_matrix, next_matrix):
    """Exactness of  . --prev--> V --next--> .  by rank arithmetic."""
    if (next_matrix @ prev_matrix).is_zero() is False:
        return False
    dim_v = next_matrix.ncols
    return matrix_rank(prev_matrix) == dim_v - matrix_rank(next_matrix)
