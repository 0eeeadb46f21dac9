"""Integer Smith normal form and linear solving modulo n.

Small and deterministic; sizes here are nerve-scale (tens of rows), so the
classical pivot-and-reduce algorithm is plenty.
"""

from __future__ import annotations


def smith_normal_form(mat):
    """U @ M @ V = S with U, V unimodular and S diagonal with divisibility.

    Returns (U, S, V) as lists of lists of ints.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    s = [list(row) for row in mat]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, j, q):           # row_i -= q * row_j
        s[i] = [a - q * b for a, b in zip(s[i], s[j])]
        u[i] = [a - q * b for a, b in zip(u[i], u[j])]

    def col_op(i, j, q):           # col_i -= q * col_j
        for row in s:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        # find the smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if s[i][j] and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                if s[i][t]:
                    q = s[i][t] // s[t][t]
                    row_op(i, t, q)
                    if s[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if s[t][j]:
                    q = s[t][j] // s[t][t]
                    col_op(j, t, q)
                    if s[t][j]:
                        swap_cols(t, j)
                        dirty = True
        if s[t][t] < 0:
            s[t] = [-a for a in s[t]]
            u[t] = [-a for a in u[t]]
        # enforce divisibility into the trailing block
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if s[i][j] % s[t][t]:
                    # fold row i into row t and restart this pivot
                    row_op(t, i, -1)
                    break
            else:
                continue
            break
        else:
            t += 1
            continue
        # restart the same t after the fold
    return u, s, v


def solve_mod(a, b, n: int):
    """One solution x of A x = b (mod n), or None.

    Solves A x + n t = b over the integers via Smith normal form.
    """
    m = len(a)
    cols = len(a[0]) if m else 0
    aug = [list(row) + [n if i == j else 0 for j in range(m)]
           for i, row in enumerate(a)]
    total = cols + m
    u, s, v = smith_normal_form(aug)
    ub = [sum(u[i][k] * b[k] for k in range(m)) for i in range(m)]
    y = [0] * total
    for i in range(m):
        d = s[i][i] if i < total else 0
        if d:
            if ub[i] % d:
                return None
            y[i] = ub[i] // d
        elif ub[i]:
            return None
    x = [sum(v[i][k] * y[k] for k in range(total)) % n for i in range(cols)]
    return x
