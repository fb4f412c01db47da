"""Exact linear algebra over the integers.

Matrices are plain lists of row lists holding Python ints, so every
computation is arbitrary precision by construction.  The workhorse is
Smith normal form with unimodular transforms; kernels, exact solving
and lattice membership are derived from it.
"""

from __future__ import annotations


def zeros(rows: int, cols: int) -> list[list[int]]:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> list[list[int]]:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def copy_matrix(m):
    return [row[:] for row in m]


def shape(m) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def transpose(m):
    rows, cols = shape(m)
    return [[m[i][j] for i in range(rows)] for j in range(cols)]


def matmul(a, b):
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValueError(f"shape mismatch: {ra}x{ca} times {rb}x{cb}")
    out = zeros(ra, cb)
    for i in range(ra):
        ai = a[i]
        oi = out[i]
        for k in range(ca):
            aik = ai[k]
            if aik:
                bk = b[k]
                for j in range(cb):
                    oi[j] += aik * bk[j]
    return out


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def hstack(a, b):
    ra, _ = shape(a)
    rb, _ = shape(b)
    if a and b and ra != rb:
        raise ValueError("row mismatch in hstack")
    rows = max(ra, rb)
    return [
        (a[i] if a else []) + (b[i] if b else [])
        for i in range(rows)
    ]


def is_zero_matrix(m) -> bool:
    return all(all(x == 0 for x in row) for row in m)


def diagonal(m) -> list[int]:
    rows, cols = shape(m)
    return [m[i][i] for i in range(min(rows, cols))]


def _smith(m, want_inverses: bool):
    """Diagonalize ``m`` by unimodular row/column operations.

    Returns (U, S, V, Uinv, Vinv); the inverse slots are None unless
    requested.  Invariants maintained throughout: U*M*V == S,
    U*Uinv == I, Vinv*V == I.
    """
    rows, cols = shape(m)
    s = copy_matrix(m)
    u = identity(rows)
    v = identity(cols)
    uinv = identity(rows) if want_inverses else None
    vinv = identity(cols) if want_inverses else None

    def row_add(i, j, q):
        # R_i += q*R_j on S and U; inverse column op on Uinv.
        si, sj = s[i], s[j]
        for c in range(cols):
            si[c] += q * sj[c]
        ui, uj = u[i], u[j]
        for c in range(rows):
            ui[c] += q * uj[c]
        if uinv is not None:
            for r in range(rows):
                uinv[r][j] -= q * uinv[r][i]

    def col_add(j, i, q):
        # C_j += q*C_i on S and V; inverse row op on Vinv.
        for r in range(rows):
            s[r][j] += q * s[r][i]
        for r in range(cols):
            v[r][j] += q * v[r][i]
        if vinv is not None:
            vi, vj = vinv[i], vinv[j]
            for c in range(cols):
                vi[c] -= q * vj[c]

    def row_swap(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]
        if uinv is not None:
            for r in range(rows):
                uinv[r][i], uinv[r][j] = uinv[r][j], uinv[r][i]

    def col_swap(i, j):
        for r in range(rows):
            s[r][i], s[r][j] = s[r][j], s[r][i]
        for r in range(cols):
            v[r][i], v[r][j] = v[r][j], v[r][i]
        if vinv is not None:
            vinv[i], vinv[j] = vinv[j], vinv[i]

    def row_negate(i):
        s[i] = [-x for x in s[i]]
        u[i] = [-x for x in u[i]]
        if uinv is not None:
            for r in range(rows):
                uinv[r][i] = -uinv[r][i]

    n = min(rows, cols)
    for t in range(n):
        # Pivot: smallest nonzero |entry| in the trailing block.
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = s[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot[0] != t:
            row_swap(t, pivot[0])
        if pivot[1] != t:
            col_swap(t, pivot[1])

        while True:
            # Clear column t with Euclidean row steps.
            dirty = False
            for i in range(t + 1, rows):
                if s[i][t] != 0:
                    q = s[i][t] // s[t][t]
                    row_add(i, t, -q)
                    if s[i][t] != 0:
                        row_swap(i, t)
                        dirty = True
            if dirty:
                continue
            # Clear row t with Euclidean column steps.
            for j in range(t + 1, cols):
                if s[t][j] != 0:
                    q = s[t][j] // s[t][t]
                    col_add(j, t, -q)
                    if s[t][j] != 0:
                        col_swap(j, t)
                        dirty = True
            if dirty:
                continue
            # Fold in any entry the pivot does not divide yet.
            d = s[t][t]
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if s[i][j] % d != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender, 1)
        if s[t][t] < 0:
            row_negate(t)

    return u, s, v, uinv, vinv


def smith_normal_form(m):
    """Smith normal form with transforms.

    Returns (U, S, V) with U, V unimodular, U*M*V == S diagonal,
    diagonal entries nonnegative with d1 | d2 | ... .  Total on every
    rectangular integer matrix, including empty ones.

    >>> u, s, v = smith_normal_form([[2, 4], [6, 8]])
    >>> diagonal(s)
    [2, 4]
    >>> matmul(matmul(u, [[2, 4], [6, 8]]), v) == s
    True
    """
    u, s, v, _, _ = _smith(m, want_inverses=False)
    return u, s, v


def smith_with_inverses(m):
    """Like :func:`smith_normal_form` but also returns Uinv and Vinv."""
    return _smith(m, want_inverses=True)


def column_reduce(m):
    """A column-Hermite generating matrix of the same column lattice.

    Unimodular column operations only, zero columns dropped and entries
    of earlier pivots reduced modulo later pivots, so repeated kernel
    and presentation computations do not accumulate huge entries.
    """
    rows, cols = shape(m)
    cols_v = [[m[r][c] for r in range(rows)] for c in range(cols)]
    cols_v = [c for c in cols_v if any(c)]
    pivots = []
    for r in range(rows):
        while True:
            nz = [c for c in cols_v if c[r] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda c: abs(c[r]))
            a, b = nz[0], nz[1]
            q = b[r] // a[r]
            for i in range(rows):
                b[i] -= q * a[i]
            if not any(b):
                cols_v.remove(b)
        nz = [c for c in cols_v if c[r] != 0]
        if nz:
            piv = nz[0]
            cols_v.remove(piv)
            if piv[r] < 0:
                piv[:] = [-x for x in piv]
            for p in pivots:
                if p[r]:
                    q = p[r] // piv[r]
                    if q:
                        for i in range(rows):
                            p[i] -= q * piv[i]
            pivots.append(piv)
    return [[p[r] for p in pivots] for r in range(rows)] if pivots else zeros(rows, 0)


def kernel_basis(m):
    """Columns (as a matrix) forming a basis of the integer kernel of ``m``.

    >>> kernel_basis([[1, 2], [2, 4]])
    [[2], [-1]]
    """
    rows, cols = shape(m)
    if cols == 0:
        return []
    if rows == 0:
        return column_reduce(identity(cols))
    _, s, v, _, _ = _smith(m, want_inverses=False)
    diag = diagonal(s)
    free = [j for j in range(cols) if j >= len(diag) or diag[j] == 0]
    return column_reduce([[v[r][j] for j in free] for r in range(cols)])


def solve_columns(m, b):
    """Exact solutions X of M*X == B, or None if no integer solution.

    ``b`` is given column-wise as a matrix with the same number of rows
    as ``m``; one particular solution is returned per column.
    """
    rows, cols = shape(m)
    rb, cb = shape(b)
    if rows != rb and not (rows == 0 and all(not row for row in b)):
        if rows != rb:
            raise ValueError("row mismatch in solve")
    if cb == 0:
        return zeros(cols, 0)
    u, s, v, _, _ = _smith(m, want_inverses=False)
    diag = diagonal(s)
    ub = matmul(u, b) if rows else zeros(0, cb)
    xs = zeros(cols, cb)
    for c in range(cb):
        z = [0] * cols
        for i in range(rows):
            rhs = ub[i][c]
            d = diag[i] if i < len(diag) else 0
            if d == 0:
                if rhs != 0:
                    return None
            else:
                if rhs % d != 0:
                    return None
                if i < cols:
                    z[i] = rhs // d
        x = mat_vec(v, z)
        for r in range(cols):
            xs[r][c] = x[r]
    return xs


def solve(m, vec):
    """One integer solution x of M x == vec, or None."""
    res = solve_columns(m, [[x] for x in vec])
    if res is None:
        return None
    return [row[0] for row in res]


def lattice_contains(gens, vec) -> bool:
    """Whether ``vec`` lies in the column span of ``gens`` over Z."""
    return solve(gens, vec) is not None


def kernel_mod_lattice(a, rels):
    """Generators of {x : A x in colspan(rels)}.

    ``a`` and ``rels`` must have the same number of rows.  The result
    is a matrix whose columns generate the preimage lattice; it always
    contains the kernel of ``a`` itself.
    """
    rows, cols = shape(a)
    _, rc = shape(rels)
    if rc == 0:
        return kernel_basis(a)
    block = hstack(a, rels)
    ker = kernel_basis(block)
    # Project solutions (x; y) onto the x part.
    proj = [ker[r] for r in range(cols)] if ker else zeros(cols, 0)
    return column_reduce(proj)


def random_unimodular(n: int, rng, steps: int | None = None):
    """A random unimodular matrix together with its inverse.

    Built from elementary shears, swaps and sign flips so the inverse
    is tracked exactly.
    """
    a = identity(n)
    ainv = identity(n)
    if n == 0:
        return a, ainv
    if steps is None:
        steps = 3 * n + 4
    for _ in range(steps):
        kind = rng.randrange(3)
        i = rng.randrange(n)
        j = rng.randrange(n)
        if kind == 0 and i != j:
            q = rng.choice([-2, -1, 1, 2])
            for c in range(n):
                a[i][c] += q * a[j][c]
            for r in range(n):
                ainv[r][j] -= q * ainv[r][i]
        elif kind == 1 and i != j:
            a[i], a[j] = a[j], a[i]
            for r in range(n):
                ainv[r][i], ainv[r][j] = ainv[r][j], ainv[r][i]
        elif kind == 2:
            a[i] = [-x for x in a[i]]
            for r in range(n):
                ainv[r][i] = -ainv[r][i]
    return a, ainv
