"""Small integer-lattice helpers (kernels and Hermite forms over Z)."""


def _xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def integer_kernel(rows, ncols):
    """Basis of {v in Z^ncols : row . v = 0 for every row}.

    Column-reduces the matrix while tracking the unimodular transform; the
    transformed columns whose image vanishes span the kernel.
    """
    m = [list(r) for r in rows]
    # columns of the transform, one per variable
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    pivot_col = 0
    for r in range(len(m)):
        if pivot_col >= ncols:
            break
        # gcd-reduce entries of row r in columns pivot_col.. into pivot_col
        for c in range(pivot_col + 1, ncols):
            a, b = m[r][pivot_col], m[r][c]
            if b == 0:
                continue
            g, s, t = _xgcd(a, b)
            p, q = a // g, b // g
            for row in m:
                x, y = row[pivot_col], row[c]
                row[pivot_col], row[c] = s * x + t * y, -q * x + p * y
            for row in u:
                x, y = row[pivot_col], row[c]
                row[pivot_col], row[c] = s * x + t * y, -q * x + p * y
        if m[r][pivot_col] != 0:
            pivot_col += 1
    return [tuple(u[i][c] for i in range(ncols)) for c in range(pivot_col, ncols)]


def hermite_rows(vectors):
    """Row Hermite normal form of the lattice spanned by 2-D integer vectors.

    Returns a tuple of 0, 1 or 2 basis vectors. Rank one: the generator with
    its first nonzero entry positive. Rank two: ((a, b), (0, d)) with a, d > 0
    and 0 <= b < d.
    """
    vecs = [tuple(v) for v in vectors if any(v)]
    if not vecs:
        return ()
    # gcd-combine first coordinates
    a_vec = None
    rest = []
    for v in vecs:
        if a_vec is None:
            a_vec = v
            continue
        if v[0] == 0:
            rest.append(v)
            continue
        if a_vec[0] == 0:
            rest.append(a_vec)
            a_vec = v
            continue
        g, s, t = _xgcd(a_vec[0], v[0])
        p, q = a_vec[0] // g, v[0] // g
        new_a = (s * a_vec[0] + t * v[0], s * a_vec[1] + t * v[1])
        other = (-q * a_vec[0] + p * v[0], -q * a_vec[1] + p * v[1])
        a_vec = new_a
        rest.append(other)
    d = 0
    for v in rest:
        assert v[0] == 0
        d = _xgcd(d, v[1])[0]
    if a_vec[0] == 0:
        # everything lies on the second axis
        d = _xgcd(d, a_vec[1])[0]
        return ((0, d),) if d else ()
    if a_vec[0] < 0:
        a_vec = (-a_vec[0], -a_vec[1])
    if d == 0:
        return (a_vec,)
    return ((a_vec[0], a_vec[1] % d), (0, d))


def kernel_mod(constraints):
    """Lattice {(i, j) in Z^2 : a*i + b*j = 0 mod m for each (a, b, m)}.

    ``m == 0`` means an exact integer equation.
    """
    mods = [m for (_, _, m) in constraints if m]
    nvars = 2 + len(mods)
    rows = []
    slack = 2
    for a, b, m in constraints:
        row = [a, b] + [0] * len(mods)
        if m:
            row[slack] = m
            slack += 1
        rows.append(row)
    ker = integer_kernel(rows, nvars)
    return hermite_rows([(v[0], v[1]) for v in ker])
