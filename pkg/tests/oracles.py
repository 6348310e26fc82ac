"""Independent reference computations over plain Fractions.

Nothing here imports the package's arithmetic: matrices are lists of lists
of Fractions, words are multiplied naively and ranks come from textbook
Gaussian elimination. Module matrices are rebuilt from closed formulas.
"""

from fractions import Fraction
from itertools import product


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [[sum((a[i][k] * b[k][j] for k in range(m)), Fraction(0)) for j in range(p)] for i in range(n)]


def mat_add(a, b, c=1):
    return [[x + c * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[c * x for x in r] for r in a]


def eye(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(n):
    return [[Fraction(0)] * n for _ in range(n)]


def is_zero(a):
    return all(x == 0 for r in a for x in r)


def dense_rank(rows):
    rows = [[Fraction(x) for x in r] for r in rows]
    if not rows:
        return 0
    rank = 0
    ncols = len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def dense_solve(rows, rhs):
    """One solution of rows . x = rhs (free unknowns zero), or None."""
    n = len(rows[0])
    aug = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        aug[r] = [x / aug[r][c] for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(row[n] != 0 for row in aug[r:]):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return x


# -- closed-form modules ---------------------------------------------------------


def qint(n, q):
    return sum((q ** (n - 1 - 2 * i) for i in range(n)), Fraction(0))


def sl2_irrep(n, q):
    """K u_m = q^(n-2m) u_m, E u_m = [n-m+1] u_(m-1), F u_m = [m+1] u_(m+1)."""
    d = n + 1
    K, E, F = zeros(d), zeros(d), zeros(d)
    for m in range(d):
        K[m][m] = q ** (n - 2 * m)
        if m >= 1:
            E[m - 1][m] = qint(n - m + 1, q)
        if m + 1 < d:
            F[m + 1][m] = qint(m + 1, q)
    Ki = [[(1 / x if x else x) for x in r] for r in K]
    return K, Ki, E, F


def evaluation_letters(n, q, v):
    """e1 -> E, f1 -> F, K1 -> K, e0 -> vF, f0 -> v^-1 E, K0 -> K^-1."""
    K, Ki, E, F = sl2_irrep(n, q)
    return {
        "e1": E, "f1": F, "K1": K, "K1i": Ki,
        "e0": mat_scale(F, v), "f0": mat_scale(E, 1 / v), "K0": Ki, "K0i": K,
    }


def qoa_pair(n, q, v, kp, km, ep, em):
    L = evaluation_letters(n, q, v)
    W0 = mat_add(mat_add(mat_scale(L["e1"], kp), mat_scale(mat_mul(L["f1"], L["K1"]), km / q)), mat_scale(L["K1"], ep))
    W1 = mat_add(mat_add(mat_scale(L["e0"], km), mat_scale(mat_mul(L["f0"], L["K0"]), kp / q)), mat_scale(L["K0"], em))
    return W0, W1


def augmented_quad(n, q, v, ep, em):
    L = evaluation_letters(n, q, v)
    c = q**2 - q**-2
    K0 = mat_scale(L["K1"], ep)
    K1 = mat_scale(L["K0"], em)
    KK = mat_mul(L["K1"], L["K0"])
    Z1 = mat_scale(mat_add(mat_scale(mat_mul(L["e0"], L["K1"]), ep / q), mat_scale(mat_mul(L["f1"], KK), em)), c)
    Zt1 = mat_scale(mat_add(mat_scale(mat_mul(L["e1"], L["K0"]), em / q), mat_scale(mat_mul(L["f0"], KK), ep)), c)
    return K0, K1, Z1, Zt1


def comm(a, b, lam=1):
    return mat_add(mat_mul(a, b), mat_mul(b, a), -lam)


def qbr(a, b, lam):
    """lam*a*b - lam^-1*b*a"""
    return mat_add(mat_scale(mat_mul(a, b), lam), mat_mul(b, a), -1 / lam)


def nested(x, y, q):
    return comm(x, qbr(x, qbr(x, y, q), 1 / q))


def qdg_residuals(W0, W1, q, rho):
    out = []
    for x, y in ((W0, W1), (W1, W0)):
        inner = nested(x, y, q)
        out.append(mat_add(inner, comm(x, y), -rho))
    return out


# -- naive word algebra ----------------------------------------------------------


def words(D, letters=2):
    out = [()]
    for d in range(1, D + 1):
        out += list(product(range(letters), repeat=d))
    return out


def word_value(word, gens):
    m = eye(len(gens[0]))
    for i in word:
        m = mat_mul(m, gens[i])
    return m


def davies_kernel_dimension(W0, W1, D):
    ws = words(D)
    cols = [word_value(w, (W0, W1)) for w in ws]
    d = len(W0)
    rows = [[c[i][j] for c in cols] for i in range(d) for j in range(d)]
    return len(ws) - dense_rank(rows)
