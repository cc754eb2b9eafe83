"""Dense matrices over exact rationals or complex floats.

Rational mode uses Fraction entries and Bareiss elimination, so every
determinant is exact. Floating mode hands the work to numpy.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Integral, Rational

import numpy as np

EXACT = "exact"
FLOAT = "float"

POLE_RTOL = 1e-12


class LinAlgError(ArithmeticError):
    pass


class ModeError(TypeError):
    pass


def scalar_mode(x) -> str:
    if isinstance(x, (Fraction, Integral)) and not isinstance(x, bool):
        return EXACT
    if isinstance(x, (complex, float)):
        return FLOAT
    raise ModeError(f"unsupported scalar {x!r}")


def exponent_mode(s) -> str:
    """Integer exponents give exact powers; everything else is floating."""
    return EXACT if isinstance(s, Integral) and not isinstance(s, bool) else FLOAT


def coerce(x, mode: str):
    if mode == EXACT:
        if isinstance(x, Rational):
            return Fraction(x)
        raise ModeError(f"cannot use {x!r} in exact mode")
    return complex(x)


def neg_power(n: int, s):
    """n^(-s) with the convention 0^(-s) = 0 (a path with no lift contributes nothing)."""
    if n == 0:
        return Fraction(0) if exponent_mode(s) == EXACT else 0j
    if exponent_mode(s) == EXACT:
        return Fraction(n) ** (-int(s))
    return cmath.exp(-complex(s) * math.log(n))


class Matrix:
    """Square matrix with row/column labels and a single scalar mode."""

    __slots__ = ("labels", "rows", "mode")

    def __init__(self, rows, labels=None, mode: str | None = None):
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise LinAlgError("matrix must be square")
        if mode is None:
            modes = {scalar_mode(x) for r in rows for x in r}
            if len(modes) > 1:
                raise ModeError("mixed exact and floating entries in one matrix")
            mode = modes.pop() if modes else EXACT
        self.mode = mode
        self.rows = tuple(tuple(coerce(x, mode) for x in r) for r in rows)
        self.labels = tuple(labels) if labels is not None else tuple(range(n))
        if len(self.labels) != n:
            raise LinAlgError("label count does not match dimension")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entry(self, a, b):
        return self.rows[self.labels.index(a)][self.labels.index(b)]

    def _like(self, rows) -> "Matrix":
        return Matrix(rows, self.labels, self.mode)

    def __add__(self, other: "Matrix") -> "Matrix":
        _same(self, other)
        return self._like([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        _same(self, other)
        return self._like([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        _same(self, other)
        cols = list(zip(*other.rows))
        zero = _zero(self.mode)
        return self._like([[sum((x * y for x, y in zip(r, c)), zero) for c in cols] for r in self.rows])

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.rows == other.rows and self.labels == other.labels

    def vecmul(self, v) -> list:
        """Row vector times matrix."""
        zero = _zero(self.mode)
        n = self.dim
        return [sum((v[i] * self.rows[i][j] for i in range(n)), zero) for j in range(n)]

    def to_numpy(self) -> np.ndarray:
        return np.array(self.rows, dtype=complex if self.mode == FLOAT else object).reshape(self.dim, self.dim)

    def max_norm(self) -> float:
        return max((abs(x) for r in self.rows for x in r), default=0.0)

    def __repr__(self) -> str:
        return f"Matrix({self.dim}x{self.dim}, {self.mode})"


def _zero(mode):
    return Fraction(0) if mode == EXACT else 0j


def _one(mode):
    return Fraction(1) if mode == EXACT else 1 + 0j


def _same(a: Matrix, b: Matrix) -> None:
    if a.mode != b.mode:
        raise ModeError("matrices in different modes")
    if a.dim != b.dim:
        raise LinAlgError("dimension mismatch")


def identity(n: int, mode: str = EXACT, labels=None) -> Matrix:
    return Matrix([[_one(mode) if i == j else _zero(mode) for j in range(n)] for i in range(n)],
                  labels, mode)


def zeros(n: int, mode: str = EXACT, labels=None) -> Matrix:
    return Matrix([[_zero(mode)] * n for _ in range(n)], labels, mode)


def outer(col, row, mode: str, labels=None) -> Matrix:
    """colᵀ · row as a square matrix."""
    return Matrix([[x * y for y in row] for x in col], labels, mode)


def dot(u, v, mode: str):
    return sum((x * y for x, y in zip(u, v)), _zero(mode))


def bareiss_det(rows) -> Fraction:
    """Fraction-free elimination; exact divisions only."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return Fraction(1)
    # clear denominators so the elimination stays in the integers
    scale = Fraction(1)
    for i, r in enumerate(a):
        den = math.lcm(*(Fraction(x).denominator for x in r)) if r else 1
        a[i] = [int(Fraction(x) * den) for x in r]
        scale /= den
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1] * scale


def det(m: Matrix):
    if m.dim == 0:
        return _one(m.mode)
    if m.mode == EXACT:
        return bareiss_det(m.rows)
    return complex(np.linalg.det(m.to_numpy()))


def is_pole_candidate(m: Matrix, d=None) -> bool:
    """Floating-mode near-singularity test |det| < 1e-12 · ‖m‖_max^dim."""
    if m.mode == EXACT:
        return (det(m) if d is None else d) == 0
    d = det(m) if d is None else d
    return abs(d) < POLE_RTOL * max(m.max_norm(), 1e-300) ** m.dim


def solve_left(m: Matrix, b):
    """Solve x·m = b for a row vector x (equivalently mᵀ xᵀ = bᵀ)."""
    n = m.dim
    if n == 0:
        return []
    if m.mode == FLOAT:
        arr = m.to_numpy()
        try:
            return [complex(x) for x in np.linalg.solve(arr.T, np.array(b, dtype=complex))]
        except np.linalg.LinAlgError:
            raise LinAlgError("singular matrix") from None
    return _gauss_solve([list(col) for col in zip(*m.rows)], list(b))


def solve_right(m: Matrix, b):
    """Solve m·x = b for a column vector x."""
    n = m.dim
    if n == 0:
        return []
    if m.mode == FLOAT:
        try:
            return [complex(x) for x in np.linalg.solve(m.to_numpy(), np.array(b, dtype=complex))]
        except np.linalg.LinAlgError:
            raise LinAlgError("singular matrix") from None
    return _gauss_solve([list(r) for r in m.rows], list(b))


def _gauss_solve(a, b):
    n = len(a)
    a = [[Fraction(x) for x in r] + [Fraction(y)] for r, y in zip(a, b)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise LinAlgError("singular matrix")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        rk = a[k]
        for j in range(k, n + 1):
            rk[j] *= inv
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                ri = a[i]
                for j in range(k, n + 1):
                    ri[j] -= f * rk[j]
    return [a[i][n] for i in range(n)]


def inverse(m: Matrix) -> Matrix:
    n = m.dim
    cols = []
    for j in range(n):
        e = [_one(m.mode) if i == j else _zero(m.mode) for i in range(n)]
        cols.append(solve_right(m, e))
    return Matrix([[cols[j][i] for j in range(n)] for i in range(n)], m.labels, m.mode)


def mdl_ratio(a: Matrix, u, v):
    """1 + v·A⁻¹·uᵀ, which equals det(A + uᵀv)/det(A)."""
    x = solve_right(a, u)
    return _one(a.mode) + dot(v, x, a.mode)


def neumann_partial(m: Matrix, L: int) -> Matrix:
    """Σ_{n=0}^{L} mⁿ."""
    if L < 0:
        raise LinAlgError("L must be non-negative")
    total = identity(m.dim, m.mode, m.labels)
    power = total
    for _ in range(L):
        power = power @ m
        total = total + power
    return total


def vector_neumann(row, m: Matrix, lo: int, hi: int):
    """Σ_{n=lo}^{hi} row·mⁿ, computed by repeated vector products."""
    zero = _zero(m.mode)
    acc = [zero] * m.dim
    cur = list(row)
    for n in range(hi + 1):
        if n >= lo:
            acc = [x + y for x, y in zip(acc, cur)]
        if n < hi:
            cur = m.vecmul(cur)
    return acc


# -- removable singularities ----------------------------------------------------
#
# Every entry built from a weight is n^(-s). Writing y_p = p^(-s) for each prime p
# turns a determinant into an integer polynomial in the y_p. When numerator and
# denominator both vanish at some s, a shared polynomial factor is cancelled
# before evaluating; no limit along s is taken.

def _prime_factors(n: int) -> dict:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class PowerRing:
    """Integer polynomials in y_p = p^(-s), one variable per prime in use."""

    def __init__(self, numbers):
        from sympy import ZZ
        from sympy.polys.rings import ring

        primes = sorted({p for n in numbers if n > 1 for p in _prime_factors(n)})
        self.primes = primes
        names = ",".join(f"y{p}" for p in primes) or "y"
        self.ring, *self.gens = ring(names, ZZ)
        self._var = dict(zip(primes, self.gens))

    def power(self, n: int):
        if n == 0:
            return self.ring.zero
        term = self.ring.one
        for p, e in _prime_factors(n).items():
            term *= self._var[p] ** e
        return term

    def const(self, c: int):
        return self.ring(c)

    def evaluate(self, poly, s):
        vals = [neg_power(p, s) for p in self.primes]
        mode = exponent_mode(s)
        acc = coerce(0, mode)
        for monom, coeff in poly.terms():
            term = coerce(int(coeff), mode)
            for v, e in zip(vals, monom):
                if e:
                    term *= v ** e
            acc += term
        return acc


def poly_det(rows):
    """Bareiss elimination over a polynomial ring (exact quotients)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return None
    sign = 1
    prev = None
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return a[0][0] * 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                t = a[i][j] * akk - aik * a[k][j]
                a[i][j] = t if prev is None else t.exquo(prev)
            a[i][k] = akk * 0
        prev = akk
    return a[n - 1][n - 1] * sign


def poly_adjugate(rows) -> tuple:
    """(δ, X) with X = δ·B⁻¹ and δ = ±det B, by fraction-free Gauss-Jordan.

    Row swaps flip the sign of δ relative to det B; callers that only need
    det(B + c·r) / det B = (δ + r·X·c) / δ are unaffected.
    """
    n = len(rows)
    one = rows[0][0].ring.one
    zero = one * 0
    a = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
    width = 2 * n
    prev = one
    for k in range(n):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    break
            else:
                raise LinAlgError("singular polynomial matrix")
        akk = a[k][k]
        rk = a[k]
        for i in range(n):
            if i == k:
                continue
            ri = a[i]
            aik = ri[k]
            for j in range(width):
                if j == k:
                    continue
                t = akk * ri[j] - aik * rk[j] if aik else akk * ri[j]
                ri[j] = t.exquo(prev) if prev != one else t
            ri[k] = zero
        prev = akk
    return prev, [row[n:] for row in a]


def reduced_ratio(pr: PowerRing, num_rows, den_rows, s) -> tuple:
    """(num, den) of det(num_rows)/det(den_rows) after cancelling their gcd, at s."""
    p = poly_det(num_rows) if num_rows else pr.ring.one
    q = poly_det(den_rows) if den_rows else pr.ring.one
    return poly_ratio(pr, p, q, s)


def poly_ratio(pr: PowerRing, p, q, s) -> tuple:
    """(num, den) of p/q at s, with common factors cancelled first."""
    _, p1, q1 = p.cofactors(q)
    num, den = pr.evaluate(p1, s), pr.evaluate(q1, s)
    if exponent_mode(s) == EXACT and num == 0 and den == 0:
        return curve_limit(pr, p1, q1, s)
    return num, den


def curve_limit(pr: PowerRing, p, q, s, max_order: int = 64) -> tuple:
    """Value of p/q at s approached along y_p = p^(-s') with s' → s.

    Coprime polynomials in several y_p may still vanish together at the
    point, but along the curve both are analytic in s'. With
    D = Σ L_p y_p ∂/∂y_p (L_p standing for log p), the limit is
    D^k p / D^k q for the first k where either side is nonzero. When the
    quotient still involves the L_p it is evaluated in floating point.
    """
    from sympy import QQ
    from sympy.polys.rings import ring

    names = [f"y{pp}" for pp in pr.primes] + [f"L{pp}" for pp in pr.primes]
    if not pr.primes:
        raise LinAlgError("constant 0/0")
    big, *gens = ring(",".join(names), QQ)
    k = len(pr.primes)
    ys, logs = gens[:k], gens[k:]
    point = [(y, Fraction(1, pp ** s) if s >= 0 else Fraction(pp ** (-s))) for y, pp in zip(ys, pr.primes)]
    f, g = p.set_ring(big), q.set_ring(big)
    for _ in range(max_order):
        f = sum((lg * y * f.diff(y) for y, lg in zip(ys, logs)), big.zero)
        g = sum((lg * y * g.diff(y) for y, lg in zip(ys, logs)), big.zero)
        fv, gv = f.subs(point), g.subs(point)
        if fv or gv:
            break
    else:
        raise LinAlgError("limit along the curve not reached")
    if not gv:
        return Fraction(1), Fraction(0)
    if not fv:
        return Fraction(0), Fraction(1)
    _, f1, g1 = fv.cofactors(gv)
    if f1.is_ground and g1.is_ground:
        return _qq(f1.LC), _qq(g1.LC)
    import math

    vals = [0.0] * k + [math.log(pp) for pp in pr.primes]
    return complex(f1(*vals)), complex(g1(*vals))


def _qq(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))
