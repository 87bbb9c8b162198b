"""Dense exact matrices and their normal forms.

Rings are tagged: "z" (integers), "laurent" (Z[q, q^-1]), "qpoly" (Q[q]).
Smith normal form is computed constructively over the two PIDs ("z",
"qpoly"); over the Laurent ring a heuristic reduction either succeeds,
exhibits a blocking pair, or gives up at an iteration limit.

Everything is exact; the Fourier duality matrix is the single
floating-point surface and returns complex entries.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from math import gcd

from kasteleyn.rings import (
    DomainError,
    ExactDivisionError,
    LaurentPoly,
    RationalPoly,
    format_laurent,
    parse_laurent,
)


class GuardExceeded(DomainError):
    """A configurable size guard refused the computation."""


class NormalFormFailure(RuntimeError):
    """Raised when a Laurent normal-form attempt did not produce a SmithForm."""

    def __init__(self, attempt):
        self.attempt = attempt
        super().__init__(f"laurent normal form attempt failed: {attempt.outcome}")


# ---------------------------------------------------------------------------
# ring adapters


class _IntRing:
    tag = "z"
    zero = 0
    one = 1

    @staticmethod
    def coerce(x):
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return int(x)
        raise TypeError(f"not an integer entry: {x!r}")

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def is_unit(a):
        return a in (1, -1)

    @staticmethod
    def unit_and_normal(a):
        """a = unit * normal with canonical normal (nonnegative)."""
        return (-1, -a) if a < 0 else (1, a)

    @staticmethod
    def unit_inverse(u):
        return u

    @staticmethod
    def try_div(a, b):
        q, r = divmod(a, b)
        return q if r == 0 else None

    @staticmethod
    def gcdext(a, b):
        """(g, x, y) with g = xa + yb, g > 0."""
        old_r, r = a, b
        old_x, x = 1, 0
        old_y, y = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_x, x = x, old_x - q * x
            old_y, y = y, old_y - q * y
        if old_r < 0:
            old_r, old_x, old_y = -old_r, -old_x, -old_y
        return old_r, old_x, old_y

    @staticmethod
    def size_key(a):
        return abs(a)

    @staticmethod
    def to_str(a, compact=False):
        return str(a)

    @staticmethod
    def parse(s):
        return int(s)


class _QPolyRing:
    tag = "qpoly"
    zero = RationalPoly.zero()
    one = RationalPoly.one()

    @staticmethod
    def coerce(x):
        return RationalPoly.coerce(x)

    @staticmethod
    def is_zero(a):
        return a.is_zero()

    @staticmethod
    def is_unit(a):
        return a.is_unit()

    @staticmethod
    def unit_and_normal(a):
        """a = unit * normal with monic normal."""
        if a.is_zero():
            return RationalPoly.one(), a
        lead = a.leading_coeff()
        return RationalPoly.const(lead), a.monic()

    @staticmethod
    def unit_inverse(u):
        return RationalPoly.const(1 / u.coeffs[0])

    @staticmethod
    def try_div(a, b):
        return a.try_divide(b)

    @staticmethod
    def gcdext(a, b):
        return a.gcdext(b)

    @staticmethod
    def size_key(a):
        return (a.degree(), max(abs(c) for c in a.coeffs))

    @staticmethod
    def to_str(a, compact=False):
        if a.is_zero():
            return "0"
        parts = []
        for e, c in enumerate(a.coeffs):
            if c:
                parts.append((e, c))
        out = []
        for e, c in parts:
            cs = str(c)
            if e == 0:
                out.append(cs)
            elif c == 1:
                out.append("q" if e == 1 else f"q^{e}")
            elif c == -1:
                out.append("-q" if e == 1 else f"-q^{e}")
            else:
                out.append(f"{cs}*q" if e == 1 else f"{cs}*q^{e}")
        joined = out[0]
        for piece in out[1:]:
            joined += piece if piece.startswith("-") else "+" + piece
        return joined

    @staticmethod
    def parse(s):
        # fractions allowed as coefficients: a/b*q^e
        total = RationalPoly.zero()
        for piece in _split_signed_terms(s):
            total = total + _parse_qpoly_term(piece)
        return total


def _split_signed_terms(s):
    terms, buf = [], ""
    for ch in s.strip():
        core = buf.strip()
        if ch in "+-" and core and not core.endswith(("*", "^", "+", "-", "/")):
            terms.append(buf)
            buf = ch
        else:
            buf += ch
    terms.append(buf)
    return terms


def _parse_qpoly_term(raw):
    s = raw.strip()
    sign = 1
    while s and s[0] in "+-":
        if s[0] == "-":
            sign = -sign
        s = s[1:].strip()
    coeff = Fraction(1)
    if "*" in s:
        cs, s = s.split("*", 1)
        coeff = Fraction(cs.strip())
        s = s.strip()
    elif not s.startswith("q"):
        if not s:
            raise DomainError(f"bad polynomial term {raw!r}")
        return RationalPoly.const(sign * Fraction(s))
    if s == "q":
        e = 1
    elif s.startswith("q^"):
        e = int(s[2:])
    else:
        raise DomainError(f"bad polynomial term {raw!r}")
    if e < 0:
        raise DomainError("negative exponents are not in Q[q]")
    return RationalPoly([0] * e + [sign * coeff])


class _LaurentRing:
    tag = "laurent"
    zero = LaurentPoly.zero()
    one = LaurentPoly.one()

    @staticmethod
    def coerce(x):
        return LaurentPoly.coerce(x)

    @staticmethod
    def is_zero(a):
        return a.is_zero()

    @staticmethod
    def is_unit(a):
        return a.is_unit()

    @staticmethod
    def unit_and_normal(a):
        sign, exp, f = a.unit_normalize()
        return LaurentPoly.q_power(exp, sign), f

    @staticmethod
    def unit_inverse(u):
        sign, exp, f = u.unit_normalize()
        if not f.is_one():
            raise DomainError(f"not a unit: {u}")
        return LaurentPoly.q_power(-exp, sign)

    @staticmethod
    def try_div(a, b):
        return a.try_divide(b)

    @staticmethod
    def size_key(a):
        f = a.normal()
        return (f.span, f.num_terms(), max(abs(c) for _, c in f.items()))

    @staticmethod
    def to_str(a, compact=False):
        return format_laurent(a, compact=compact)

    @staticmethod
    def parse(s):
        return parse_laurent(s)


_RINGS = {"z": _IntRing, "laurent": _LaurentRing, "qpoly": _QPolyRing}


def ring_adapter(tag):
    try:
        return _RINGS[tag]
    except KeyError:
        raise DomainError(f"unknown ring tag {tag!r}") from None


# ---------------------------------------------------------------------------
# matrices


class ExactMatrix:
    """Immutable dense matrix over a tagged exact ring."""

    __slots__ = ("rows", "cols", "ring", "entries")

    def __init__(self, rows, cols, ring, entries):
        ad = ring_adapter(ring)
        ents = tuple(tuple(ad.coerce(x) for x in row) for row in entries)
        if len(ents) != rows or any(len(r) != cols for r in ents):
            raise DomainError("entry grid does not match declared shape")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "entries", ents)

    def __setattr__(self, *a):
        raise AttributeError("ExactMatrix is immutable")

    @staticmethod
    def from_rows(rows, ring="z"):
        rows = [list(r) for r in rows]
        if not rows:
            return ExactMatrix(0, 0, ring, [])
        return ExactMatrix(len(rows), len(rows[0]), ring, rows)

    @staticmethod
    def identity(n, ring="z"):
        ad = ring_adapter(ring)
        return ExactMatrix(
            n, n, ring,
            [[ad.one if i == j else ad.zero for j in range(n)] for i in range(n)],
        )

    @staticmethod
    def diagonal(values, ring="z", shape=None):
        ad = ring_adapter(ring)
        vals = [ad.coerce(v) for v in values]
        m = n = len(vals)
        if shape:
            m, n = shape
        grid = [[ad.zero] * n for _ in range(m)]
        for i, v in enumerate(vals):
            grid[i][i] = v
        return ExactMatrix(m, n, ring, grid)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def to_lists(self):
        return [list(r) for r in self.entries]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ring, self.entries))

    def __repr__(self):
        return f"<ExactMatrix {self.rows}x{self.cols} over {self.ring}>"

    def transpose(self):
        return ExactMatrix(
            self.cols, self.rows, self.ring,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    def __neg__(self):
        return ExactMatrix(
            self.rows, self.cols, self.ring,
            [[-x for x in row] for row in self.entries],
        )

    def __add__(self, other):
        self._compat(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DomainError("shape mismatch")
        return ExactMatrix(
            self.rows, self.cols, self.ring,
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ],
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ExactMatrix):
            return ExactMatrix(
                self.rows, self.cols, self.ring,
                [[x * other for x in row] for row in self.entries],
            )
        self._compat(other)
        if self.cols != other.rows:
            raise DomainError("shape mismatch in product")
        ad = ring_adapter(self.ring)
        out = []
        bt = other.transpose().entries
        for row in self.entries:
            out_row = []
            for col in bt:
                acc = ad.zero
                for a, b in zip(row, col):
                    acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return ExactMatrix(self.rows, other.cols, self.ring, out)

    def _compat(self, other):
        if self.ring != other.ring:
            raise DomainError(f"ring mismatch: {self.ring} vs {other.ring}")

    def kron(self, other):
        """Kronecker product."""
        self._compat(other)
        out = []
        for i in range(self.rows):
            for k in range(other.rows):
                row = []
                for j in range(self.cols):
                    for l in range(other.cols):
                        row.append(self.entries[i][j] * other.entries[k][l])
                out.append(row)
        return ExactMatrix(self.rows * other.rows, self.cols * other.cols, self.ring, out)

    def is_alternating(self):
        if self.rows != self.cols:
            return False
        ad = ring_adapter(self.ring)
        for i in range(self.rows):
            if not ad.is_zero(self.entries[i][i]):
                return False
            for j in range(i + 1, self.cols):
                if not ad.is_zero(self.entries[i][j] + self.entries[j][i]):
                    return False
        return True

    def map_ring(self, ring, fn):
        return ExactMatrix(
            self.rows, self.cols, ring,
            [[fn(x) for x in row] for row in self.entries],
        )

    def to_qpoly(self):
        if self.ring == "qpoly":
            return self
        if self.ring == "laurent":
            return self.map_ring("qpoly", RationalPoly.from_laurent)
        return self.map_ring("qpoly", RationalPoly.const)

    def specialize_q(self, q0):
        """Exact evaluation of a Laurent matrix at q = q0, integer result."""
        if self.ring != "laurent":
            raise DomainError("specialize_q needs a Laurent matrix")

        def ev(f):
            v = f.evaluate(q0)
            if isinstance(v, Fraction):
                raise DomainError("non-integer specialization")
            return v

        return self.map_ring("z", ev)


# ---------------------------------------------------------------------------
# matrix text format


def write_matrix(M):
    ad = ring_adapter(M.ring)
    lines = [f"{M.rows} {M.cols} {M.ring}"]
    for row in M.entries:
        lines.append(" ".join(ad.to_str(x, compact=True) for x in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text):
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise DomainError("empty matrix text")
    head = lines[0].split()
    if len(head) != 3:
        raise DomainError("matrix header must be: rows cols ring")
    rows, cols, ring = int(head[0]), int(head[1]), head[2]
    ad = ring_adapter(ring)
    grid = []
    for ln in lines[1:]:
        grid.append([ad.parse(tok) for tok in ln.split()])
    if len(grid) != rows or any(len(r) != cols for r in grid):
        raise DomainError("matrix body does not match header shape")
    return ExactMatrix(rows, cols, ring, grid)


# ---------------------------------------------------------------------------
# elementary-operation workspace


class _Workspace:
    """Mutable copy of a matrix plus row/column transforms L, R with
    L * original * R = current, and optional running inverses."""

    def __init__(self, M, track_inverse=False):
        self.ring = M.ring
        self.ad = ring_adapter(M.ring)
        self.m, self.n = M.rows, M.cols
        self.A = M.to_lists()
        one, zero = self.ad.one, self.ad.zero
        self.L = [[one if i == j else zero for j in range(self.m)] for i in range(self.m)]
        self.R = [[one if i == j else zero for j in range(self.n)] for i in range(self.n)]
        self.Linv = None
        self.Rinv = None
        if track_inverse:
            self.Linv = [[one if i == j else zero for j in range(self.m)] for i in range(self.m)]
            self.Rinv = [[one if i == j else zero for j in range(self.n)] for i in range(self.n)]
        self.ops = 0

    # row ops: current <- E * current, L <- E * L, Linv <- Linv * E^-1

    def swap_rows(self, i, j):
        if i == j:
            return
        self.ops += 1
        self.A[i], self.A[j] = self.A[j], self.A[i]
        self.L[i], self.L[j] = self.L[j], self.L[i]
        if self.Linv is not None:
            for r in self.Linv:
                r[i], r[j] = r[j], r[i]

    def swap_cols(self, i, j):
        if i == j:
            return
        self.ops += 1
        for r in self.A:
            r[i], r[j] = r[j], r[i]
        for r in self.R:
            r[i], r[j] = r[j], r[i]
        if self.Rinv is not None:
            self.Rinv[i], self.Rinv[j] = self.Rinv[j], self.Rinv[i]

    def scale_row(self, i, u):
        """Multiply row i by a unit u."""
        self.ops += 1
        inv = self.ad.unit_inverse(u)
        self.A[i] = [u * x for x in self.A[i]]
        self.L[i] = [u * x for x in self.L[i]]
        if self.Linv is not None:
            for r in self.Linv:
                r[i] = r[i] * inv

    def scale_col(self, j, u):
        self.ops += 1
        inv = self.ad.unit_inverse(u)
        for r in self.A:
            r[j] = r[j] * u
        for r in self.R:
            r[j] = r[j] * u
        if self.Rinv is not None:
            self.Rinv[j] = [inv * x for x in self.Rinv[j]]

    def addmul_row(self, i, j, c):
        """row_i += c * row_j."""
        self.ops += 1
        Ai, Aj = self.A[i], self.A[j]
        for k in range(self.n):
            if not self.ad.is_zero(Aj[k]):
                Ai[k] = Ai[k] + c * Aj[k]
        Li, Lj = self.L[i], self.L[j]
        for k in range(self.m):
            if not self.ad.is_zero(Lj[k]):
                Li[k] = Li[k] + c * Lj[k]
        if self.Linv is not None:
            for r in self.Linv:
                r[j] = r[j] - c * r[i]

    def addmul_col(self, j, i, c):
        """col_j += c * col_i."""
        self.ops += 1
        for r in self.A:
            if not self.ad.is_zero(r[i]):
                r[j] = r[j] + c * r[i]
        for r in self.R:
            if not self.ad.is_zero(r[i]):
                r[j] = r[j] + c * r[i]
        if self.Rinv is not None:
            ri, rj = self.Rinv[i], self.Rinv[j]
            for k in range(self.n):
                ri[k] = ri[k] - c * rj[k]

    def mix_rows(self, i, j, x, y, u, v):
        """rows (i, j) <- (x ri + y rj, u ri + v rj); xv - yu must be a unit."""
        self.ops += 1
        def mix(a, b):
            return [x * p + y * q for p, q in zip(a, b)], [u * p + v * q for p, q in zip(a, b)]
        self.A[i], self.A[j] = mix(self.A[i], self.A[j])
        self.L[i], self.L[j] = mix(self.L[i], self.L[j])
        if self.Linv is not None:
            # inverse of [[x, y], [u, v]] is [[v, -y], [-u, x]] / det; det unit
            det = x * v - y * u
            dinv = self.ad.unit_inverse(det)
            for r in self.Linv:
                a, b = r[i], r[j]
                r[i] = (a * v - b * u) * dinv
                r[j] = (b * x - a * y) * dinv

    def mix_cols(self, i, j, x, y, u, v):
        """cols (i, j) <- (x ci + y cj, u ci + v cj)."""
        self.ops += 1
        for r in self.A:
            p, q = r[i], r[j]
            r[i], r[j] = x * p + y * q, u * p + v * q
        for r in self.R:
            p, q = r[i], r[j]
            r[i], r[j] = x * p + y * q, u * p + v * q
        if self.Rinv is not None:
            det = x * v - y * u
            dinv = self.ad.unit_inverse(det)
            a, b = self.Rinv[i], self.Rinv[j]
            self.Rinv[i] = [(p * v - q * u) * dinv for p, q in zip(a, b)]
            self.Rinv[j] = [(q * x - p * y) * dinv for p, q in zip(a, b)]

    def matrices(self):
        L = ExactMatrix(self.m, self.m, self.ring, self.L)
        R = ExactMatrix(self.n, self.n, self.ring, self.R)
        A = ExactMatrix(self.m, self.n, self.ring, self.A)
        return A, L, R


# ---------------------------------------------------------------------------
# Smith normal form over a PID


class SmithForm:
    """Diagonal normal form with witness transforms: left * M * right = diag."""

    def __init__(self, ring, shape, diagonal, left, right):
        self.ring = ring
        self.shape = shape
        self.diagonal = tuple(diagonal)
        self.left = left
        self.right = right

    @property
    def rank(self):
        ad = ring_adapter(self.ring)
        return sum(0 if ad.is_zero(d) else 1 for d in self.diagonal)

    def nonunit_factors(self):
        ad = ring_adapter(self.ring)
        out = []
        for d in self.diagonal:
            if ad.is_zero(d) or ad.is_unit(d):
                continue
            out.append(d)
        return tuple(out)

    def diagonal_matrix(self):
        return ExactMatrix.diagonal(self.diagonal, self.ring, shape=self.shape)

    def verify(self, M):
        """Exact check of the defining identities; returns True or raises."""
        prod = self.left * M * self.right
        if prod != self.diagonal_matrix():
            raise AssertionError("left*M*right is not the diagonal form")
        ad = ring_adapter(self.ring)
        for T in (self.left, self.right):
            if not ad.is_unit(determinant(T)):
                raise AssertionError("transform determinant is not a unit")
        ds = self.diagonal
        for i in range(len(ds) - 1):
            if not ad.is_zero(ds[i + 1]):
                if ad.is_zero(ds[i]) or ad.try_div(ds[i + 1], ds[i]) is None:
                    raise AssertionError("divisibility chain broken")
        return True

    def __repr__(self):
        ad = ring_adapter(self.ring)
        return f"<SmithForm {self.shape} diag={[ad.to_str(d) for d in self.diagonal]}>"


def _clear_cross(ws, k, ring):
    """Make row k and column k zero outside (k, k); pivot may shrink to the
    gcd of what it meets. Returns when both are clear."""
    m, n, A = ws.m, ws.n, ws.A
    while True:
        dirty = False
        for i in range(k + 1, m):
            b = A[i][k]
            if ring.is_zero(b):
                continue
            dirty = True
            a = A[k][k]
            q = ring.try_div(b, a)
            if q is not None:
                ws.addmul_row(i, k, -q)
            else:
                g, x, y = ring.gcdext(a, b)
                ap = ring.try_div(a, g)
                bp = ring.try_div(b, g)
                ws.mix_rows(k, i, x, y, -bp, ap)
        for j in range(k + 1, n):
            b = A[k][j]
            if ring.is_zero(b):
                continue
            dirty = True
            a = A[k][k]
            q = ring.try_div(b, a)
            if q is not None:
                ws.addmul_col(j, k, -q)
            else:
                g, x, y = ring.gcdext(a, b)
                ap = ring.try_div(a, g)
                bp = ring.try_div(b, g)
                ws.mix_cols(k, j, x, y, -bp, ap)
        if not dirty:
            cols_clear = all(ring.is_zero(A[i][k]) for i in range(k + 1, m))
            rows_clear = all(ring.is_zero(A[k][j]) for j in range(k + 1, n))
            if cols_clear and rows_clear:
                return


def smith_normal_form(M, verify=False):
    """Smith normal form over a PID ring tag ("z" or "qpoly"), with
    unit-determinant transforms.  Pivots are chosen minimal in the ring's
    size order, first in row-major order; the cross of the pivot is cleared
    with exact quotients and determinant-1 Bezout mixes; an interior entry
    that the pivot fails to divide is pulled into the pivot row and mixed in.
    """
    if M.ring == "laurent":
        raise DomainError("laurent matrices go through laurent_smith_attempt")
    ring = ring_adapter(M.ring)
    ws = _Workspace(M)
    m, n, A = ws.m, ws.n, ws.A
    k = 0
    while k < min(m, n):
        best = None
        for i in range(k, m):
            for j in range(k, n):
                if ring.is_zero(A[i][j]):
                    continue
                key = ring.size_key(A[i][j])
                if best is None or key < best[0]:
                    best = (key, i, j)
        if best is None:
            break
        ws.swap_rows(k, best[1])
        ws.swap_cols(k, best[2])
        while True:
            _clear_cross(ws, k, ring)
            bad = None
            for i in range(k + 1, m):
                for j in range(k + 1, n):
                    if not ring.is_zero(A[i][j]) and ring.try_div(A[i][j], A[k][k]) is None:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            ws.addmul_row(k, bad, ring.one)
        u, normal = ring.unit_and_normal(A[k][k])
        if not ring.is_zero(A[k][k]) and A[k][k] != normal:
            ws.scale_row(k, ring.unit_inverse(u))
        k += 1
    Afinal, L, R = ws.matrices()
    diag = [Afinal[i, i] for i in range(min(m, n))]
    form = SmithForm(M.ring, (m, n), diag, L, R)
    if verify:
        form.verify(M)
    return form


# ---------------------------------------------------------------------------
# alternating Smith normal form (integer ring)


class AltSmithForm:
    """Congruence normal form of an alternating matrix: transform B with
    B^T A B block-diagonal, blocks [[0, e], [-e, 0]], e_i | e_{i+1}."""

    def __init__(self, ring, n, block_entries, transform):
        self.ring = ring
        self.n = n
        self.block_entries = tuple(block_entries)
        self.transform = transform

    def block_matrix(self):
        ad = ring_adapter(self.ring)
        grid = [[ad.zero] * self.n for _ in range(self.n)]
        for i, e in enumerate(self.block_entries):
            grid[2 * i][2 * i + 1] = e
            grid[2 * i + 1][2 * i] = -e
        return ExactMatrix(self.n, self.n, self.ring, grid)

    def verify(self, A):
        B = self.transform
        if B.transpose() * A * B != self.block_matrix():
            raise AssertionError("B^T A B is not the block form")
        ad = ring_adapter(self.ring)
        if not ad.is_unit(determinant(B)):
            raise AssertionError("congruence transform is not unimodular")
        es = self.block_entries
        for i in range(len(es) - 1):
            if not ad.is_zero(es[i + 1]):
                if ad.is_zero(es[i]) or ad.try_div(es[i + 1], es[i]) is None:
                    raise AssertionError("block divisibility chain broken")
        return True

    def __repr__(self):
        return f"<AltSmithForm n={self.n} blocks={list(self.block_entries)}>"


class _SymWorkspace:
    """Congruence workspace: A <- E^T A E, B <- B E."""

    def __init__(self, M):
        self.ring = M.ring
        self.ad = ring_adapter(M.ring)
        self.n = M.rows
        self.A = M.to_lists()
        one, zero = self.ad.one, self.ad.zero
        self.B = [[one if i == j else zero for j in range(self.n)] for i in range(self.n)]

    def swap(self, i, j):
        if i == j:
            return
        self.A[i], self.A[j] = self.A[j], self.A[i]
        for r in self.A:
            r[i], r[j] = r[j], r[i]
        for r in self.B:
            r[i], r[j] = r[j], r[i]

    def addmul(self, i, j, c):
        """col_i += c col_j and row_i += c row_j."""
        for r in self.A:
            r[i] = r[i] + c * r[j]
        self.A[i] = [a + c * b for a, b in zip(self.A[i], self.A[j])]
        for r in self.B:
            r[i] = r[i] + c * r[j]

    def mix(self, i, j, x, y, u, v):
        """cols (i, j) <- (x ci + y cj, u ci + v cj), then same on rows."""
        for r in self.A:
            p, q = r[i], r[j]
            r[i], r[j] = x * p + y * q, u * p + v * q
        ri, rj = self.A[i], self.A[j]
        self.A[i], self.A[j] = (
            [x * p + y * q for p, q in zip(ri, rj)],
            [u * p + v * q for p, q in zip(ri, rj)],
        )
        for r in self.B:
            p, q = r[i], r[j]
            r[i], r[j] = x * p + y * q, u * p + v * q

    def negate(self, i):
        for r in self.A:
            r[i] = -r[i]
        self.A[i] = [-a for a in self.A[i]]
        for r in self.B:
            r[i] = -r[i]


def alternating_smith_form(A, verify=False):
    """Alternating Smith normal form over the integers by symmetric Bezout
    mixes, symmetric pivots, and the interior row-absorption fix."""
    if A.ring != "z":
        raise DomainError("alternating normal form implemented over the integers")
    if not A.is_alternating():
        raise DomainError("matrix is not alternating")
    ring = ring_adapter("z")
    ws = _SymWorkspace(A)
    n, W = ws.n, ws.A
    k = 0
    while k + 1 < n:
        best = None
        for i in range(k, n):
            for j in range(i + 1, n):
                if W[i][j] != 0:
                    key = ring.size_key(W[i][j])
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        _, bi, bj = best
        # bring the chosen entry to (k, k+1) keeping indices distinct
        if bi != k:
            ws.swap(k, bi)
            if bj == k:
                bj = bi
        if bj != k + 1:
            ws.swap(k + 1, bj)
        while True:
            progress = True
            while progress:
                progress = False
                a = W[k][k + 1]
                for j in range(k + 2, n):
                    b = W[k][j]
                    if b == 0:
                        continue
                    q = ring.try_div(b, a)
                    if q is not None:
                        ws.addmul(j, k + 1, -q)
                    else:
                        g, x, y = ring.gcdext(a, b)
                        ws.mix(k + 1, j, x, y, -(b // g), a // g)
                        progress = True
                    a = W[k][k + 1]
                for j in range(k + 2, n):
                    b = W[k + 1][j]
                    if b == 0:
                        continue
                    # W[k+1][k] = -a pairs with b through column k
                    q = ring.try_div(b, a)
                    if q is not None:
                        ws.addmul(j, k, q)
                    else:
                        g, x, y = ring.gcdext(a, b)
                        # cols (k, j) <- (x ck - y cj, (b/g) ck + (a/g) cj):
                        # W[k+1][k] becomes -g, W[k+1][j] becomes 0, and the
                        # symmetric row half restores W[k][k+1] = g
                        ws.mix(k, j, x, -y, b // g, a // g)
                        progress = True
                    a = W[k][k + 1]
            a = W[k][k + 1]
            bad = None
            for i in range(k + 2, n):
                for j in range(i + 1, n):
                    if W[i][j] != 0 and W[i][j] % a != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            ws.addmul(k, bad, 1)
        if W[k][k + 1] < 0:
            ws.negate(k + 1)
        k += 2
    entries = [W[2 * i][2 * i + 1] for i in range(n // 2)]
    B = ExactMatrix(n, n, "z", ws.B)
    form = AltSmithForm("z", n, entries, B)
    if verify:
        form.verify(A)
    return form


# ---------------------------------------------------------------------------
# Laurent-ring normal form attempt


class NormalFormAttempt:
    """Outcome of the heuristic Smith reduction over Z[q, q^-1].

    outcome: "success" | "witnessed" | "inconclusive".
    On success `smith` holds a SmithForm over the Laurent ring.  On a
    witnessed failure `witness` is the blocking pair (p, b): neither divides
    the other and no elementary reduction shrinks them, so the entry ideal
    (p, b) is (heuristically) non-principal; `residual` carries the submatrix
    where reduction stopped, `left`/`right` the partial transforms.
    """

    def __init__(self, outcome, smith=None, witness=None, residual=None,
                 left=None, right=None, iterations=0):
        self.outcome = outcome
        self.smith = smith
        self.witness = witness
        self.residual = residual
        self.left = left
        self.right = right
        self.iterations = iterations

    @property
    def success(self):
        return self.outcome == "success"

    def __repr__(self):
        if self.success:
            return f"<NormalFormAttempt success {self.smith!r}>"
        if self.outcome == "witnessed":
            return f"<NormalFormAttempt witnessed {tuple(str(w) for w in self.witness)}>"
        return "<NormalFormAttempt inconclusive>"


def _laurent_reduce(b, p):
    """Reduce b modulo ring multiples of p; returns (remainder, multiplier)
    with remainder = b - multiplier * p, multiplier in Z[q, q^-1]."""
    t = LaurentPoly.zero()
    r = b
    while not r.is_zero():
        full = r.try_divide(p)
        if full is not None:
            return LaurentPoly.zero(), t + full
        if p.span == 0:
            # p is c * q^k; reduce every coefficient of r mod |c|
            c = abs(p.trailing_coeff())
            psign = 1 if p.trailing_coeff() > 0 else -1
            k = p.min_exp
            step = {}
            for e, ce in r.items():
                qq = ce // c if ce >= 0 else -((-ce) // c)
                if abs(ce - qq * c) > c // 2 and c > 1:
                    qq += 1 if ce > 0 else -1
                if qq:
                    step[e - k] = qq * psign
            if not step:
                return r, t
            mono = LaurentPoly(step)
            t = t + mono
            r = r - mono * p
            continue
        if r.span >= p.span:
            # Euclidean descent on the end coefficients with centered
            # quotients (halved remainders control coefficient growth);
            # pick whichever end shrinks the entry more
            best = None
            q_top = _centered_quotient(r.leading_coeff(), p.leading_coeff())
            if q_top:
                f = LaurentPoly.q_power(r.max_exp - p.max_exp, q_top)
                r2 = r - f * p
                s2 = _laurent_size(r2)
                if s2 < _laurent_size(r):
                    best = (s2, f, r2)
            q_bot = _centered_quotient(r.trailing_coeff(), p.trailing_coeff())
            if q_bot:
                f = LaurentPoly.q_power(r.min_exp - p.min_exp, q_bot)
                r2 = r - f * p
                s2 = _laurent_size(r2)
                if s2 < _laurent_size(r) and (best is None or s2 < best[0]):
                    best = (s2, f, r2)
            if best is None:
                step = _lattice_step(r, p)
                if step is None:
                    return r, t
                t = t + step[0]
                r = step[1]
                continue
            t = t + best[1]
            r = best[2]
            continue
        step = _lattice_step(r, p)
        if step is None:
            return r, t
        t = t + step[0]
        r = step[1]
    return r, t


def _centered_quotient(a, b):
    """Quotient q with |a - q b| <= |b| / 2, deterministic at ties."""
    q, rem = divmod(a, b)
    if 2 * abs(rem) > abs(b):
        q += 1 if b > 0 else -1
    return q


def _lattice_step(r, p):
    """Size-reduction against monomial multiples of p: find c * q^s with
    r - c q^s p strictly smaller (projection with a centered coefficient);
    None when no shift helps."""
    pp = sum(c * c for _, c in p.items())
    base = _laurent_size(r)
    best = None
    for s in range(r.min_exp - p.max_exp, r.max_exp - p.min_exp + 1):
        dot = 0
        for e, c in p.items():
            dot += c * r.coeff(e + s)
        c0 = _centered_quotient(dot, pp)
        for c in {c0, c0 + 1, c0 - 1} - {0}:
            f = LaurentPoly.q_power(s, c)
            r2 = r - f * p
            s2 = _laurent_size(r2)
            if s2 < base and (best is None or s2 < best[0]):
                best = (s2, f, r2)
    if best is None:
        return None
    return best[1], best[2]


def _laurent_size(f):
    if f.is_zero():
        return (-1, 0, 0, 0)
    g = f.normal()
    return (g.span, abs(g.leading_coeff()), abs(g.trailing_coeff()),
            sum(abs(c) for _, c in g.items()))


def laurent_smith_attempt(M, max_steps=10000):
    """Heuristic Smith reduction over Z[q, q^-1]: unit-normalize, then
    alternate exact divisions, degree reduction and integer-content
    reduction; succeed with a divisibility-chained diagonal, or stop with a
    blocking 2x2 witness, or give up at the step limit."""
    if M.ring != "laurent":
        M = M.map_ring("laurent", LaurentPoly.coerce)
    ring = ring_adapter("laurent")
    ws = _Workspace(M)
    m, n, A = ws.m, ws.n, ws.A

    def fail(outcome, witness=None, k=0):
        _, L, R = ws.matrices()
        res = None
        if k < min(m, n):
            res = ExactMatrix.from_rows(
                [[A[i][j] for j in range(k, n)] for i in range(k, m)], "laurent"
            )
        return NormalFormAttempt(outcome, witness=witness, residual=res,
                                 left=L, right=R, iterations=ws.ops)

    # initial unit normalization of rows
    for i in range(m):
        for x in A[i]:
            if not x.is_zero():
                u, _ = ring.unit_and_normal(x)
                if not u.is_one():
                    ws.scale_row(i, ring.unit_inverse(u))
                break

    def clear_cross(k):
        """Try to clear row/column k around the pivot at (k, k).  Returns
        None on success, ("witnessed", pair) when a full pass cannot move,
        ("inconclusive", None) at the step limit."""
        while True:
            if ws.ops > max_steps:
                return ("inconclusive", None)
            moved = False
            stuck = None
            for i in range(k + 1, m):
                b = A[i][k]
                if b.is_zero():
                    continue
                p = A[k][k]
                r, t = _laurent_reduce(b, p)
                if not t.is_zero():
                    ws.addmul_row(i, k, -t)
                    moved = True
                if r.is_zero():
                    continue
                if ring.size_key(r) < ring.size_key(p):
                    ws.swap_rows(k, i)
                    moved = True
                else:
                    stuck = (p, r)
            for j in range(k + 1, n):
                b = A[k][j]
                if b.is_zero():
                    continue
                p = A[k][k]
                r, t = _laurent_reduce(b, p)
                if not t.is_zero():
                    ws.addmul_col(j, k, -t)
                    moved = True
                if r.is_zero():
                    continue
                if ring.size_key(r) < ring.size_key(p):
                    ws.swap_cols(k, j)
                    moved = True
                else:
                    stuck = (p, r)
            cross_clear = all(A[i][k].is_zero() for i in range(k + 1, m)) and all(
                A[k][j].is_zero() for j in range(k + 1, n)
            )
            if cross_clear:
                bad = None
                for i in range(k + 1, m):
                    for j in range(k + 1, n):
                        if not A[i][j].is_zero() and A[i][j].try_divide(A[k][k]) is None:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    return None
                ws.addmul_row(k, bad, LaurentPoly.one())
                moved = True
            if not moved:
                p, r = stuck if stuck else (A[k][k], None)
                witness = (p.normal(), r.normal()) if r is not None else (p.normal(),)
                return ("witnessed", witness)

    def diagonalize(start):
        """Reduce the submatrix at (start, start) onward to diagonal form.
        Returns None, or ("witnessed", pair, k) / ("inconclusive", None, k).
        A stuck pivot is retried with every other candidate entry before a
        witness is reported."""
        k = start
        while k < min(m, n):
            candidates = sorted(
                (ring.size_key(A[i][j]), i, j)
                for i in range(k, m)
                for j in range(k, n)
                if not A[i][j].is_zero()
            )
            if not candidates:
                break
            outcome = None
            tried = 0
            while True:
                candidates = sorted(
                    (ring.size_key(A[i][j]), i, j)
                    for i in range(k, m)
                    for j in range(k, n)
                    if not A[i][j].is_zero()
                )
                if tried >= len(candidates):
                    break
                _, bi, bj = candidates[tried]
                ws.swap_rows(k, bi)
                ws.swap_cols(k, bj)
                outcome = clear_cross(k)
                if outcome is None or outcome[0] == "inconclusive":
                    break
                tried += 1
            if outcome is not None:
                return (outcome[0], outcome[1], k)
            u, _ = ring.unit_and_normal(A[k][k])
            if not u.is_one():
                ws.scale_row(k, ring.unit_inverse(u))
            k += 1
        return None

    outcome = diagonalize(0)
    if outcome is not None:
        return fail(outcome[0], witness=outcome[1], k=outcome[2])

    # divisibility chain repair: pull a violating later entry into the
    # earlier row and re-diagonalize from there
    while True:
        broken = None
        for i in range(min(m, n) - 1):
            a, b = A[i][i], A[i + 1][i + 1]
            if a.is_zero() or b.is_zero():
                continue
            if b.try_divide(a) is None:
                broken = i
                break
        if broken is None:
            break
        if ws.ops > max_steps:
            return fail("inconclusive", k=broken)
        ws.addmul_row(broken, broken + 1, LaurentPoly.one())
        outcome = diagonalize(broken)
        if outcome is not None:
            return fail(outcome[0], witness=outcome[1], k=outcome[2])

    Afin, L, R = ws.matrices()
    diag = [Afin[i, i] for i in range(min(m, n))]
    form = SmithForm("laurent", (m, n), diag, L, R)
    return NormalFormAttempt("success", smith=form, iterations=ws.ops)


# ---------------------------------------------------------------------------
# cokernels and stable invariants


class CokernelDescriptor:
    """coker M = Z^free_rank + sum Z/f_i, torsion factors divisibility-chained."""

    def __init__(self, free_rank, torsion):
        self.free_rank = free_rank
        self.torsion = tuple(torsion)

    def __eq__(self, other):
        if not isinstance(other, CokernelDescriptor):
            return NotImplemented
        return (self.free_rank, self.torsion) == (other.free_rank, other.torsion)

    def __hash__(self):
        return hash((self.free_rank, self.torsion))

    def order(self):
        """Number of elements when finite, None otherwise."""
        if self.free_rank:
            return None
        out = 1
        for f in self.torsion:
            out *= f
        return out

    def group_str(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{f}" for f in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"<coker {self.group_str()}>"


def cokernel_of(M):
    """Cokernel of an integer matrix: free rank = rows - rank, torsion =
    non-unit invariant factors (positive)."""
    if M.ring != "z":
        raise DomainError("cokernel_of expects an integer matrix")
    form = smith_normal_form(M)
    torsion = [abs(d) for d in form.diagonal if d != 0 and abs(d) != 1]
    return CokernelDescriptor(M.rows - form.rank, torsion)


class StableInvariants:
    """Normalized non-unit invariant factors plus cokernel free rank; two
    matrices are reported stably equivalent iff these match."""

    def __init__(self, ring, free_rank, factors):
        self.ring = ring
        self.free_rank = free_rank
        self.factors = tuple(factors)

    def factor_strings(self):
        ad = ring_adapter(self.ring)
        return tuple(ad.to_str(f) for f in self.factors)

    def __eq__(self, other):
        if not isinstance(other, StableInvariants):
            return NotImplemented
        return (self.free_rank, self.factors) == (other.free_rank, other.factors)

    def __hash__(self):
        return hash((self.free_rank, self.factors))

    def __repr__(self):
        return f"<StableInvariants free={self.free_rank} {list(self.factor_strings())}>"


def _normalize_factor(d, ring_tag):
    """Canonical representative modulo units (and modulo q-powers for the
    polynomial rings, absorbing monomials in normalization); None if unit."""
    if ring_tag == "z":
        a = abs(d)
        return None if a == 1 else a
    if ring_tag == "laurent":
        f = d.normal()
        return None if f.is_one() else f
    if ring_tag == "qpoly":
        coeffs = list(d.coeffs)
        v = 0
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            v += 1
        f = RationalPoly(coeffs).primitive_integer_form()
        return None if f.degree() <= 0 else f
    raise DomainError(f"unknown ring {ring_tag}")


def stable_invariants(M):
    """Unit-free invariant description used for stable-equivalence checks."""
    if M.ring == "laurent":
        attempt = laurent_smith_attempt(M)
        if not attempt.success:
            raise NormalFormFailure(attempt)
        form = attempt.smith
    else:
        form = smith_normal_form(M)
    ad = ring_adapter(M.ring)
    factors = []
    for d in form.diagonal:
        if ad.is_zero(d):
            continue
        f = _normalize_factor(d, M.ring)
        if f is not None:
            factors.append(f)
    return StableInvariants(M.ring, M.rows - form.rank, factors)


# ---------------------------------------------------------------------------
# pivots, determinants, Pfaffians, determinantal divisors


def deleted_pivot(M, i, j):
    """Pivot at (i, j) (0-based) then delete row i and column j.  The pivot
    must divide every entry in its row and column; a unit pivot is first
    normalized to 1."""
    ring = ring_adapter(M.ring)
    p = M[i, j]
    if ring.is_zero(p):
        raise DomainError(f"pivot entry ({i},{j}) is zero")
    grid = M.to_lists()
    if ring.is_unit(p):
        inv = ring.unit_inverse(p)
        grid[i] = [inv * x for x in grid[i]]
        p = grid[i][j]
    for jj in range(M.cols):
        if ring.try_div(grid[i][jj], p) is None:
            raise DomainError(
                f"pivot {ring.to_str(p)} does not divide row entry "
                f"({i},{jj}) = {ring.to_str(grid[i][jj])}"
            )
    for ii in range(M.rows):
        if ring.try_div(grid[ii][j], p) is None:
            raise DomainError(
                f"pivot {ring.to_str(p)} does not divide column entry "
                f"({ii},{j}) = {ring.to_str(grid[ii][j])}"
            )
    out = []
    for ii in range(M.rows):
        if ii == i:
            continue
        c = ring.try_div(grid[ii][j], p)
        row = []
        for jj in range(M.cols):
            if jj == j:
                continue
            row.append(grid[ii][jj] - c * grid[i][jj])
        out.append(row)
    return ExactMatrix(M.rows - 1, M.cols - 1, M.ring, out)


def determinant(M):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if M.rows != M.cols:
        raise DomainError("determinant of a non-square matrix")
    ring = ring_adapter(M.ring)
    n = M.rows
    if n == 0:
        return ring.one
    A = M.to_lists()
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if ring.is_zero(A[k][k]):
            piv = next((i for i in range(k + 1, n) if not ring.is_zero(A[i][k])), None)
            if piv is None:
                return ring.zero
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                q = ring.try_div(num, prev)
                if q is None:
                    raise ExactDivisionError("Bareiss division failed")
                A[i][j] = q
            A[i][k] = ring.zero
        prev = A[k][k]
    d = A[n - 1][n - 1]
    return -d if sign < 0 else d


def _pfaffian_expand(M):
    n = M.rows
    rows = M.entries
    ring = ring_adapter(M.ring)
    idx = tuple(range(n))
    memo = {}

    def pf(sub):
        if not sub:
            return ring.one
        if sub in memo:
            return memo[sub]
        i0 = sub[0]
        rest = sub[1:]
        total = ring.zero
        for pos, j in enumerate(rest):
            a = rows[i0][j]
            if not ring.is_zero(a):
                smaller = tuple(x for x in rest if x != j)
                term = a * pf(smaller)
                total = total + (term if pos % 2 == 0 else -term)
        memo[sub] = total
        return total

    return pf(idx)


def pfaffian(M, expand_limit=12):
    """Exact Pfaffian of an alternating matrix: division-free expansion with
    memoization for small n, alternating elimination over the fraction field
    for larger integer matrices."""
    if M.rows != M.cols:
        raise DomainError("pfaffian of a non-square matrix")
    if M.rows % 2 == 1:
        raise DomainError("pfaffian needs even dimension")
    if not M.is_alternating():
        raise DomainError("pfaffian of a non-alternating matrix")
    n = M.rows
    if n == 0:
        return ring_adapter(M.ring).one
    if n <= expand_limit:
        return _pfaffian_expand(M)
    if M.ring != "z":
        raise DomainError("large Pfaffians implemented over the integers only")
    A = [[Fraction(x) for x in row] for row in M.entries]
    pf = Fraction(1)
    for k in range(0, n, 2):
        j = next((jj for jj in range(k + 1, n) if A[k][jj] != 0), None)
        if j is None:
            return 0
        if j != k + 1:
            for r in A:
                r[j], r[k + 1] = r[k + 1], r[j]
            A[j], A[k + 1] = A[k + 1], A[j]
            pf = -pf
        a = A[k][k + 1]
        pf *= a
        for i in range(k + 2, n):
            for j2 in range(i + 1, n):
                val = A[i][j2] - (A[k][i] * A[k + 1][j2] - A[k][j2] * A[k + 1][i]) / a
                A[i][j2] = val
                A[j2][i] = -val
    assert pf.denominator == 1
    return int(pf)


def determinantal_divisors(M, max_dim=6):
    """d_k = gcd of all k x k minors, by exhaustive minor expansion with
    memoization.  An independent oracle for the Smith normal form; refuses
    matrices beyond the guard because minor enumeration is exponential."""
    if M.ring != "z":
        raise DomainError("determinantal divisors implemented over the integers")
    if max(M.rows, M.cols) > max_dim:
        raise GuardExceeded(
            f"matrix {M.rows}x{M.cols} exceeds the minor-enumeration guard {max_dim}"
        )
    from itertools import combinations

    ent = M.entries
    memo = {}

    def minor(rows, cols):
        if len(rows) == 1:
            return ent[rows[0]][cols[0]]
        key = (rows, cols)
        if key in memo:
            return memo[key]
        r0 = rows[0]
        rest = rows[1:]
        total = 0
        for pos, c in enumerate(cols):
            a = ent[r0][c]
            if a:
                sub = minor(rest, cols[:pos] + cols[pos + 1 :])
                total += a * sub if pos % 2 == 0 else -a * sub
        memo[key] = total
        return total

    out = []
    for k in range(1, min(M.rows, M.cols) + 1):
        g = 0
        for rows in combinations(range(M.rows), k):
            for cols in combinations(range(M.cols), k):
                g = gcd(g, abs(minor(rows, cols)))
        if g == 0:
            break
        out.append(g)
    return out


# ---------------------------------------------------------------------------
# Fourier duality matrix (the sole floating-point surface)


def _fraction_inverse(M):
    n = M.rows
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M.entries)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise DomainError("singular matrix")
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def fourier_duality_matrix(M, guard=64):
    """The discrete-Fourier unitary between coker M and coker M^T for a
    nonsingular integer matrix: U[x, y] = exp(2 pi i Y^T M^-1 X) / sqrt(|det M|),
    built by enumerating coset representatives of both cokernels."""
    if M.ring != "z":
        raise DomainError("fourier duality needs an integer matrix")
    if M.rows != M.cols:
        raise DomainError("fourier duality needs a square matrix")
    det = determinant(M)
    if det == 0:
        raise DomainError("fourier duality needs a nonsingular matrix")
    D = abs(det)
    if D > guard:
        raise GuardExceeded(f"|det| = {D} exceeds the cokernel enumeration guard {guard}")
    n = M.rows
    form = smith_normal_form(M)
    ds = [abs(d) for d in form.diagonal]
    # coker M classes live in prod Z/d_i through y -> (L y) mod d; lift X = L^-1 r
    Linv = _fraction_inverse(form.left)
    Rinv = _fraction_inverse(form.right)
    Minv = _fraction_inverse(M)

    def mixed_radix():
        reps = [[]]
        for d in ds:
            reps = [r + [v] for r in reps for v in range(d)]
        return reps

    reps = mixed_radix()
    assert len(reps) == D
    xs = []
    ys = []
    for r in reps:
        xs.append([sum(Linv[i][j] * r[j] for j in range(n)) for i in range(n)])
        # Y lifts for coker M^T: (R^T)^-1 s = (R^-1)^T s
        ys.append([sum(Rinv[j][i] * r[j] for j in range(n)) for i in range(n)])
    scale = 1.0 / math.sqrt(D)
    U = []
    for X in xs:
        row = []
        MX = [sum(Minv[i][j] * X[j] for j in range(n)) for i in range(n)]
        for Y in ys:
            t = sum(Y[i] * MX[i] for i in range(n))
            frac = t - math.floor(t)
            row.append(cmath.exp(2j * math.pi * float(frac)) * scale)
        U.append(row)
    return U


def unitarity_defect(U):
    """max |(U U* - I)[i][j]| for a square complex matrix given as lists."""
    n = len(U)
    worst = 0.0
    for i in range(n):
        for j in range(n):
            acc = sum(U[i][k] * U[j][k].conjugate() for k in range(n))
            target = 1.0 if i == j else 0.0
            worst = max(worst, abs(acc - target))
    return worst


# ---------------------------------------------------------------------------
# JSON report


def smith_report(M, form=None, include_transforms=False):
    """SmithForm / cokernel JSON-ready report."""
    if form is None:
        if M.ring == "laurent":
            attempt = laurent_smith_attempt(M)
            if not attempt.success:
                raise NormalFormFailure(attempt)
            form = attempt.smith
        else:
            form = smith_normal_form(M)
    ad = ring_adapter(M.ring)
    inv = stable_invariants(M)
    report = {
        "schema_version": 1,
        "ring": M.ring,
        "rows": M.rows,
        "cols": M.cols,
        "free_rank": inv.free_rank,
        "invariant_factors": list(inv.factor_strings()),
        "witnesses_included": include_transforms,
    }
    if include_transforms:
        report["left"] = [[ad.to_str(x, compact=True) for x in row] for row in form.left.entries]
        report["right"] = [[ad.to_str(x, compact=True) for x in row] for row in form.right.entries]
    return report
