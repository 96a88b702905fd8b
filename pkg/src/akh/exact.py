"""Exact arithmetic over the Gaussian rationals, plus dense linear algebra.

Everything in this package reduces to linear algebra over Q(i).  Scalars are
pairs of stdlib Fractions, matrices are dense tuples of tuples, and every
routine is deterministic: reduced row echelon form always picks the leftmost
pivot column and the topmost unused row, so kernel bases and solve results are
canonical for a given input.

ParamPoly adds multivariate polynomials over Q(i) in named real parameters.
They are used to express families of forms (a 2-form with unknown rational
coefficients) and to certify that a polynomial identity holds for every
parameter value by checking that all coefficients vanish.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

ScalarLike = Union["GaussScalar", Fraction, int]


class ExactError(ValueError):
    """Raised for structural misuse: shape mismatches, singular inversion."""


class GaussScalar:
    """A Gaussian rational re + im*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Union[Fraction, int] = 0, im: Union[Fraction, int] = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussScalar is immutable")

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, ParamPoly):
            return other + self
        other = as_gauss(other)
        return GaussScalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ParamPoly):
            return (-other) + self
        other = as_gauss(other)
        return GaussScalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other: ScalarLike) -> "GaussScalar":
        return as_gauss(other).__sub__(self)

    def __mul__(self, other):
        if isinstance(other, ParamPoly):
            return other.__rmul__(self)
        other = as_gauss(other)
        return GaussScalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "GaussScalar":
        other = as_gauss(other)
        n = other.norm_sq()
        if n == 0:
            raise ZeroDivisionError("division by zero GaussScalar")
        return GaussScalar(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other: ScalarLike) -> "GaussScalar":
        return as_gauss(other).__truediv__(self)

    def __neg__(self) -> "GaussScalar":
        return GaussScalar(-self.re, -self.im)

    def __pos__(self) -> "GaussScalar":
        return self

    # -- structure ---------------------------------------------------------

    def conj(self) -> "GaussScalar":
        return GaussScalar(self.re, -self.im)

    def norm_sq(self) -> Fraction:
        """|z|^2 as an exact nonnegative rational."""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (GaussScalar, Fraction, int)):
            other = as_gauss(other)
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"GaussScalar({format_scalar(self)!r})"


GAUSS_ZERO = GaussScalar(0)
GAUSS_ONE = GaussScalar(1)
GAUSS_I = GaussScalar(0, 1)


def as_gauss(x: ScalarLike) -> GaussScalar:
    if isinstance(x, GaussScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussScalar(x)
    raise ExactError(f"cannot coerce {x!r} to a GaussScalar")


def format_scalar(z: GaussScalar) -> str:
    """Canonical string form: '0', '-1/2', 'i', '2/3*i', '1/2-3/4*i'."""
    if z.im == 0:
        return str(z.re)
    if abs(z.im) == 1:
        imag = "i" if z.im > 0 else "-i"
    else:
        imag = f"{z.im}*i"
    if z.re == 0:
        return imag
    sign = "+" if z.im > 0 else ""
    return f"{z.re}{sign}{imag}"


def parse_scalar(text: str) -> GaussScalar:
    """Inverse of format_scalar; also accepts '3i' without the '*'."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ExactError("empty scalar string")
    if not s.endswith("i"):
        try:
            return GaussScalar(Fraction(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise ExactError(f"bad rational {text!r}") from exc
    body = s[:-1]
    if body.endswith("*"):
        body = body[:-1]
    # split off a real part if a sign occurs past position 0
    split = max(body.rfind("+"), body.rfind("-"))
    if split > 0:
        re_part, im_part = body[:split], body[split:]
    else:
        re_part, im_part = "", body
    if im_part in ("", "+"):
        im = Fraction(1)
    elif im_part == "-":
        im = Fraction(-1)
    else:
        try:
            im = Fraction(im_part)
        except (ValueError, ZeroDivisionError) as exc:
            raise ExactError(f"bad scalar {text!r}") from exc
    if re_part:
        try:
            re = Fraction(re_part)
        except (ValueError, ZeroDivisionError) as exc:
            raise ExactError(f"bad scalar {text!r}") from exc
    else:
        re = Fraction(0)
    return GaussScalar(re, im)


# ---------------------------------------------------------------------------
# matrices


class ExactMatrix:
    """Dense immutable matrix over GaussScalar."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable[ScalarLike]], cols: Optional[int] = None):
        """``cols`` pins the width of a matrix with no rows (or no columns),
        where it cannot be inferred; required to keep shapes honest through
        degenerate blocks."""
        rows = tuple(tuple(as_gauss(x) for x in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ExactError("ragged matrix rows")
            if cols is not None and cols != width:
                raise ExactError(f"stated width {cols} contradicts rows of {width}")
        else:
            width = 0 if cols is None else cols
        object.__setattr__(self, "data", rows)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls([[GAUSS_ZERO] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(
            [[GAUSS_ONE if i == j else GAUSS_ZERO for j in range(n)] for i in range(n)]
        )

    def __getitem__(self, key) -> GaussScalar:
        i, j = key
        return self.data[i][j]

    def row(self, i: int) -> tuple:
        return self.data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same_shape(other)
        return ExactMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
            cols=self.cols,
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same_shape(other)
        return ExactMatrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
            cols=self.cols,
        )

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix([[-a for a in row] for row in self.data], cols=self.cols)

    def __mul__(self, scalar: ScalarLike) -> "ExactMatrix":
        c = as_gauss(scalar)
        return ExactMatrix([[a * c for a in row] for row in self.data], cols=self.cols)

    __rmul__ = __mul__

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ExactError(f"shape mismatch {self.shape} @ {other.shape}")
        if other.rows == 0:
            return ExactMatrix.zeros(self.rows, other.cols)
        ocols = tuple(zip(*other.data))
        out = []
        for row in self.data:
            out.append(
                [
                    sum((a * b for a, b in zip(row, col) if a and b), GAUSS_ZERO)
                    for col in ocols
                ]
            )
        return ExactMatrix(out, cols=other.cols)

    def apply(self, vec: Sequence) -> tuple:
        """Matrix times column vector; the vector entries may be any ring
        elements that multiply with GaussScalar (ParamPoly included)."""
        if len(vec) != self.cols:
            raise ExactError("vector length mismatch")
        out = []
        for row in self.data:
            acc = None
            for a, v in zip(row, vec):
                if not a:
                    continue
                term = a * v
                acc = term if acc is None else acc + term
            out.append(acc if acc is not None else GAUSS_ZERO)
        return tuple(out)

    def transpose(self) -> "ExactMatrix":
        if self.rows == 0:
            return ExactMatrix([[] for _ in range(self.cols)], cols=0)
        return ExactMatrix(list(zip(*self.data)) if self.cols else [], cols=self.rows)

    def conj(self) -> "ExactMatrix":
        return ExactMatrix([[a.conj() for a in row] for row in self.data], cols=self.cols)

    def conj_transpose(self) -> "ExactMatrix":
        return self.transpose().conj()

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(not a for row in self.data for a in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(format_scalar(a) for a in row) for row in self.data
        )
        return f"ExactMatrix[{self.rows}x{self.cols}]({body})"

    def _same_shape(self, other: "ExactMatrix") -> None:
        if self.shape != other.shape:
            raise ExactError(f"shape mismatch {self.shape} vs {other.shape}")


def vstack(mats: Sequence[ExactMatrix]) -> ExactMatrix:
    mats = list(mats)
    if not mats:
        raise ExactError("vstack of nothing")
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ExactError("vstack column mismatch")
    rows = []
    for m in mats:
        rows.extend(m.data)
    return ExactMatrix(rows, cols=cols)


def hstack(mats: Sequence[ExactMatrix]) -> ExactMatrix:
    mats = list(mats)
    if not mats:
        raise ExactError("hstack of nothing")
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ExactError("hstack row mismatch")
    return ExactMatrix(
        [sum((list(m.data[i]) for m in mats), []) for i in range(rows)],
        cols=sum(m.cols for m in mats),
    )


def rref(mat: ExactMatrix) -> tuple:
    """Reduced row echelon form.  Returns (R, pivot_columns).

    Deterministic: scans columns left to right, picks the topmost nonzero
    entry as pivot.  Entries live in the field Q(i), so classical normalized
    elimination is exact; no fraction-free bookkeeping is needed.
    """
    work = [list(row) for row in mat.data]
    nrows, ncols = mat.rows, mat.cols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = None
        for i in range(r, nrows):
            if work[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = GAUSS_ONE / work[r][c]
        work[r] = [a * inv for a in work[r]]
        for i in range(nrows):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return ExactMatrix(work, cols=ncols), tuple(pivots)


def rank(mat: ExactMatrix) -> int:
    return len(rref(mat)[1])


def kernel(mat: ExactMatrix) -> list:
    """Canonical kernel basis: one vector per free column, unit entry there.

    The basis is ordered by free column index; with the deterministic rref
    this makes kernel output reproducible across runs and platforms.
    """
    R, pivots = rref(mat)
    pivot_set = set(pivots)
    free = [c for c in range(mat.cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [GAUSS_ZERO] * mat.cols
        v[f] = GAUSS_ONE
        for r, c in enumerate(pivots):
            v[c] = -R.data[r][f]
        basis.append(tuple(v))
    return basis


def kernel_intersection(mats: Sequence[ExactMatrix]) -> list:
    """Basis of the intersection of the kernels (kernel of the stack)."""
    return kernel(vstack(mats))


def solve(mat: ExactMatrix, rhs: Sequence[ScalarLike]):
    """One solution of mat @ x = rhs, or None when inconsistent.

    Free variables are set to zero, so the returned solution is canonical.
    """
    if len(rhs) != mat.rows:
        raise ExactError("rhs length mismatch")
    aug = ExactMatrix(
        [list(row) + [as_gauss(b)] for row, b in zip(mat.data, rhs)]
    )
    R, pivots = rref(aug)
    if mat.cols in pivots:
        return None
    x = [GAUSS_ZERO] * mat.cols
    for r, c in enumerate(pivots):
        x[c] = R.data[r][mat.cols]
    return tuple(x)


def inverse(mat: ExactMatrix) -> ExactMatrix:
    if mat.rows != mat.cols:
        raise ExactError("inverse of a non-square matrix")
    n = mat.rows
    aug = hstack([mat, ExactMatrix.identity(n)])
    R, pivots = rref(aug)
    if len(pivots) < n or pivots[:n] != tuple(range(n)):
        raise ExactError("matrix is singular")
    return ExactMatrix([row[n:] for row in R.data])


def in_span(basis: Sequence[Sequence[ScalarLike]], vec: Sequence[ScalarLike]) -> bool:
    """Whether vec lies in the span of the given vectors."""
    basis = list(basis)
    if not basis:
        return all(not as_gauss(v) for v in vec)
    cols = ExactMatrix(basis).transpose()
    return solve(cols, list(vec)) is not None


def _diagonalize_congruence(mat: ExactMatrix, hermitian: bool) -> list:
    """Congruence-diagonalize; returns the list of real diagonal values."""
    n = mat.rows
    work = [list(row) for row in mat.data]

    def add_row_col(i, j, c):
        # row_i += c * row_j, then col_i += conj(c) * col_j
        work[i] = [a + c * b for a, b in zip(work[i], work[j])]
        cc = c.conj() if hermitian else c
        for r in range(n):
            work[r][i] = work[r][i] + cc * work[r][j]

    def swap(i, j):
        work[i], work[j] = work[j], work[i]
        for r in range(n):
            work[r][i], work[r][j] = work[r][j], work[r][i]

    diag = []
    for k in range(n):
        if not work[k][k]:
            moved = False
            for j in range(k + 1, n):
                if work[j][j]:
                    swap(k, j)
                    moved = True
                    break
            if not moved:
                found = None
                for i in range(k, n):
                    for j in range(i + 1, n):
                        if work[i][j]:
                            found = (i, j)
                            break
                    if found:
                        break
                if found is None:
                    diag.extend([Fraction(0)] * (n - k))
                    break
                i, j = found
                # both diagonal entries are zero here, so this creates a
                # nonzero (and for the hermitian case positive) pivot
                add_row_col(i, j, work[i][j] if hermitian else GAUSS_ONE)
                if i != k:
                    swap(k, i)
        pivot = work[k][k]
        if not pivot.is_real():
            raise ExactError("diagonal entry not real under congruence")
        for r in range(k + 1, n):
            if work[r][k]:
                add_row_col(r, k, -work[r][k] / pivot)
        diag.append(pivot.re)
    return diag


def symmetric_signature(mat: ExactMatrix) -> tuple:
    """(n_plus, n_minus, n_zero) of a real symmetric matrix.

    Sylvester's law makes the result independent of the congruence used.
    """
    if mat.rows != mat.cols:
        raise ExactError("signature of a non-square matrix")
    if any(not a.is_real() for row in mat.data for a in row):
        raise ExactError("symmetric_signature needs a real matrix")
    if mat != mat.transpose():
        raise ExactError("matrix is not symmetric")
    diag = _diagonalize_congruence(mat, hermitian=False)
    plus = sum(1 for d in diag if d > 0)
    minus = sum(1 for d in diag if d < 0)
    return (plus, minus, mat.rows - plus - minus)


def hermitian_signature(mat: ExactMatrix) -> tuple:
    """(n_plus, n_minus, n_zero) of a complex Hermitian matrix."""
    if mat.rows != mat.cols:
        raise ExactError("signature of a non-square matrix")
    if mat != mat.conj_transpose():
        raise ExactError("matrix is not hermitian")
    diag = _diagonalize_congruence(mat, hermitian=True)
    plus = sum(1 for d in diag if d > 0)
    minus = sum(1 for d in diag if d < 0)
    return (plus, minus, mat.rows - plus - minus)


# ---------------------------------------------------------------------------
# parameter polynomials


class ParamPoly:
    """Polynomial over Q(i) in a fixed tuple of named real parameters.

    Terms map exponent tuples to nonzero GaussScalar coefficients.  All
    arithmetic partners must share the same name tuple; scalars are lifted.
    """

    __slots__ = ("names", "terms")

    def __init__(self, names: Sequence[str], terms: Mapping[tuple, ScalarLike]):
        names = tuple(names)
        clean = {}
        for expo, coeff in terms.items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != len(names):
                raise ExactError("exponent tuple length mismatch")
            c = as_gauss(coeff)
            if c:
                clean[expo] = c
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ParamPoly is immutable")

    @classmethod
    def zero(cls, names: Sequence[str]) -> "ParamPoly":
        return cls(names, {})

    @classmethod
    def constant(cls, names: Sequence[str], value: ScalarLike) -> "ParamPoly":
        return cls(names, {(0,) * len(tuple(names)): as_gauss(value)})

    @classmethod
    def variable(cls, names: Sequence[str], which: str) -> "ParamPoly":
        names = tuple(names)
        expo = [0] * len(names)
        expo[names.index(which)] = 1
        return cls(names, {tuple(expo): GAUSS_ONE})

    def _coerce(self, other) -> "ParamPoly":
        if isinstance(other, ParamPoly):
            if other.names != self.names:
                raise ExactError("parameter name mismatch")
            return other
        return ParamPoly.constant(self.names, as_gauss(other))

    def __add__(self, other) -> "ParamPoly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for expo, c in other.terms.items():
            terms[expo] = terms.get(expo, GAUSS_ZERO) + c
        return ParamPoly(self.names, terms)

    __radd__ = __add__

    def __sub__(self, other) -> "ParamPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "ParamPoly":
        return self._coerce(other) - self

    def __neg__(self) -> "ParamPoly":
        return ParamPoly(self.names, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> "ParamPoly":
        other = self._coerce(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                terms[expo] = terms.get(expo, GAUSS_ZERO) + c1 * c2
        return ParamPoly(self.names, terms)

    __rmul__ = __mul__

    def evaluate(self, assignment: Mapping[str, ScalarLike]) -> GaussScalar:
        values = [as_gauss(assignment[n]) for n in self.names]
        total = GAUSS_ZERO
        for expo, coeff in self.terms.items():
            term = coeff
            for v, e in zip(values, expo):
                for _ in range(e):
                    term = term * v
            total = total + term
        return total

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def conj(self) -> "ParamPoly":
        """Coefficient-wise conjugate (parameters are treated as real)."""
        return ParamPoly(self.names, {e: c.conj() for e, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, ParamPoly):
            return self.names == other.names and self.terms == other.terms
        if isinstance(other, (GaussScalar, int, Fraction)):
            return self == ParamPoly.constant(self.names, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.names, tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for expo in sorted(self.terms, reverse=True):
            coeff = self.terms[expo]
            factors = []
            for name, e in zip(self.names, expo):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            cs = format_scalar(coeff)
            if body:
                if cs == "1":
                    parts.append(body)
                elif cs == "-1":
                    parts.append(f"-{body}")
                else:
                    parts.append(f"({cs})*{body}")
            else:
                parts.append(f"({cs})" if ("+" in cs or "-" in cs[1:]) else cs)
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"ParamPoly({str(self)!r})"
