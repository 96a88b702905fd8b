"""Lie algebra models carrying an invariant almost Hermitian structure.

A model is a finite dimensional real Lie algebra given by structure constants
on an orthonormal frame X_1..X_2m, together with an orthogonal almost complex
structure J.  The frame metric is implicit: the frame is declared orthonormal,
so compatibility of J reduces to J being an orthogonal matrix.

Index convention: brackets are stored zero-based as (i, j, k, c) with i < j,
meaning [X_i, X_j] has coefficient c on X_k.  The JSON interchange format is
one-based; the loader converts.

The matrix J acts on frame vectors column-wise: column j holds the frame
coordinates of J X_j.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exact import ExactMatrix, GaussScalar, GAUSS_ZERO, rref


class ModelError(ValueError):
    """Malformed model data: bad shapes, indices, or rationals."""


def _normalize_brackets(raw, dim: int):
    table = {}
    for entry in raw:
        i, j, k, c = entry
        c = Fraction(c)
        if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
            raise ModelError(f"bracket index out of range: {entry!r}")
        if i == j:
            if c != 0:
                raise ModelError(f"[X,X] must vanish: {entry!r}")
            continue
        if i > j:
            i, j, c = j, i, -c
        key = (i, j, k)
        table[key] = table.get(key, Fraction(0)) + c
    items = tuple(
        (i, j, k, c) for (i, j, k), c in sorted(table.items()) if c != 0
    )
    return items


@dataclass(frozen=True)
class LieModel:
    """Structure constants plus an almost complex structure on the frame.

    coframe optionally overrides the normalization of the complex coframe
    used by the bigraded algebra: each row gives the x-coordinates of one
    coframe generator (a +i eigenvector of the dual structure).  Catalog
    models use it to pin printed normalizations; it is not serialized.
    """

    name: str
    dim: int
    brackets: tuple
    J: tuple
    coframe: Optional[tuple] = field(default=None, compare=True)

    def __post_init__(self):
        if self.dim < 2 or self.dim % 2 != 0:
            raise ModelError(f"dimension must be even and positive, got {self.dim}")
        if len(self.J) != self.dim or any(len(r) != self.dim for r in self.J):
            raise ModelError("J must be a dim x dim matrix")
        object.__setattr__(
            self, "J", tuple(tuple(Fraction(x) for x in row) for row in self.J)
        )
        object.__setattr__(
            self, "brackets", _normalize_brackets(self.brackets, self.dim)
        )

    @property
    def m(self) -> int:
        return self.dim // 2

    def bracket(self, i: int, j: int) -> tuple:
        """[X_i, X_j] as a frame coordinate vector of Fractions."""
        out = [Fraction(0)] * self.dim
        if i == j:
            return tuple(out)
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        for bi, bj, bk, c in self.brackets:
            if bi == i and bj == j:
                out[bk] += sign * c
        return tuple(out)

    def bracket_vectors(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> tuple:
        """Bilinear extension of the bracket to coordinate vectors."""
        out = [Fraction(0)] * self.dim
        for i, j, k, c in self.brackets:
            coeff = u[i] * v[j] - u[j] * v[i]
            if coeff:
                out[k] += coeff * c
        return tuple(out)

    def apply_J(self, v: Sequence[Fraction]) -> tuple:
        return tuple(
            sum(self.J[r][c] * v[c] for c in range(self.dim)) for r in range(self.dim)
        )

    def omega(self, a: int, b: int) -> Fraction:
        """Fundamental 2-form on frame vectors: omega(X_a, X_b) = g(J X_a, X_b)."""
        return self.J[b][a]


@dataclass(frozen=True)
class StructureReport:
    name: str
    dim: int
    jacobi_ok: bool
    acs_ok: bool
    compatible_ok: bool
    integrable: bool
    almost_kahler: bool
    nilpotent: bool
    jacobi_witness: Optional[tuple] = None

    @property
    def structure_ok(self) -> bool:
        """Whether the data defines an almost Hermitian Lie algebra at all."""
        return self.jacobi_ok and self.acs_ok and self.compatible_ok

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "jacobi_ok": self.jacobi_ok,
            "acs_ok": self.acs_ok,
            "compatible_ok": self.compatible_ok,
            "integrable": self.integrable,
            "almost_kahler": self.almost_kahler,
            "nilpotent": self.nilpotent,
            "structure_ok": self.structure_ok,
            "jacobi_witness": (
                None if self.jacobi_witness is None else list(self.jacobi_witness)),
        }


def _jacobi_check(model: LieModel):
    n = model.dim
    basis = [
        tuple(Fraction(1 if r == i else 0) for r in range(n)) for i in range(n)
    ]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                total = [Fraction(0)] * n
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = model.bracket(a, b)
                    term = model.bracket_vectors(inner, basis[c])
                    total = [t + x for t, x in zip(total, term)]
                if any(total):
                    return False, (i, j, k)
    return True, None


def nijenhuis(model: LieModel) -> tuple:
    """N[i][j] = frame coordinates of N(X_i, X_j) with
    N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y]."""
    n = model.dim
    basis = [
        tuple(Fraction(1 if r == i else 0) for r in range(n)) for i in range(n)
    ]
    jx = [model.apply_J(b) for b in basis]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            t1 = model.bracket_vectors(jx[i], jx[j])
            t2 = model.apply_J(model.bracket_vectors(jx[i], basis[j]))
            t3 = model.apply_J(model.bracket_vectors(basis[i], jx[j]))
            t4 = model.bracket(i, j)
            row.append(
                tuple(a - b - c - d for a, b, c, d in zip(t1, t2, t3, t4))
            )
        out.append(tuple(row))
    return tuple(out)


def _domega_vanishes(model: LieModel) -> bool:
    n = model.dim

    def omega_vec(u: Sequence[Fraction], b: int) -> Fraction:
        # omega(u, X_b) for a coordinate vector u
        return sum(u[a] * model.omega(a, b) for a in range(n))

    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                val = (
                    -omega_vec(model.bracket(i, j), k)
                    + omega_vec(model.bracket(i, k), j)
                    - omega_vec(model.bracket(j, k), i)
                )
                if val != 0:
                    return False
    return True


def _is_nilpotent(model: LieModel) -> bool:
    """Lower central series test.  The series is nested, so the span dimension
    must drop at every step until it hits zero; stabilizing at a nonzero
    dimension means the algebra is not nilpotent."""
    n = model.dim
    basis = [
        tuple(Fraction(1 if r == i else 0) for r in range(n)) for i in range(n)
    ]
    current = basis
    while True:
        generated = []
        for b in basis:
            for v in current:
                w = model.bracket_vectors(b, v)
                if any(w):
                    generated.append(w)
        if not generated:
            return True
        reduced, pivots = rref(ExactMatrix(generated))
        nxt = [
            tuple(x.re for x in reduced.row(r)) for r in range(len(pivots))
        ]
        if len(nxt) >= len(current):
            return False
        current = nxt


def validate(model: LieModel) -> StructureReport:
    """Exact structural checks; every flag is decided over the rationals."""
    jm = ExactMatrix(model.J)
    n = model.dim
    acs_ok = (jm @ jm) == (ExactMatrix.identity(n) * Fraction(-1))
    compatible_ok = (jm.transpose() @ jm) == ExactMatrix.identity(n)
    jacobi_ok, witness = _jacobi_check(model)
    nij = nijenhuis(model)
    integrable = all(
        not any(nij[i][j])
        for i in range(n)
        for j in range(n)
    )
    almost_kahler = bool(
        acs_ok and compatible_ok and jacobi_ok and _domega_vanishes(model)
    )
    nilpotent = jacobi_ok and _is_nilpotent(model)
    return StructureReport(
        name=model.name,
        dim=model.dim,
        jacobi_ok=jacobi_ok,
        acs_ok=acs_ok,
        compatible_ok=compatible_ok,
        integrable=integrable,
        almost_kahler=almost_kahler,
        nilpotent=nilpotent,
        jacobi_witness=witness,
    )


# ---------------------------------------------------------------------------
# catalog


def _j_from_pairs(dim: int, pairs) -> list:
    """J sending X_a to X_b (and X_b to -X_a) for each one-based pair (a, b)."""
    J = [[Fraction(0)] * dim for _ in range(dim)]
    for a, b in pairs:
        J[b - 1][a - 1] = Fraction(1)
        J[a - 1][b - 1] = Fraction(-1)
    return J


def _torus(m: int) -> LieModel:
    return LieModel(
        name=f"torus{2 * m}",
        dim=2 * m,
        brackets=(),
        J=_j_from_pairs(2 * m, [(2 * k + 1, 2 * k + 2) for k in range(m)]),
    )


def _kodaira_thurston() -> LieModel:
    # one bracket [X1,X2] = -X3; J pairs the bracket direction with the
    # center so that the fundamental form x1^x3 + x2^x4 is closed
    return LieModel(
        name="kodaira_thurston",
        dim=4,
        brackets=((0, 1, 2, Fraction(-1)),),
        J=_j_from_pairs(4, [(1, 3), (2, 4)]),
    )


def _filiform4(name: str, pairs) -> LieModel:
    return LieModel(
        name=name,
        dim=4,
        brackets=((0, 1, 2, Fraction(1)), (0, 2, 3, Fraction(1))),
        J=_j_from_pairs(4, pairs),
    )


def _h5() -> LieModel:
    half = Fraction(1, 2)
    i_ = GaussScalar(0, 1)
    one = GaussScalar(1)
    zero = GAUSS_ZERO
    # explicit coframe: first generator dual to X5 + i X6, the other two are
    # twice the duals of X1 - i X2 and X3 + i X4; this normalization makes
    # the differential of the first generator come out with coefficient -1/2
    coframe = (
        (zero, zero, zero, zero, GaussScalar(half), GaussScalar(0, -half)),
        (one, i_, zero, zero, zero, zero),
        (zero, zero, one, -i_, zero, zero),
    )
    return LieModel(
        name="h5_J",
        dim=6,
        brackets=(
            (0, 2, 4, Fraction(1)),
            (1, 3, 4, Fraction(1)),
            (0, 3, 5, Fraction(1)),
            (1, 2, 5, Fraction(-1)),
        ),
        J=_j_from_pairs(6, [(1, 2), (4, 3), (6, 5)]),
        coframe=coframe,
    )


_CATALOG = {
    "torus2": lambda: _torus(1),
    "torus4": lambda: _torus(2),
    "torus6": lambda: _torus(3),
    "kodaira_thurston": _kodaira_thurston,
    "filiform4_J": lambda: _filiform4("filiform4_J", [(1, 2), (3, 4)]),
    "filiform4_Jprime": lambda: _filiform4("filiform4_Jprime", [(1, 4), (2, 3)]),
    "h5_J": _h5,
}

CATALOG_NAMES = tuple(sorted(_CATALOG))


def catalog(name: str) -> LieModel:
    """Built-in study models by name; see CATALOG_NAMES."""
    try:
        builder = _CATALOG[name]
    except KeyError:
        raise ModelError(
            f"unknown catalog model {name!r}; available: {', '.join(CATALOG_NAMES)}"
        ) from None
    return builder()


# ---------------------------------------------------------------------------
# serialization (one-based indices on the wire)

FORMAT_VERSION = 1


def model_to_json(model: LieModel) -> dict:
    return {
        "format": FORMAT_VERSION,
        "name": model.name,
        "dim": model.dim,
        "brackets": [
            {"i": i + 1, "j": j + 1, "k": k + 1, "c": str(c)}
            for (i, j, k, c) in model.brackets
        ],
        "J": [[str(x) for x in row] for row in model.J],
    }


def model_from_json(data) -> LieModel:
    if not isinstance(data, dict):
        raise ModelError("model document must be a JSON object")
    if data.get("format") != FORMAT_VERSION:
        raise ModelError(
            f"unsupported format {data.get('format')!r}; expected {FORMAT_VERSION}"
        )
    try:
        name = str(data["name"])
        dim = int(data["dim"])
        raw_brackets = data["brackets"]
        raw_j = data["J"]
    except KeyError as exc:
        raise ModelError(f"missing field {exc.args[0]!r}") from None
    brackets = []
    for pos, entry in enumerate(raw_brackets):
        try:
            i = int(entry["i"]) - 1
            j = int(entry["j"]) - 1
            k = int(entry["k"]) - 1
            c = Fraction(str(entry["c"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ModelError(f"bad bracket entry at index {pos}: {entry!r}") from exc
        brackets.append((i, j, k, c))
    jrows = []
    for r, row in enumerate(raw_j):
        parsed = []
        for cidx, x in enumerate(row):
            try:
                parsed.append(Fraction(str(x)))
            except (ValueError, ZeroDivisionError) as exc:
                raise ModelError(f"bad rational in J at row {r}, column {cidx}: {x!r}") from exc
        jrows.append(tuple(parsed))
    return LieModel(name=name, dim=dim, brackets=tuple(brackets), J=tuple(jrows))


def load_model(path: str) -> LieModel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid JSON in {path}: line {exc.lineno}: {exc.msg}") from exc
    return model_from_json(data)


def save_model(model: LieModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_json(model), fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# bridges into the bigraded algebra (lazy imports avoid a cycle)


def fundamental_form(model: LieModel):
    """The (1,1)-form g(J., .) in the bigraded algebra of the model."""
    from . import forms

    return forms.build(model).fundamental_form


def nijenhuis_scalar(model: LieModel):
    """Fit (mu + mubar) = scalar * N on 1-forms; None when both sides vanish
    or no single scalar works.  The value depends on the evaluation
    conventions of this package and is reported rather than asserted."""
    from . import forms

    algebra = forms.build(model)
    nij = nijenhuis(model)
    n = model.dim
    mixed = algebra.mu + algebra.mu_bar
    scalar = None
    for k in range(n):
        # N* pullback on the k-th real coframe element, determinant convention
        comps = {}
        for i in range(n):
            for j in range(i + 1, n):
                c = nij[i][j][k]
                if c:
                    comps[(i, j)] = GaussScalar(c)
        rhs = algebra.form_from_real(comps, degree=2)
        lhs = mixed.apply(algebra.form_from_real({(k,): GaussScalar(1)}, degree=1))
        if rhs.is_zero() and lhs.is_zero():
            continue
        if rhs.is_zero() or lhs.is_zero():
            return None
        ratio = None
        for (pq, vec) in rhs.components.items():
            lvec = lhs.components.get(pq)
            if lvec is None:
                return None
            for a, b in zip(vec, lvec):
                if a or b:
                    if not a:
                        return None
                    r = b / a
                    if ratio is None:
                        ratio = r
                    elif ratio != r:
                        return None
        if ratio is None:
            continue
        if scalar is None:
            scalar = ratio
        elif scalar != ratio:
            return None
        if not (rhs.scale(scalar) - lhs).is_zero():
            return None
    return scalar
