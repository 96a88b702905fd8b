"""Bigraded exterior algebra of an invariant almost Hermitian structure.

Everything is finite dimensional: invariant (p,q)-forms on the Lie model are
spanned by wedge monomials in a complex coframe a_1..a_m (the +i eigenvectors
of the dual almost complex structure) and its conjugates a_1~..a_m~.  The
Chevalley differential of the model decomposes into four pure bidegree
components, written mu_bar (-1,2), dbar (0,1), partial (1,0) and mu (2,-1).

Sign conventions, fixed once here and verified by the d-squared report:
  * evaluation of a wedge of 1-forms is the determinant (no 1/k! averaging),
  * d on 1-forms is alpha -> -alpha([.,.]),
  * d extends as a degree one derivation, d(a^b) = da^b + (-1)^|a| a^db.

The frame x_1..x_2m is orthonormal.  Monomials in the complex coframe are
generally not orthonormal, so every block carries an exact Hermitian Gram
matrix.  The volume form is the +-x_1^...^x_2m that makes the m-th wedge
power of the fundamental form positive, so integration sees the orientation
induced by the almost complex structure.
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .exact import (
    ExactError,
    ExactMatrix,
    GAUSS_I,
    GAUSS_ONE,
    GAUSS_ZERO,
    GaussScalar,
    format_scalar,
    inverse,
    kernel,
    parse_scalar,
    rref,
)
from .model import LieModel, ModelError, validate

Mono = Tuple[int, ...]
BlockKey = Tuple[int, int]

MU_BAR_SHIFT = (-1, 2)
DBAR_SHIFT = (0, 1)
PARTIAL_SHIFT = (1, 0)
MU_SHIFT = (2, -1)
D_SHIFTS = (MU_BAR_SHIFT, DBAR_SHIFT, PARTIAL_SHIFT, MU_SHIFT)


class AlgebraError(ValueError):
    """Internal consistency failure while building the bigraded algebra."""


def merge_wedge(t1: Mono, t2: Mono):
    """Wedge two strictly increasing index tuples.

    Returns (merged_tuple, sign) or None when an index repeats.  The sign is
    the parity of the shuffle that sorts the concatenation.
    """
    if not t1:
        return t2, 1
    if not t2:
        return t1, 1
    if set(t1) & set(t2):
        return None
    inversions = 0
    for y in t2:
        inversions += sum(1 for x in t1 if x > y)
    merged = tuple(sorted(t1 + t2))
    return merged, (-1 if inversions % 2 else 1)


class Form:
    """An invariant form, stored per bidegree as a coefficient vector.

    Coefficients are GaussScalar in normal use; vectors of ParamPoly appear
    when a parametric family of forms is manipulated.  Blocks whose vector is
    identically zero are dropped.
    """

    __slots__ = ("algebra", "components")

    def __init__(self, algebra: "BigradedAlgebra", components: Mapping[BlockKey, Sequence]):
        clean = {}
        for pq, vec in components.items():
            if pq not in algebra.blocks:
                raise AlgebraError(f"no block {pq} in this algebra")
            vec = tuple(vec)
            if len(vec) != len(algebra.blocks[pq]):
                raise AlgebraError(f"vector length mismatch on block {pq}")
            if any(bool(c) for c in vec):
                clean[pq] = vec
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "components", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Form is immutable")

    def is_zero(self) -> bool:
        return not self.components

    def bidegrees(self) -> tuple:
        return tuple(sorted(self.components, key=self.algebra.block_sort_key))

    def coefficient(self, mono: Mono):
        pq, idx = self.algebra.mono_index[tuple(mono)]
        vec = self.components.get(pq)
        return vec[idx] if vec is not None else GAUSS_ZERO

    def __add__(self, other: "Form") -> "Form":
        self._same_algebra(other)
        out = dict(self.components)
        for pq, vec in other.components.items():
            if pq in out:
                out[pq] = tuple(a + b for a, b in zip(out[pq], vec))
            else:
                out[pq] = vec
        return Form(self.algebra, out)

    def __sub__(self, other: "Form") -> "Form":
        return self + other.scale(GaussScalar(-1))

    def __neg__(self) -> "Form":
        return self.scale(GaussScalar(-1))

    def scale(self, c) -> "Form":
        return Form(
            self.algebra,
            {pq: tuple(c * x for x in vec) for pq, vec in self.components.items()},
        )

    def wedge(self, other: "Form") -> "Form":
        self._same_algebra(other)
        acc: Dict[Mono, object] = {}
        blocks = self.algebra.blocks
        for pq1, v1 in self.components.items():
            basis1 = blocks[pq1]
            for j1, c1 in enumerate(v1):
                if not c1:
                    continue
                m1 = basis1[j1]
                for pq2, v2 in other.components.items():
                    basis2 = blocks[pq2]
                    for j2, c2 in enumerate(v2):
                        if not c2:
                            continue
                        merged = merge_wedge(m1, basis2[j2])
                        if merged is None:
                            continue
                        mono, sign = merged
                        term = c1 * c2
                        if sign < 0:
                            term = -term
                        acc[mono] = acc.get(mono, GAUSS_ZERO) + term
        return self.algebra.form_from_monomials(acc)

    def conj(self) -> "Form":
        m = self.algebra.m
        acc: Dict[Mono, object] = {}
        for pq, vec in self.components.items():
            basis = self.algebra.blocks[pq]
            for j, c in enumerate(vec):
                if not c:
                    continue
                swapped = tuple((g + m) if g < m else (g - m) for g in basis[j])
                mono = tuple(sorted(swapped))
                inversions = 0
                seen = []
                for g in swapped:
                    inversions += sum(1 for s in seen if s > g)
                    seen.append(g)
                cc = c.conj()
                if inversions % 2:
                    cc = -cc
                acc[mono] = acc.get(mono, GAUSS_ZERO) + cc
        return self.algebra.form_from_monomials(acc)

    def d(self) -> "Form":
        return self.algebra.d.apply(self)

    def star(self) -> "Form":
        return self.algebra.star.apply(self)

    def inner(self, other: "Form") -> GaussScalar:
        """Hermitian inner product, conjugate linear in the second slot."""
        self._same_algebra(other)
        total = GAUSS_ZERO
        for pq, u in self.components.items():
            v = other.components.get(pq)
            if v is None:
                continue
            G = self.algebra.gram[pq]
            for j, uj in enumerate(u):
                if not uj:
                    continue
                for k, vk in enumerate(v):
                    if not vk:
                        continue
                    total = total + uj * G[j, k] * vk.conj()
        return total

    def integrate(self) -> GaussScalar:
        return self.algebra.integrate(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self.algebra is other.algebra and self.components == other.components

    def __hash__(self):
        return hash(tuple(sorted(self.components.items())))

    def __repr__(self) -> str:
        if self.is_zero():
            return "Form(0)"
        return f"Form({self.algebra.format_form(self)})"

    def _same_algebra(self, other: "Form") -> None:
        if self.algebra is not other.algebra:
            raise AlgebraError("forms live on different algebras")


class BlockOperator:
    """A linear operator on invariant forms, stored blockwise.

    terms maps a bidegree shift (r, s) to a dict of matrices, one per source
    block (p, q), each sending coordinates on A^{p,q} to A^{p+r,q+s}.  Pure
    operators have a single shift; sums of shifts (the full differential, the
    d-Laplacian, the Hodge star) share the interface.
    """

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "BigradedAlgebra", terms: Mapping):
        clean = {}
        for shift, blocks in terms.items():
            r, s = shift
            kept = {}
            for pq, mat in blocks.items():
                tgt = (pq[0] + r, pq[1] + s)
                if pq not in algebra.blocks or tgt not in algebra.blocks:
                    if mat.is_zero():
                        continue
                    raise AlgebraError(f"operator block {pq}->{tgt} out of range")
                if mat.shape != (len(algebra.blocks[tgt]), len(algebra.blocks[pq])):
                    raise AlgebraError(f"bad matrix shape on block {pq} shift {shift}")
                if not mat.is_zero():
                    kept[pq] = mat
            if kept:
                clean[(r, s)] = kept
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("BlockOperator is immutable")

    @classmethod
    def zero(cls, algebra: "BigradedAlgebra") -> "BlockOperator":
        return cls(algebra, {})

    @classmethod
    def from_blocks(cls, algebra, shift, blocks) -> "BlockOperator":
        return cls(algebra, {tuple(shift): dict(blocks)})

    @classmethod
    def identity(cls, algebra) -> "BlockOperator":
        blocks = {
            pq: ExactMatrix.identity(len(basis))
            for pq, basis in algebra.blocks.items()
        }
        return cls(algebra, {(0, 0): blocks})

    @property
    def shifts(self) -> tuple:
        return tuple(sorted(self.terms))

    @property
    def shift(self) -> tuple:
        if len(self.terms) != 1:
            raise AlgebraError(f"operator is not pure: shifts {self.shifts}")
        return next(iter(self.terms))

    @property
    def degrees(self) -> tuple:
        """Total degrees r+s present, ascending; empty for the zero operator."""
        return tuple(sorted({r + s for (r, s) in self.terms}))

    @property
    def parity(self) -> Optional[int]:
        """0 or 1 when every shift has the same total-degree parity, else None.
        The zero operator counts as even."""
        ps = {(r + s) % 2 for (r, s) in self.terms}
        if not ps:
            return 0
        if len(ps) > 1:
            return None
        return ps.pop()

    def is_pure(self) -> bool:
        return len(self.terms) <= 1

    def block(self, pq: BlockKey, shift: Optional[tuple] = None) -> ExactMatrix:
        """Matrix out of block pq for the given shift (the unique one if pure),
        zero-shaped when absent."""
        if shift is None:
            shift = self.shift if self.terms else (0, 0)
        mat = self.terms.get(tuple(shift), {}).get(pq)
        if mat is not None:
            return mat
        tgt = (pq[0] + shift[0], pq[1] + shift[1])
        rows = len(self.algebra.blocks.get(tgt, ()))
        return ExactMatrix.zeros(rows, len(self.algebra.blocks[pq]))

    def apply(self, form: Form) -> Form:
        if form.algebra is not self.algebra:
            raise AlgebraError("form and operator live on different algebras")
        out: Dict[BlockKey, list] = {}
        for (r, s), blocks in self.terms.items():
            for pq, vec in form.components.items():
                mat = blocks.get(pq)
                if mat is None:
                    continue
                tgt = (pq[0] + r, pq[1] + s)
                img = mat.apply(vec)
                if tgt in out:
                    out[tgt] = [a + b for a, b in zip(out[tgt], img)]
                else:
                    out[tgt] = list(img)
        return Form(self.algebra, out)

    def compose(self, other: "BlockOperator") -> "BlockOperator":
        """self after other."""
        if self.algebra is not other.algebra:
            raise AlgebraError("operators live on different algebras")
        acc: Dict[tuple, Dict[BlockKey, ExactMatrix]] = {}
        for (r2, s2), blocks2 in other.terms.items():
            for pq, m2 in blocks2.items():
                mid = (pq[0] + r2, pq[1] + s2)
                for (r1, s1), blocks1 in self.terms.items():
                    m1 = blocks1.get(mid)
                    if m1 is None:
                        continue
                    shift = (r1 + r2, s1 + s2)
                    prod = m1 @ m2
                    dest = acc.setdefault(shift, {})
                    if pq in dest:
                        dest[pq] = dest[pq] + prod
                    else:
                        dest[pq] = prod
        return BlockOperator(self.algebra, acc)

    def __add__(self, other: "BlockOperator") -> "BlockOperator":
        if self.algebra is not other.algebra:
            raise AlgebraError("operators live on different algebras")
        acc = {shift: dict(blocks) for shift, blocks in self.terms.items()}
        for shift, blocks in other.terms.items():
            dest = acc.setdefault(shift, {})
            for pq, mat in blocks.items():
                if pq in dest:
                    dest[pq] = dest[pq] + mat
                else:
                    dest[pq] = mat
        return BlockOperator(self.algebra, acc)

    def __sub__(self, other: "BlockOperator") -> "BlockOperator":
        return self + other.scale(GaussScalar(-1))

    def __neg__(self) -> "BlockOperator":
        return self.scale(GaussScalar(-1))

    def scale(self, c) -> "BlockOperator":
        c = c if isinstance(c, GaussScalar) else GaussScalar(c)
        return BlockOperator(
            self.algebra,
            {
                shift: {pq: mat * c for pq, mat in blocks.items()}
                for shift, blocks in self.terms.items()
            },
        )

    def adjoint(self) -> "BlockOperator":
        """Gram adjoint: <A u, v> = <u, A* v> for the Hermitian block products."""
        alg = self.algebra
        acc: Dict[tuple, Dict[BlockKey, ExactMatrix]] = {}
        for (r, s), blocks in self.terms.items():
            dest = acc.setdefault((-r, -s), {})
            for pq, mat in blocks.items():
                tgt = (pq[0] + r, pq[1] + s)
                adj = (
                    alg.gram_conj_inv[pq]
                    @ mat.conj_transpose()
                    @ alg.gram[tgt].conj()
                )
                if tgt in dest:
                    dest[tgt] = dest[tgt] + adj
                else:
                    dest[tgt] = adj
        return BlockOperator(alg, acc)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, BlockOperator):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted((s, tuple(sorted(b.items()))) for s, b in self.terms.items())))

    def first_nonzero(self):
        """(block, basis index) of the first basis form with nonzero image,
        scanning blocks in the canonical order; None for the zero operator."""
        for pq in self.algebra.block_order:
            for shift in self.shifts:
                mat = self.terms[shift].get(pq)
                if mat is None:
                    continue
                for col in range(mat.cols):
                    if any(mat[row, col] for row in range(mat.rows)):
                        return pq, col
        return None

    def __repr__(self) -> str:
        if not self.terms:
            return "BlockOperator(0)"
        shifts = ", ".join(str(s) for s in self.shifts)
        return f"BlockOperator(shifts {shifts})"


class BigradedAlgebra:
    """The full bigraded calculus of one model, built eagerly and exactly.

    Attributes of note: blocks (basis monomials per bidegree), gram, the four
    differential components mu_bar / dbar / partial / mu and their sum d, the
    Hodge star, the Lefschetz triple L / lam / weight_h, the parity operator
    weight (i^{p-q} per block), fundamental_form, and integrate().
    """

    def __init__(self, model: LieModel):
        report = validate(model)
        if not report.structure_ok:
            raise ModelError(
                f"model {model.name!r} fails structural checks: "
                f"jacobi={report.jacobi_ok} acs={report.acs_ok} "
                f"compatible={report.compatible_ok}"
            )
        self.model = model
        self.validation = report
        self.m = model.m
        n = model.dim

        self.coframe = self._resolve_coframe()
        conj_rows = tuple(tuple(x.conj() for x in row) for row in self.coframe)
        self.T = ExactMatrix(list(self.coframe) + list(conj_rows))
        try:
            self.T_inv = inverse(self.T)
        except ExactError as exc:
            raise ModelError("coframe rows and conjugates are dependent") from exc

        m = self.m
        self.blocks: Dict[BlockKey, tuple] = {}
        for p in range(m + 1):
            for q in range(m + 1):
                basis = []
                for I in itertools.combinations(range(m), p):
                    for J in itertools.combinations(range(m), q):
                        basis.append(I + tuple(m + j for j in J))
                self.blocks[(p, q)] = tuple(basis)
        self.block_order = tuple(
            sorted(self.blocks, key=self.block_sort_key)
        )
        self.mono_index: Dict[Mono, tuple] = {}
        for pq, basis in self.blocks.items():
            for idx, mono in enumerate(basis):
                self.mono_index[mono] = (pq, idx)

        self._expansion_cache: Dict[Mono, dict] = {}
        self.gram: Dict[BlockKey, ExactMatrix] = {}
        for pq in self.block_order:
            basis = self.blocks[pq]
            expa = [self._real_expansion(mono) for mono in basis]
            rows = []
            for ea in expa:
                row = []
                for eb in expa:
                    acc = GAUSS_ZERO
                    for rmono, ca in ea.items():
                        cb = eb.get(rmono)
                        if cb is not None:
                            acc = acc + ca * cb.conj()
                    row.append(acc)
                rows.append(row)
            self.gram[pq] = ExactMatrix(rows)
        self.gram_conj_inv: Dict[BlockKey, ExactMatrix] = {
            pq: inverse(g.conj()) for pq, g in self.gram.items()
        }

        self._dgen = self._differential_on_generators()
        self._d_mono_cache: Dict[Mono, dict] = {}
        comps = self._differential_components()
        self.mu_bar = comps[MU_BAR_SHIFT]
        self.dbar = comps[DBAR_SHIFT]
        self.partial = comps[PARTIAL_SHIFT]
        self.mu = comps[MU_SHIFT]
        self.d = self.mu_bar + self.dbar + self.partial + self.mu
        if not self.d.compose(self.d).is_zero():
            raise AlgebraError("d squared is nonzero; sign conventions broken")

        self.fundamental_form = self._build_fundamental_form()

        # orientation: the top power of the fundamental form fixes the sign
        # of the volume so that integrate(omega^m / m!) = +1
        top = self.fundamental_form
        for _ in range(m - 1):
            top = top.wedge(self.fundamental_form)
        fact = Fraction(1)
        for k in range(2, m + 1):
            fact *= k
        top = top.scale(GaussScalar(Fraction(1, fact)))
        tau = tuple(range(2 * m))
        self._top_mono = tau
        self._top_real_coeff = self._real_expansion(tau)[tuple(range(n))]
        coeff = top.coefficient(tau) * self._top_real_coeff
        if not coeff.is_real() or abs(coeff.re) != 1:
            raise AlgebraError(
                f"omega^m/m! has top coefficient {format_scalar(coeff)}, expected +-1"
            )
        self.orientation = 1 if coeff.re > 0 else -1
        self.volume_form = self.form_from_monomials(
            {tau: GaussScalar(self.orientation) / self._top_real_coeff}
        )

        self.star = self._build_star()
        self.weight = self._build_weight(1)
        self.weight_inv = self._build_weight(-1)
        self.L, self.lam, self.weight_h = lefschetz_triple(self, self.fundamental_form)

    # -- construction helpers ------------------------------------------------

    def _resolve_coframe(self) -> tuple:
        model = self.model
        n = model.dim
        K = ExactMatrix(model.J).transpose()  # dual action on coframe coordinates
        if model.coframe is not None:
            rows = tuple(tuple(x for x in row) for row in model.coframe)
            if len(rows) != self.m or any(len(r) != n for r in rows):
                raise ModelError("coframe override must have m rows of length dim")
            for row in rows:
                image = K.apply(row)
                if tuple(image) != tuple(GAUSS_I * x for x in row):
                    raise ModelError("coframe row is not a +i eigenvector")
            return rows
        shifted = K - ExactMatrix.identity(n) * GAUSS_I
        eigen = kernel(shifted)
        if len(eigen) != self.m:
            raise ModelError("almost complex structure has defective eigenspace")
        # row-reduce the eigenbasis so each generator has leading coefficient 1,
        # then halve: for block-diagonal J this is the coframe dual to X - iJX
        reduced, pivots = rref(ExactMatrix(eigen))
        half = GaussScalar(Fraction(1, 2))
        return tuple(
            tuple(half * x for x in reduced.row(r)) for r in range(len(pivots))
        )

    def _real_expansion(self, mono: Mono) -> dict:
        """Expansion of a coframe monomial over real frame monomials."""
        mono = tuple(mono)
        cached = self._expansion_cache.get(mono)
        if cached is not None:
            return cached
        if not mono:
            out = {(): GAUSS_ONE}
        elif len(mono) == 1:
            out = {
                (k,): c
                for k, c in enumerate(self.T.row(mono[0]))
                if c
            }
        else:
            head = self._real_expansion(mono[:1])
            tail = self._real_expansion(mono[1:])
            out = {}
            for r1, c1 in head.items():
                for r2, c2 in tail.items():
                    merged = merge_wedge(r1, r2)
                    if merged is None:
                        continue
                    rm, sign = merged
                    term = c1 * c2
                    if sign < 0:
                        term = -term
                    prev = out.get(rm)
                    out[rm] = term if prev is None else prev + term
            out = {rm: c for rm, c in out.items() if c}
        self._expansion_cache[mono] = out
        return out

    def _differential_on_generators(self) -> list:
        """d of each coframe generator as a dict over 2-monomials."""
        model = self.model
        n = model.dim
        out = []
        for g in range(2 * self.m):
            trow = self.T.row(g)
            real2: Dict[Mono, GaussScalar] = {}
            for (i, j, k, c) in model.brackets:
                tk = trow[k]
                if not tk:
                    continue
                contrib = tk * GaussScalar(-c)
                key = (i, j)
                prev = real2.get(key)
                real2[key] = contrib if prev is None else prev + contrib
            out.append(self._complexify_real(real2))
        return out

    def _complexify_real(self, real_comps: Mapping[Mono, GaussScalar]) -> dict:
        """Rewrite a dict over real frame monomials in coframe monomials."""
        acc: Dict[Mono, GaussScalar] = {}

        def gen_expansion(k: int) -> dict:
            return {
                (s,): c for s, c in enumerate(self.T_inv.row(k)) if c
            }

        def expand(rmono: Mono) -> dict:
            if not rmono:
                return {(): GAUSS_ONE}
            head = gen_expansion(rmono[0])
            tail = expand(rmono[1:])
            out: Dict[Mono, GaussScalar] = {}
            for m1, c1 in head.items():
                for m2, c2 in tail.items():
                    merged = merge_wedge(m1, m2)
                    if merged is None:
                        continue
                    mono, sign = merged
                    term = c1 * c2
                    if sign < 0:
                        term = -term
                    prev = out.get(mono)
                    out[mono] = term if prev is None else prev + term
            return out

        for rmono, coeff in real_comps.items():
            if not coeff:
                continue
            for mono, c in expand(tuple(rmono)).items():
                term = coeff * c
                prev = acc.get(mono)
                acc[mono] = term if prev is None else prev + term
        return {mono: c for mono, c in acc.items() if c}

    def _d_monomial(self, mono: Mono) -> dict:
        cached = self._d_mono_cache.get(mono)
        if cached is not None:
            return cached
        if not mono:
            out: Dict[Mono, GaussScalar] = {}
        elif len(mono) == 1:
            out = dict(self._dgen[mono[0]])
        else:
            head, rest = mono[:1], mono[1:]
            out = {}
            for m2, c in self._dgen[head[0]].items():
                merged = merge_wedge(m2, rest)
                if merged is None:
                    continue
                tgt, sign = merged
                term = c if sign > 0 else -c
                prev = out.get(tgt)
                out[tgt] = term if prev is None else prev + term
            for m2, c in self._d_monomial(rest).items():
                merged = merge_wedge(head, m2)
                if merged is None:
                    continue
                tgt, sign = merged
                term = -c if sign > 0 else c
                prev = out.get(tgt)
                out[tgt] = term if prev is None else prev + term
            out = {t: c for t, c in out.items() if c}
        self._d_mono_cache[mono] = out
        return out

    def _differential_components(self) -> dict:
        per_shift = {shift: {} for shift in D_SHIFTS}
        for pq, basis in self.blocks.items():
            p, q = pq
            cols = {shift: {} for shift in D_SHIFTS}
            for j, mono in enumerate(basis):
                for tgt_mono, coeff in self._d_monomial(mono).items():
                    tgt_pq, row = self.mono_index[tgt_mono]
                    shift = (tgt_pq[0] - p, tgt_pq[1] - q)
                    if shift not in per_shift:
                        raise AlgebraError(
                            f"differential produced illegal bidegree shift {shift}"
                        )
                    cols[shift].setdefault(j, []).append((row, coeff))
            for shift, entries in cols.items():
                tgt_pq = (p + shift[0], q + shift[1])
                if tgt_pq not in self.blocks:
                    if entries:
                        raise AlgebraError("image block out of range")
                    continue
                if not entries:
                    continue
                rows = len(self.blocks[tgt_pq])
                mat = [[GAUSS_ZERO] * len(basis) for _ in range(rows)]
                for j, items in entries.items():
                    for row, coeff in items:
                        mat[row][j] = mat[row][j] + coeff
                per_shift[shift][pq] = ExactMatrix(mat)
        return {
            shift: BlockOperator(self, {shift: blocks})
            for shift, blocks in per_shift.items()
        }

    def _build_fundamental_form(self) -> Form:
        model = self.model
        comps: Dict[Mono, GaussScalar] = {}
        for a in range(model.dim):
            for b in range(a + 1, model.dim):
                val = model.omega(a, b)
                if val:
                    comps[(a, b)] = GaussScalar(val)
        form = self.form_from_real(comps, degree=2)
        if set(form.components) - {(1, 1)}:
            raise AlgebraError("fundamental form is not of pure bidegree (1,1)")
        if form.conj() != form:
            raise AlgebraError("fundamental form is not real")
        return form

    def _build_star(self) -> BlockOperator:
        """Solve alpha ^ star(gamma) = <alpha, gamma> vol blockwise.

        For gamma in A^{p,q} the pairing runs over alpha in A^{q,p}; the
        bilinear extension of the frame metric appears on the right, which is
        the Hermitian product of alpha against the conjugate of gamma.
        """
        m = self.m
        blocks = {}
        vol_coeff = GaussScalar(self.orientation) / self._top_real_coeff
        for (p, q), basis in self.blocks.items():
            tgt = (m - q, m - p)
            pair_basis = self.blocks[(q, p)]
            tgt_basis = self.blocks[tgt]
            if not basis:
                continue
            wedge_rows = []
            for am in pair_basis:
                row = []
                for tm in tgt_basis:
                    merged = merge_wedge(am, tm)
                    if merged is None or merged[0] != self._top_mono:
                        row.append(GAUSS_ZERO)
                    else:
                        row.append(GaussScalar(merged[1]))
                wedge_rows.append(row)
            W = ExactMatrix(wedge_rows)
            expa = [self._real_expansion(mono) for mono in pair_basis]
            expg = [self._real_expansion(mono) for mono in basis]
            rhs_rows = []
            for ea in expa:
                row = []
                for eg in expg:
                    acc = GAUSS_ZERO
                    for rmono, ca in ea.items():
                        cg = eg.get(rmono)
                        if cg is not None:
                            acc = acc + ca * cg
                    row.append(acc * vol_coeff)
                rhs_rows.append(row)
            B = ExactMatrix(rhs_rows)
            blocks[(p, q)] = inverse(W) @ B
        return BlockOperator(self, self._star_terms(blocks))

    def _star_terms(self, blocks) -> dict:
        terms: Dict[tuple, dict] = {}
        m = self.m
        for (p, q), mat in blocks.items():
            shift = (m - q - p, m - p - q)
            terms.setdefault(shift, {})[(p, q)] = mat
        return terms

    def _build_weight(self, direction: int) -> BlockOperator:
        """Diagonal operator i^{p-q} per block (i^{q-p} for direction=-1)."""
        powers = [GAUSS_ONE, GAUSS_I, GaussScalar(-1), -GAUSS_I]
        blocks = {}
        for pq, basis in self.blocks.items():
            if not basis:
                continue
            c = powers[(direction * (pq[0] - pq[1])) % 4]
            blocks.setdefault((0, 0), {})[pq] = ExactMatrix.identity(len(basis)) * c
        return BlockOperator(self, blocks)

    # -- public helpers -------------------------------------------------------

    @staticmethod
    def block_sort_key(pq: BlockKey):
        return (pq[0] + pq[1], -pq[0])

    def dim_block(self, pq: BlockKey) -> int:
        return len(self.blocks[pq])

    def zero_form(self) -> Form:
        return Form(self, {})

    def basis_form(self, pq: BlockKey, idx: int) -> Form:
        n = len(self.blocks[pq])
        vec = [GAUSS_ZERO] * n
        vec[idx] = GAUSS_ONE
        return Form(self, {pq: vec})

    def generator_form(self, g: int) -> Form:
        return self.basis_form(*self.mono_index[(g,)])

    def form_from_monomials(self, comps: Mapping[Mono, object]) -> Form:
        grouped: Dict[BlockKey, dict] = {}
        for mono, coeff in comps.items():
            if not coeff:
                continue
            pq, idx = self.mono_index[tuple(mono)]
            grouped.setdefault(pq, {})[idx] = coeff
        out = {}
        for pq, entries in grouped.items():
            vec = [GAUSS_ZERO] * len(self.blocks[pq])
            for idx, coeff in entries.items():
                vec[idx] = coeff
            out[pq] = vec
        return Form(self, out)

    def form_from_real(self, comps: Mapping[Mono, GaussScalar], degree: Optional[int] = None) -> Form:
        """Build a Form from coefficients over real frame monomials."""
        if degree is not None:
            for rmono in comps:
                if len(rmono) != degree:
                    raise AlgebraError("real monomial degree mismatch")
        return self.form_from_monomials(self._complexify_real(comps))

    def real_coordinates(self, form: Form, degree: int) -> tuple:
        """Coordinates of a pure-degree form over real frame monomials."""
        basis = list(itertools.combinations(range(2 * self.m), degree))
        index = {mono: i for i, mono in enumerate(basis)}
        out = [GAUSS_ZERO] * len(basis)
        for pq, vec in form.components.items():
            if pq[0] + pq[1] != degree:
                raise AlgebraError("form is not of the requested pure degree")
            for j, c in enumerate(vec):
                if not c:
                    continue
                for rmono, rc in self._real_expansion(self.blocks[pq][j]).items():
                    out[index[rmono]] = out[index[rmono]] + c * rc
        return tuple(out)

    def integrate(self, form: Form) -> GaussScalar:
        """Coefficient of the oriented volume form in the top component."""
        top = form.components.get((self.m, self.m))
        if top is None:
            return GAUSS_ZERO
        coeff = top[0]
        return coeff * self._top_real_coeff * GaussScalar(self.orientation)

    def generator_name(self, g: int) -> str:
        if g < self.m:
            return f"a{g + 1}"
        return f"a{g - self.m + 1}~"

    def monomial_name(self, mono: Mono) -> str:
        if not mono:
            return "1"
        return "^".join(self.generator_name(g) for g in mono)

    def format_form(self, form: Form) -> str:
        if form.is_zero():
            return "0"
        parts = []
        for pq in form.bidegrees():
            vec = form.components[pq]
            basis = self.blocks[pq]
            for j, c in enumerate(vec):
                if not c:
                    continue
                cs = format_scalar(c) if isinstance(c, GaussScalar) else str(c)
                if cs == "1":
                    parts.append(self.monomial_name(basis[j]))
                elif cs == "-1":
                    parts.append(f"-{self.monomial_name(basis[j])}")
                else:
                    wrap = f"({cs})" if ("+" in cs or "-" in cs[1:] or "*" in cs) else cs
                    parts.append(f"{wrap}*{self.monomial_name(basis[j])}")
        return " + ".join(parts)


@functools.lru_cache(maxsize=None)
def build(model: LieModel) -> BigradedAlgebra:
    """Construct (and cache) the bigraded calculus of a validated model."""
    return BigradedAlgebra(model)


def form_from_coordinates(algebra: BigradedAlgebra, pq: BlockKey, vec: Sequence) -> Form:
    """Form with coordinate vector ``vec`` on block ``pq``."""
    return Form(algebra, {pq: tuple(vec)})


def ce_differential(algebra: BigradedAlgebra) -> BlockOperator:
    """The Chevalley differential, a sum of four pure bidegree components."""
    return algebra.d


def weight_operator(algebra: BigradedAlgebra) -> BlockOperator:
    return algebra.weight


def hodge_star(algebra: BigradedAlgebra) -> BlockOperator:
    return algebra.star


def lefschetz_triple(algebra: BigradedAlgebra, omega: Optional[Form] = None):
    """(L, Lam, H): wedge with omega, its Gram adjoint, their commutator."""
    if omega is None:
        omega = algebra.fundamental_form
    if set(omega.components) - {(1, 1)}:
        raise AlgebraError("Lefschetz operator needs a (1,1)-form")
    blocks: Dict[BlockKey, ExactMatrix] = {}
    for pq, basis in algebra.blocks.items():
        tgt = (pq[0] + 1, pq[1] + 1)
        if tgt not in algebra.blocks:
            continue
        rows = len(algebra.blocks[tgt])
        mat = [[GAUSS_ZERO] * len(basis) for _ in range(rows)]
        nontrivial = False
        for j, mono in enumerate(basis):
            image = omega.wedge(algebra.basis_form(pq, j))
            vec = image.components.get(tgt)
            if vec is None:
                continue
            for row, c in enumerate(vec):
                if c:
                    mat[row][j] = c
                    nontrivial = True
        if nontrivial:
            blocks[pq] = ExactMatrix(mat)
    L = BlockOperator(algebra, {(1, 1): blocks})
    lam = L.adjoint()
    H = L.compose(lam) - lam.compose(L)
    return L, lam, H


_D2_RELATIONS = (
    ("d2_mu_mu", "mu mu = 0", ((MU_SHIFT, MU_SHIFT),)),
    ("d2_mu_partial", "mu partial + partial mu = 0", ((MU_SHIFT, PARTIAL_SHIFT), (PARTIAL_SHIFT, MU_SHIFT))),
    (
        "d2_mu_dbar_partial2",
        "mu dbar + dbar mu + partial partial = 0",
        ((MU_SHIFT, DBAR_SHIFT), (DBAR_SHIFT, MU_SHIFT), (PARTIAL_SHIFT, PARTIAL_SHIFT)),
    ),
    (
        "d2_square_balance",
        "mu mubar + mubar mu + partial dbar + dbar partial = 0",
        (
            (MU_SHIFT, MU_BAR_SHIFT),
            (MU_BAR_SHIFT, MU_SHIFT),
            (PARTIAL_SHIFT, DBAR_SHIFT),
            (DBAR_SHIFT, PARTIAL_SHIFT),
        ),
    ),
    (
        "d2_mubar_partial_dbar2",
        "mubar partial + partial mubar + dbar dbar = 0",
        ((MU_BAR_SHIFT, PARTIAL_SHIFT), (PARTIAL_SHIFT, MU_BAR_SHIFT), (DBAR_SHIFT, DBAR_SHIFT)),
    ),
    ("d2_mubar_dbar", "mubar dbar + dbar mubar = 0", ((MU_BAR_SHIFT, DBAR_SHIFT), (DBAR_SHIFT, MU_BAR_SHIFT))),
    ("d2_mubar_mubar", "mubar mubar = 0", ((MU_BAR_SHIFT, MU_BAR_SHIFT),)),
)


def d_squared_relations(algebra: BigradedAlgebra) -> list:
    """The seven bidegree components of d^2 = 0, each checked separately.

    Returns a list of dicts with id, statement, holds, and (on failure) the
    first monomial witnessing the violation.  A failure can only come from a
    sign error in this module, never from model data, so build() refuses to
    return an algebra where any of these fail.
    """
    by_shift = {
        MU_BAR_SHIFT: algebra.mu_bar,
        DBAR_SHIFT: algebra.dbar,
        PARTIAL_SHIFT: algebra.partial,
        MU_SHIFT: algebra.mu,
    }
    out = []
    for rel_id, statement, pairs in _D2_RELATIONS:
        total = BlockOperator.zero(algebra)
        for first, second in pairs:
            total = total + by_shift[first].compose(by_shift[second])
        holds = total.is_zero()
        witness = None
        if not holds:
            loc = total.first_nonzero()
            if loc is not None:
                witness = algebra.basis_form(*loc)
        out.append(
            {
                "id": rel_id,
                "statement": statement,
                "holds": holds,
                "witness": witness,
            }
        )
    return out


# ---------------------------------------------------------------------------
# form serialization


def form_to_json(form: Form) -> dict:
    out = {}
    algebra = form.algebra
    for pq in form.bidegrees():
        vec = form.components[pq]
        basis = algebra.blocks[pq]
        entries = {}
        for j, c in enumerate(vec):
            if not c:
                continue
            if not isinstance(c, GaussScalar):
                raise AlgebraError("only scalar forms serialize to JSON")
            entries[algebra.monomial_name(basis[j])] = format_scalar(c)
        out[f"{pq[0]},{pq[1]}"] = entries
    return out


def _parse_monomial(algebra: BigradedAlgebra, text: str) -> Mono:
    text = text.strip()
    if text == "1":
        return ()
    gens = []
    for piece in text.split("^"):
        piece = piece.strip()
        barred = piece.endswith("~")
        if barred:
            piece = piece[:-1]
        if not piece.startswith("a"):
            raise AlgebraError(f"bad generator {piece!r}")
        try:
            idx = int(piece[1:]) - 1
        except ValueError:
            raise AlgebraError(f"bad generator index in {piece!r}") from None
        if not (0 <= idx < algebra.m):
            raise AlgebraError(f"generator index out of range in {piece!r}")
        gens.append(idx + algebra.m if barred else idx)
    mono = tuple(sorted(gens))
    if len(set(mono)) != len(mono):
        raise AlgebraError(f"repeated generator in monomial {text!r}")
    return mono


def form_from_json(algebra: BigradedAlgebra, data: Mapping) -> Form:
    comps: Dict[Mono, GaussScalar] = {}
    for block_key, entries in data.items():
        try:
            p_str, q_str = str(block_key).split(",")
            p, q = int(p_str), int(q_str)
        except ValueError:
            raise AlgebraError(f"bad block key {block_key!r}") from None
        for mono_text, coeff_text in entries.items():
            mono = _parse_monomial(algebra, mono_text)
            pq, _ = algebra.mono_index[mono]
            if pq != (p, q):
                raise AlgebraError(
                    f"monomial {mono_text!r} is not of bidegree ({p},{q})"
                )
            comps[mono] = comps.get(mono, GAUSS_ZERO) + parse_scalar(coeff_text)
    return algebra.form_from_monomials(comps)
