"""Harmonic diamonds, dualities, Lefschetz theory, and obstruction reports.

Every computation here is exact and concerns the invariant complex of a
Lie-algebra model: kernels, ranks, and signatures are taken over the
Gaussian rationals on the finite-dimensional bidegree blocks.  Reports say
"invariant" rather than claiming manifold-level statements; for nilpotent
models the Betti numbers do agree with the underlying nilmanifold.

Harmonic spaces come in several flavours selected by a ``which`` string:

* ``"d"``: joint kernel of all four bidegree components of d and of their
  adjoints (eight operators);
* one of ``"mu_bar"``, ``"dbar"``, ``"partial"``, ``"mu"``: kernel of that
  component and its adjoint;
* ``"dbar+mu"`` or ``"partial+mu_bar"``: kernel of the sum of the two
  component Laplacians.

The diamond dimension ``ell[p][q]`` is dim ker on the (p,q) block for
``"dbar+mu"``.  On almost Kahler models all flavours of ``"d"``,
``"dbar+mu"`` and ``"partial+mu_bar"`` agree; on other models their
differences are the interesting data and feed the obstruction reports.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .exact import (
    GAUSS_I,
    GAUSS_ONE,
    GAUSS_ZERO,
    ExactMatrix,
    GaussScalar,
    ParamPoly,
    hermitian_signature,
    in_span,
    kernel,
    rank,
    rref,
    symmetric_signature,
    vstack,
)
from .forms import (
    DBAR_SHIFT,
    MU_BAR_SHIFT,
    BigradedAlgebra,
    BlockOperator,
    Form,
    build,
    form_from_coordinates,
    form_to_json,
)
from .model import LieModel, validate
from .operators import laplacian, laplacian_symmetry_witness

__all__ = [
    "HarmonicError",
    "WHICH_CHOICES",
    "harmonic_basis",
    "Diamond",
    "ell_diamond",
    "betti",
    "LefschetzMap",
    "LefschetzReport",
    "hard_lefschetz",
    "PrimitiveDecomposition",
    "primitive_decomposition",
    "HodgeRiemannReport",
    "hodge_riemann_check",
    "HodgeIndexReport",
    "hodge_index",
    "HolomorphicReport",
    "holomorphic_forms",
    "mu_bar_cohomology",
    "AK_NONEXISTENCE_VERDICT",
    "AkNonexistenceReport",
    "ak_nonexistence_report",
    "ObstructionReport",
    "obstruction_report",
]


class HarmonicError(ValueError):
    pass


WHICH_CHOICES = ("d", "mu_bar", "dbar", "partial", "mu", "dbar+mu", "partial+mu_bar")


def _check_block(alg: BigradedAlgebra, p: int, q: int) -> None:
    if not (0 <= p <= alg.m and 0 <= q <= alg.m):
        raise HarmonicError(f"bidegree ({p},{q}) out of range for m={alg.m}")


@functools.lru_cache(maxsize=None)
def _constraint_operators(model: LieModel, which: str) -> tuple:
    alg = build(model)
    if which == "d":
        comps = (alg.mu_bar, alg.dbar, alg.partial, alg.mu)
        return comps + tuple(op.adjoint() for op in comps)
    if which == "dbar+mu":
        return (laplacian(alg.dbar) + laplacian(alg.mu),)
    if which == "partial+mu_bar":
        return (laplacian(alg.partial) + laplacian(alg.mu_bar),)
    singles = {
        "mu_bar": alg.mu_bar,
        "dbar": alg.dbar,
        "partial": alg.partial,
        "mu": alg.mu,
    }
    if which not in singles:
        raise HarmonicError(
            f"unknown harmonic space {which!r}; choose one of {WHICH_CHOICES}")
    op = singles[which]
    return (op, op.adjoint())


@functools.lru_cache(maxsize=None)
def _harmonic_vectors(model: LieModel, which: str, pq: tuple) -> tuple:
    """Canonical coordinate basis of the requested harmonic space on pq."""
    alg = build(model)
    n = len(alg.blocks[pq])
    if n == 0:
        return ()
    mats = []
    for op in _constraint_operators(model, which):
        for shift in op.shifts:
            mat = op.block(pq, shift)
            if mat.shape[0]:
                mats.append(mat)
    if not mats:
        eye = ExactMatrix.identity(n)
        return tuple(eye.row(i) for i in range(n))
    return tuple(kernel(vstack(mats)))


def harmonic_basis(model: LieModel, which: str, p: int, q: int) -> tuple:
    """Deterministic basis of the chosen harmonic space as Forms."""
    alg = build(model)
    _check_block(alg, p, q)
    return tuple(
        form_from_coordinates(alg, (p, q), vec)
        for vec in _harmonic_vectors(model, which, (p, q)))


def _ell(model: LieModel, p: int, q: int) -> int:
    return len(_harmonic_vectors(model, "dbar+mu", (p, q)))


def _in_span(basis: Sequence, vec: Sequence) -> bool:
    if not basis:
        return not any(vec)
    return in_span(basis, vec)


def _combine(vectors: Sequence, coeffs: Sequence) -> tuple:
    out = list(vectors[0])
    for k in range(len(out)):
        out[k] = coeffs[0] * out[k]
    for c, v in zip(coeffs[1:], vectors[1:]):
        for k in range(len(out)):
            out[k] = out[k] + c * v[k]
    return tuple(out)


# -- total-degree complex ------------------------------------------------------


def _degree_blocks(alg: BigradedAlgebra, k: int) -> list:
    return [pq for pq in alg.block_order if pq[0] + pq[1] == k]


def _degree_matrix(alg: BigradedAlgebra, op: BlockOperator, k_src: int, k_tgt: int):
    """Matrix of ``op`` from the total-degree ``k_src`` space to ``k_tgt``.

    Block coordinates are concatenated in canonical block order.  Returns
    the matrix together with the source block offsets.
    """
    srcs = _degree_blocks(alg, k_src)
    tgts = _degree_blocks(alg, k_tgt)
    src_off = {}
    cols = 0
    for pq in srcs:
        src_off[pq] = cols
        cols += len(alg.blocks[pq])
    tgt_off = {}
    rows = 0
    for pq in tgts:
        tgt_off[pq] = rows
        rows += len(alg.blocks[pq])
    if rows == 0 or cols == 0:
        return ExactMatrix.zeros(rows, cols), src_off
    grid = [[GAUSS_ZERO] * cols for _ in range(rows)]
    for pq in srcs:
        n = len(alg.blocks[pq])
        if n == 0:
            continue
        for shift in op.shifts:
            tgt = (pq[0] + shift[0], pq[1] + shift[1])
            if tgt not in tgt_off:
                continue
            mat = op.block(pq, shift)
            for r in range(mat.shape[0]):
                row = grid[tgt_off[tgt] + r]
                for c in range(n):
                    v = mat[r, c]
                    if v:
                        row[src_off[pq] + c] = v
    return ExactMatrix(grid), src_off


def _form_from_degree_vector(alg: BigradedAlgebra, vec: Sequence, src_off: dict) -> Form:
    comps = {}
    for pq, off in src_off.items():
        n = len(alg.blocks[pq])
        if n:
            comps[pq] = tuple(vec[off:off + n])
    return Form(alg, comps)


@functools.lru_cache(maxsize=None)
def betti(model: LieModel) -> tuple:
    """Invariant Betti numbers b^0..b^{2m} (real cohomology for nilpotent
    models)."""
    alg = build(model)
    top = 2 * alg.m
    dims = [sum(len(alg.blocks[pq]) for pq in _degree_blocks(alg, k))
            for k in range(top + 1)]
    ranks = [rank(_degree_matrix(alg, alg.d, k, k + 1)[0]) for k in range(top + 1)]
    out = []
    for k in range(top + 1):
        closed = dims[k] - ranks[k]
        exact = ranks[k - 1] if k > 0 else 0
        out.append(closed - exact)
    return tuple(out)


# -- diamond -------------------------------------------------------------------


@dataclass(frozen=True)
class Diamond:
    """Grid of harmonic dimensions with Betti numbers and validity flags.

    ``ell[p][q]`` is the dimension of ker of the mixed Laplacian sum on the
    (p,q) block.  Flags are None on models that are not almost Kahler,
    where the dualities they express are not asserted.
    """

    m: int
    ell: tuple
    betti: tuple
    duality_ok: Optional[bool]
    bounds_ok: Optional[bool]
    lefschetz_ok: Optional[bool]

    def row(self, k: int) -> tuple:
        """Entries of total degree k, holomorphic index descending."""
        top = min(k, self.m)
        bottom = max(0, k - self.m)
        return tuple(self.ell[p][k - p] for p in range(top, bottom - 1, -1))

    def rows(self) -> tuple:
        return tuple(self.row(k) for k in range(2 * self.m + 1))

    def to_json(self) -> dict:
        return {
            "scope": "invariant",
            "m": self.m,
            "ell": [list(r) for r in self.ell],
            "rows": [list(r) for r in self.rows()],
            "betti": list(self.betti),
            "flags": {
                "duality_ok": self.duality_ok,
                "bounds_ok": self.bounds_ok,
                "lefschetz_ok": self.lefschetz_ok,
            },
        }


def ell_diamond(model: LieModel) -> Diamond:
    """Full diamond with Betti numbers; flags evaluated on almost Kahler
    models only."""
    alg = build(model)
    m = alg.m
    grid = tuple(tuple(_ell(model, p, q) for q in range(m + 1))
                 for p in range(m + 1))
    bett = betti(model)
    report = validate(model)
    if not report.almost_kahler:
        return Diamond(m=m, ell=grid, betti=bett,
                       duality_ok=None, bounds_ok=None, lefschetz_ok=None)
    duality = all(
        grid[p][q] == grid[q][p] == grid[m - p][m - q]
        for p in range(m + 1) for q in range(m + 1))
    sums_ok = all(
        sum(grid[p][k - p] for p in range(max(0, k - m), min(k, m) + 1)) <= bett[k]
        for k in range(2 * m + 1))
    center_ok = all(grid[k][k] >= 1 for k in range(m + 1))
    powers_ok = _omega_powers_harmonic(alg)
    lef = hard_lefschetz(model)
    return Diamond(
        m=m, ell=grid, betti=bett,
        duality_ok=duality,
        bounds_ok=sums_ok and center_ok and powers_ok,
        lefschetz_ok=lef.all_iso and lef.monotone_ok,
    )


def _omega_powers_harmonic(alg: BigradedAlgebra) -> bool:
    """Each power of the fundamental form killed by d and its adjoint."""
    d_adj = alg.d.adjoint()
    power = alg.basis_form((0, 0), 0)
    for _ in range(alg.m + 1):
        if not alg.d.apply(power).is_zero():
            return False
        if not d_adj.apply(power).is_zero():
            return False
        power = power.wedge(alg.fundamental_form)
    return True


# -- hard Lefschetz ------------------------------------------------------------


@dataclass(frozen=True)
class LefschetzMap:
    p: int
    q: int
    power: int
    source_dim: int
    target_dim: int
    rank: int
    iso: bool

    def to_json(self) -> dict:
        return {
            "p": self.p, "q": self.q, "power": self.power,
            "source_dim": self.source_dim, "target_dim": self.target_dim,
            "rank": self.rank, "iso": self.iso,
        }


@dataclass(frozen=True)
class LefschetzReport:
    model_name: str
    m: int
    maps: tuple
    monotone_ok: bool
    all_iso: bool

    def map_at(self, p: int, q: int) -> LefschetzMap:
        for entry in self.maps:
            if (entry.p, entry.q) == (p, q):
                return entry
        raise KeyError((p, q))

    def to_json(self) -> dict:
        return {
            "model": self.model_name,
            "maps": [entry.to_json() for entry in self.maps],
            "monotone_ok": self.monotone_ok,
            "all_iso": self.all_iso,
        }


def _lefschetz_power(alg: BigradedAlgebra, pq: tuple, vec, power: int):
    cur = pq
    out = vec
    for _ in range(power):
        out = alg.L.block(cur, (1, 1)).apply(out)
        cur = (cur[0] + 1, cur[1] + 1)
    return out


def hard_lefschetz(model: LieModel) -> LefschetzReport:
    """Wedge powers of the fundamental form on harmonic spaces.

    For every bidegree (p,q) with p+q = k <= m the map sends the d-harmonic
    (p,q) space into the (p+m-k, q+m-k) one via the (m-k)-th power of the
    Lefschetz operator; each map is flagged iso when it is injective onto a
    target of the same dimension.
    """
    report = validate(model)
    if not report.almost_kahler:
        raise HarmonicError("hard Lefschetz requires an almost Kahler model")
    alg = build(model)
    m = alg.m
    maps = []
    all_iso = True
    for k in range(m + 1):
        power = m - k
        for p in range(k + 1):
            q = k - p
            src = _harmonic_vectors(model, "d", (p, q))
            tgt = _harmonic_vectors(model, "d", (p + power, q + power))
            images = [_lefschetz_power(alg, (p, q), v, power) for v in src]
            rk = rank(ExactMatrix(images)) if images else 0
            contained = all(_in_span(tgt, w) for w in images)
            iso = contained and rk == len(src) == len(tgt)
            all_iso = all_iso and iso
            maps.append(LefschetzMap(
                p=p, q=q, power=power,
                source_dim=len(src), target_dim=len(tgt), rank=rk, iso=iso))
    monotone = all(
        _ell(model, p, q) <= _ell(model, p + 1, q + 1)
        for p in range(m) for q in range(m) if p + q + 2 <= m)
    return LefschetzReport(model_name=model.name, m=m, maps=tuple(maps),
                           monotone_ok=monotone, all_iso=all_iso)


# -- primitive decomposition and the positivity pairing -------------------------


@functools.lru_cache(maxsize=None)
def _primitive_vectors(model: LieModel, pq: tuple) -> tuple:
    """d-harmonic vectors on pq additionally killed by the contraction
    operator."""
    alg = build(model)
    harm = _harmonic_vectors(model, "d", pq)
    if not harm:
        return ()
    lam_mat = alg.lam.block(pq, (-1, -1))
    images = [lam_mat.apply(v) for v in harm]
    combos = kernel(ExactMatrix(images).transpose())
    return tuple(_combine(harm, c) for c in combos)


@dataclass(frozen=True)
class PrimitiveDecomposition:
    p: int
    q: int
    summand_dims: tuple
    ell: int
    sum_ok: bool
    orthogonal_ok: bool

    def to_json(self) -> dict:
        return {
            "p": self.p, "q": self.q,
            "summand_dims": list(self.summand_dims),
            "ell": self.ell,
            "sum_ok": self.sum_ok,
            "orthogonal_ok": self.orthogonal_ok,
        }


def primitive_decomposition(model: LieModel, p: int, q: int) -> PrimitiveDecomposition:
    """Split the harmonic (p,q) space into Lefschetz images of primitives.

    ``summand_dims[j]`` is the dimension of the image of the primitive
    harmonic (p-j, q-j) space under the j-th Lefschetz power.  The dims
    must add up to ell(p,q) and distinct summands must be orthogonal for
    the inner product; both facts are recorded as flags.
    """
    report = validate(model)
    if not report.almost_kahler:
        raise HarmonicError("primitive decomposition requires an almost Kahler model")
    alg = build(model)
    _check_block(alg, p, q)
    dims = []
    images = []
    for j in range(min(p, q) + 1):
        base = (p - j, q - j)
        prim = _primitive_vectors(model, base)
        vecs = [_lefschetz_power(alg, base, v, j) for v in prim]
        dims.append(rank(ExactMatrix(vecs)) if vecs else 0)
        images.append(vecs)
    total = sum(dims)
    orthogonal = True
    for j1 in range(len(images)):
        for j2 in range(j1 + 1, len(images)):
            for u in images[j1]:
                fu = form_from_coordinates(alg, (p, q), u)
                for v in images[j2]:
                    fv = form_from_coordinates(alg, (p, q), v)
                    if fu.inner(fv):
                        orthogonal = False
    ell = _ell(model, p, q)
    return PrimitiveDecomposition(
        p=p, q=q, summand_dims=tuple(dims), ell=ell,
        sum_ok=total == ell, orthogonal_ok=orthogonal)


_I_POWERS = (GAUSS_ONE, GAUSS_I, GaussScalar(-1), -GAUSS_I)


@dataclass(frozen=True)
class HodgeRiemannReport:
    p: int
    q: int
    prim_dim: int
    signature_unsigned: tuple
    signature_signed: tuple
    positive_definite: bool

    def to_json(self) -> dict:
        return {
            "p": self.p, "q": self.q, "prim_dim": self.prim_dim,
            "signature_unsigned": list(self.signature_unsigned),
            "signature_signed": list(self.signature_signed),
            "positive_definite": self.positive_definite,
        }


def hodge_riemann_check(model: LieModel, p: int, q: int) -> HodgeRiemannReport:
    """Sign-twisted wedge pairing on primitive harmonics, exact signature.

    The pairing sends (a, b) to the integral of a ^ conj(b) ^ w^(m-p-q)
    scaled by i^(p-q); ``signature_signed`` additionally applies the
    alternating degree sign, after which the form must be positive
    definite on almost Kahler models.
    """
    report = validate(model)
    if not report.almost_kahler:
        raise HarmonicError("the positivity pairing requires an almost Kahler model")
    alg = build(model)
    _check_block(alg, p, q)
    if p + q > alg.m:
        raise HarmonicError("the positivity pairing needs p+q <= m")
    prim = _primitive_vectors(model, (p, q))
    n = len(prim)
    if n == 0:
        return HodgeRiemannReport(p=p, q=q, prim_dim=0,
                                  signature_unsigned=(0, 0, 0),
                                  signature_signed=(0, 0, 0),
                                  positive_definite=True)
    wpow = alg.basis_form((0, 0), 0)
    for _ in range(alg.m - p - q):
        wpow = wpow.wedge(alg.fundamental_form)
    forms = [form_from_coordinates(alg, (p, q), v) for v in prim]
    factor = _I_POWERS[(p - q) % 4]
    raw = [[factor * forms[j].wedge(forms[k].conj()).wedge(wpow).integrate()
            for k in range(n)] for j in range(n)]
    unsigned = ExactMatrix(raw)
    k = p + q
    sign = GaussScalar(-1) if (k * (k - 1) // 2) % 2 else GAUSS_ONE
    signed = unsigned * sign
    sig_unsigned = hermitian_signature(unsigned)
    sig_signed = hermitian_signature(signed)
    return HodgeRiemannReport(
        p=p, q=q, prim_dim=n,
        signature_unsigned=sig_unsigned,
        signature_signed=sig_signed,
        positive_definite=sig_signed == (n, 0, 0))


# -- intersection form on degree 2 ---------------------------------------------


def _real_harmonic_basis(alg: BigradedAlgebra, model: LieModel, degree: int) -> tuple:
    """Real forms spanning the d-harmonic total-degree space."""
    d_out, src_off = _degree_matrix(alg, alg.d, degree, degree + 1)
    adj_out, _ = _degree_matrix(alg, alg.d.adjoint(), degree, degree - 1)
    vecs = kernel(vstack([d_out, adj_out]))
    rmonos = list(itertools.combinations(range(model.dim), degree))
    rows = []
    for vec in vecs:
        form = _form_from_degree_vector(alg, vec, src_off)
        coords = alg.real_coordinates(form, degree)
        rows.append(tuple(GaussScalar(c.re) for c in coords))
        rows.append(tuple(GaussScalar(c.im) for c in coords))
    if not rows:
        return ()
    reduced, pivots = rref(ExactMatrix(rows))
    if len(pivots) != len(vecs):
        raise HarmonicError("harmonic space is not conjugation-stable")
    basis = []
    for r in range(len(pivots)):
        comps = {}
        for mono, c in zip(rmonos, reduced.row(r)):
            if c:
                comps[mono] = c
        basis.append(alg.form_from_real(comps, degree))
    return tuple(basis)


@dataclass(frozen=True)
class HodgeIndexReport:
    b2_plus: int
    b2_minus: int
    ell11: int
    relation_ok: bool
    b2: int
    ell20: int
    integrable: bool
    nonintegrable_20_vanishes: Optional[bool]

    def to_json(self) -> dict:
        return {
            "b2_plus": self.b2_plus,
            "b2_minus": self.b2_minus,
            "ell11": self.ell11,
            "relation_ok": self.relation_ok,
            "b2": self.b2,
            "ell20": self.ell20,
            "integrable": self.integrable,
            "nonintegrable_20_vanishes": self.nonintegrable_20_vanishes,
        }


def hodge_index(model: LieModel) -> HodgeIndexReport:
    """Signature of the wedge pairing on invariant harmonic 2-forms.

    Only defined for 4-dimensional almost Kahler models.  The relation
    flag records ell(1,1) = b2_minus + 1 together with b2_plus >= 1; for
    non-integrable structures the vanishing of ell(2,0) is recorded as
    well.
    """
    if model.dim != 4:
        raise HarmonicError("the intersection form needs a 4-dimensional model")
    report = validate(model)
    if not report.almost_kahler:
        raise HarmonicError("the intersection form needs an almost Kahler model")
    alg = build(model)
    reps = _real_harmonic_basis(alg, model, 2)
    b2 = betti(model)[2]
    if len(reps) != b2:
        raise HarmonicError(
            f"harmonic 2-forms span dimension {len(reps)}, expected b2={b2}")
    entries = [[reps[j].wedge(reps[k]).integrate() for k in range(b2)]
               for j in range(b2)]
    plus, minus, zero = symmetric_signature(ExactMatrix(entries))
    if zero:
        raise HarmonicError("intersection form is degenerate")
    ell11 = _ell(model, 1, 1)
    ell20 = _ell(model, 2, 0)
    return HodgeIndexReport(
        b2_plus=plus, b2_minus=minus, ell11=ell11,
        relation_ok=(ell11 == minus + 1 and plus >= 1),
        b2=b2, ell20=ell20,
        integrable=report.integrable,
        nonintegrable_20_vanishes=None if report.integrable else ell20 == 0)


# -- holomorphic forms and cohomology ------------------------------------------


@dataclass(frozen=True)
class HolomorphicReport:
    """Kernel of dbar on (p,0) plus the 1-form counting flags.

    ``symplectic_bound_ok`` records the necessary condition
    2*dim(holomorphic 1-forms) <= b1 for a compatible symplectic
    structure; ``free_rank_hypothesis`` records whether the 1-forms exceed
    the 2-forms by more than one, the input to the fundamental-group rank
    bound.
    """

    p: int
    dim: int
    basis: tuple
    matches_harmonic: Optional[bool]
    symplectic_bound_ok: bool
    free_rank_hypothesis: bool
    b1: int

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "dim": self.dim,
            "basis": [form_to_json(f) for f in self.basis],
            "matches_harmonic": self.matches_harmonic,
            "symplectic_bound_ok": self.symplectic_bound_ok,
            "free_rank_hypothesis": self.free_rank_hypothesis,
            "b1": self.b1,
        }


def _holomorphic_vectors(model: LieModel, p: int) -> tuple:
    alg = build(model)
    if p > alg.m:
        return ()
    return tuple(kernel(alg.dbar.block((p, 0), DBAR_SHIFT)))


def holomorphic_forms(model: LieModel, p: int) -> HolomorphicReport:
    """Metric-free holomorphic p-forms with the obstruction flags."""
    alg = build(model)
    if not 0 <= p <= alg.m:
        raise HarmonicError(f"p out of range 0..{alg.m}")
    vecs = _holomorphic_vectors(model, p)
    basis = tuple(form_from_coordinates(alg, (p, 0), v) for v in vecs)
    dim1 = len(_holomorphic_vectors(model, 1))
    dim2 = len(_holomorphic_vectors(model, 2))
    b1 = betti(model)[1]
    matches = None
    if p == 1 and validate(model).almost_kahler:
        harm = _harmonic_vectors(model, "d", (1, 0))
        matches = (
            len(harm) == len(vecs)
            and all(_in_span(list(vecs), h) for h in harm)
            and all(_in_span(list(harm), v) for v in vecs))
    return HolomorphicReport(
        p=p, dim=len(vecs), basis=basis,
        matches_harmonic=matches,
        symplectic_bound_ok=2 * dim1 <= b1,
        free_rank_hypothesis=dim1 > dim2 + 1,
        b1=b1)


def mu_bar_cohomology(model: LieModel, p: int, q: int) -> int:
    """dim ker/im of the (-1,2) component on the invariant (p,q) block."""
    alg = build(model)
    _check_block(alg, p, q)
    n = len(alg.blocks[(p, q)])
    out_rank = rank(alg.mu_bar.block((p, q), MU_BAR_SHIFT))
    src = (p + 1, q - 2)
    in_rank = rank(alg.mu_bar.block(src, MU_BAR_SHIFT)) if src in alg.blocks else 0
    return n - out_rank - in_rank


# -- nonexistence of compatible almost Kahler structures ------------------------


AK_NONEXISTENCE_VERDICT = "no invariant almost Kähler structure compatible with J"


@dataclass(frozen=True)
class AkNonexistenceReport:
    """Outcome of the degenerate-family argument against compatible
    structures.

    The argument: any invariant almost Kahler form lives in the space W of
    d-closed real (1,1)-forms.  When wedging every candidate against every
    holomorphic 1-form is dbar-exact (t1_is_full), a compatible form must
    kill those wedges outright, cutting W down to the subfamily T2.  If
    the top power of the whole T2 family vanishes identically as an exact
    polynomial, every candidate is degenerate and no compatible structure
    exists.
    """

    model_name: str
    verdict: str
    detail: str
    closed_real_11_dim: int
    holomorphic_1_dim: int
    t1_is_full: Optional[bool] = None
    t2_dim: Optional[int] = None
    top_power_vanishes: Optional[bool] = None

    @property
    def nonexistence(self) -> bool:
        return self.verdict == AK_NONEXISTENCE_VERDICT

    def to_json(self) -> dict:
        return {
            "model": self.model_name,
            "verdict": self.verdict,
            "detail": self.detail,
            "closed_real_11_dim": self.closed_real_11_dim,
            "holomorphic_1_dim": self.holomorphic_1_dim,
            "t1_is_full": self.t1_is_full,
            "t2_dim": self.t2_dim,
            "top_power_vanishes": self.top_power_vanishes,
        }


def _closed_real_11_forms(alg: BigradedAlgebra) -> tuple:
    """Real basis of d-closed conjugation-fixed (1,1)-forms."""
    block = (1, 1)
    n = len(alg.blocks[block])
    if n == 0:
        return ()
    conj_mat = []
    for j in range(n):
        cf = alg.basis_form(block, j).conj()
        conj_mat.append(cf.components.get(block, (GAUSS_ZERO,) * n))
    conj_cols = ExactMatrix(conj_mat).transpose()
    d_out = vstack([alg.d.block(block, shift) for shift in alg.d.shifts]) \
        if alg.d.shifts else ExactMatrix.zeros(0, n)
    rows = []
    # Unknown z = x + iy; conjugation-fixed means C conj(z) = z, closedness
    # means D z = 0; both split into rational conditions on (x, y).
    for i in range(n):
        re_row = [GAUSS_ZERO] * (2 * n)
        im_row = [GAUSS_ZERO] * (2 * n)
        for j in range(n):
            c = conj_cols[i, j]
            re_row[j] = re_row[j] + GaussScalar(c.re)
            re_row[n + j] = re_row[n + j] + GaussScalar(c.im)
            im_row[j] = im_row[j] + GaussScalar(c.im)
            im_row[n + j] = im_row[n + j] - GaussScalar(c.re)
        re_row[i] = re_row[i] - GAUSS_ONE
        im_row[n + i] = im_row[n + i] - GAUSS_ONE
        rows.append(re_row)
        rows.append(im_row)
    for r in range(d_out.shape[0]):
        re_row = [GAUSS_ZERO] * (2 * n)
        im_row = [GAUSS_ZERO] * (2 * n)
        for j in range(n):
            c = d_out[r, j]
            re_row[j] = GaussScalar(c.re)
            re_row[n + j] = -GaussScalar(c.im)
            im_row[j] = GaussScalar(c.im)
            im_row[n + j] = GaussScalar(c.re)
        rows.append(re_row)
        rows.append(im_row)
    solutions = kernel(ExactMatrix(rows))
    out = []
    for sol in solutions:
        vec = tuple(GaussScalar(sol[j].re, sol[n + j].re) for j in range(n))
        out.append(vec)
    return tuple(out)


def ak_nonexistence_report(model: LieModel) -> AkNonexistenceReport:
    """Run the degenerate-family argument on the invariant complex.

    The verdict claims nonexistence only when the final certificate (the
    identically vanishing top power over the surviving family) is in hand;
    anything short of that reports "inconclusive" or, without holomorphic
    1-forms, "vacuous".
    """
    alg = build(model)
    m = alg.m
    omega_vecs = _closed_real_11_forms(alg)
    dim_w = len(omega_vecs)
    hol = _holomorphic_vectors(model, 1)
    if not hol:
        return AkNonexistenceReport(
            model_name=model.name, verdict="vacuous",
            detail="no holomorphic 1-forms; the wedge obstruction has nothing to act on",
            closed_real_11_dim=dim_w, holomorphic_1_dim=0)
    if dim_w == 0:
        return AkNonexistenceReport(
            model_name=model.name, verdict=AK_NONEXISTENCE_VERDICT,
            detail="no d-closed real (1,1)-forms at all",
            closed_real_11_dim=0, holomorphic_1_dim=len(hol),
            t1_is_full=True, t2_dim=0, top_power_vanishes=True)
    # Coordinates in (2,1) of every candidate wedged with every holomorphic
    # 1-form; the candidates are w_i, the 1-forms alpha_s.  For m = 1 the
    # (2,1) block is empty, every wedge vanishes, and both cuts are trivial.
    block21 = (2, 1)
    w_forms = [form_from_coordinates(alg, (1, 1), v) for v in omega_vecs]
    a_forms = [form_from_coordinates(alg, (1, 0), v) for v in hol]
    n21 = len(alg.blocks.get(block21, ()))
    full_basis = [ExactMatrix.identity(dim_w).row(i) for i in range(dim_w)]
    if n21 == 0:
        t1_basis = full_basis
        t2_basis = full_basis
    else:
        wedges = {}
        for i, w in enumerate(w_forms):
            for s, a in enumerate(a_forms):
                prod = w.wedge(a)
                wedges[i, s] = prod.components.get(block21, (GAUSS_ZERO,) * n21)
        # T1: parameters whose wedges are all dbar-exact.  Membership in the
        # image is cut out by the kernel of the transpose.
        dbar20 = alg.dbar.block((2, 0), DBAR_SHIFT)
        cokernel_rows = kernel(dbar20.transpose())
        t1_rows = []
        for y in cokernel_rows:
            for s in range(len(a_forms)):
                coeffs = []
                for i in range(dim_w):
                    acc = GAUSS_ZERO
                    for ell_idx in range(n21):
                        acc = acc + y[ell_idx] * wedges[i, s][ell_idx]
                    coeffs.append(acc)
                t1_rows.append([GaussScalar(c.re) for c in coeffs])
                t1_rows.append([GaussScalar(c.im) for c in coeffs])
        t1_basis = kernel(ExactMatrix(t1_rows)) if t1_rows else full_basis
        if len(t1_basis) < dim_w:
            return AkNonexistenceReport(
                model_name=model.name, verdict="inconclusive",
                detail=("wedging with holomorphic 1-forms is not always "
                        f"dbar-exact; only a {len(t1_basis)}-dimensional "
                        "subfamily qualifies"),
                closed_real_11_dim=dim_w, holomorphic_1_dim=len(hol),
                t1_is_full=False)
        # T2: candidates killing every wedge outright.
        t2_rows = []
        for s in range(len(a_forms)):
            for ell_idx in range(n21):
                coeffs = [wedges[i, s][ell_idx] for i in range(dim_w)]
                t2_rows.append([GaussScalar(c.re) for c in coeffs])
                t2_rows.append([GaussScalar(c.im) for c in coeffs])
        t2_basis = kernel(ExactMatrix(t2_rows)) if t2_rows else full_basis
    t2_dim = len(t2_basis)
    # Top power of the whole surviving family, with one fresh real
    # parameter per T2 basis vector.
    names = tuple(f"t{j + 1}" for j in range(t2_dim))
    if t2_dim == 0:
        vanishes = True
    else:
        coeff_polys = []
        for i in range(dim_w):
            poly = ParamPoly.zero(names)
            for j, tau in enumerate(t2_basis):
                if tau[i]:
                    poly = poly + ParamPoly.variable(names, names[j]) * tau[i]
            coeff_polys.append(poly)
        family = alg.zero_form()
        for i, w in enumerate(w_forms):
            family = family + w.scale(coeff_polys[i])
        top = family
        for _ in range(m - 1):
            top = top.wedge(family)
        vanishes = top.is_zero()
    if vanishes:
        return AkNonexistenceReport(
            model_name=model.name, verdict=AK_NONEXISTENCE_VERDICT,
            detail=(f"every candidate wedges holomorphic 1-forms dbar-exactly; "
                    f"the surviving {t2_dim}-parameter family has identically "
                    f"vanishing top power"),
            closed_real_11_dim=dim_w, holomorphic_1_dim=len(hol),
            t1_is_full=True, t2_dim=t2_dim, top_power_vanishes=True)
    return AkNonexistenceReport(
        model_name=model.name, verdict="inconclusive",
        detail=(f"a {t2_dim}-parameter family survives with nonvanishing "
                f"top power"),
        closed_real_11_dim=dim_w, holomorphic_1_dim=len(hol),
        t1_is_full=True, t2_dim=t2_dim, top_power_vanishes=False)


# -- combined obstruction report -------------------------------------------------


@dataclass(frozen=True)
class ObstructionReport:
    """Everything this library can say against a compatible symplectic
    form."""

    model_name: str
    hol_dims: tuple
    b1: int
    symplectic_bound_ok: bool
    free_rank_hypothesis: bool
    laplacian_witness: Optional[Form]
    ak_nonexistence: AkNonexistenceReport
    integrable: bool

    @property
    def fires(self) -> bool:
        return (not self.symplectic_bound_ok
                or self.laplacian_witness is not None
                or self.ak_nonexistence.nonexistence)

    def to_json(self) -> dict:
        return {
            "scope": "invariant",
            "model": self.model_name,
            "holomorphic_dims": list(self.hol_dims),
            "b1": self.b1,
            "symplectic_bound_ok": self.symplectic_bound_ok,
            "free_rank_hypothesis": self.free_rank_hypothesis,
            "laplacian_witness": (
                None if self.laplacian_witness is None
                else form_to_json(self.laplacian_witness)),
            "ak_nonexistence": self.ak_nonexistence.to_json(),
            "integrable": self.integrable,
            "fires": self.fires,
        }


def obstruction_report(model: LieModel) -> ObstructionReport:
    """Holomorphic-form counts, Laplacian asymmetry, and the degeneracy
    argument in one report."""
    alg = build(model)
    report = validate(model)
    hol_dims = tuple(len(_holomorphic_vectors(model, p)) for p in range(alg.m + 1))
    b1 = betti(model)[1]
    witness = laplacian_symmetry_witness(model)
    return ObstructionReport(
        model_name=model.name,
        hol_dims=hol_dims,
        b1=b1,
        symplectic_bound_ok=2 * hol_dims[1] <= b1,
        free_rank_hypothesis=hol_dims[1] > (hol_dims[2] if alg.m >= 2 else 0) + 1,
        laplacian_witness=None if isinstance(witness, str) else witness,
        ak_nonexistence=ak_nonexistence_report(model),
        integrable=report.integrable)
