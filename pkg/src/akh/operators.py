"""Graded operator calculus and the almost Kahler identity ledger.

Everything here works on :class:`~akh.forms.BlockOperator` instances drawn
from a single :class:`~akh.forms.BigradedAlgebra`.  The central entry point
is :func:`verify_identities`, which evaluates the complete catalogue of
commutation identities that hold for an invariant almost Kahler structure
and reports, for each one, either "holds" or the first basis form on which
it breaks.  On models that are not almost Kahler the failing entries are
the interesting output: they certify which parts of the Kahler package
survive and which do not.

Conventions:

* the graded commutator is ``[A, B] = A B - (-1)^{|A||B|} B A`` with ``|A|``
  the parity of the total degree shift;
* adjoints are taken with respect to the inner product induced by the
  orthonormal frame (see ``BlockOperator.adjoint``);
* the Laplacian of an operator ``D`` is ``D D* + D* D``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .exact import GAUSS_I, in_span, kernel
from .forms import (
    AlgebraError,
    BigradedAlgebra,
    BlockOperator,
    Form,
    build,
    form_from_coordinates,
    form_to_json,
)
from .model import LieModel

__all__ = [
    "adjoint",
    "graded_commutator",
    "anticommutator",
    "laplacian",
    "star_conjugate",
    "LedgerEntry",
    "IdentityLedger",
    "verify_identities",
    "laplacian_symmetry_witness",
]


def adjoint(op: BlockOperator) -> BlockOperator:
    """Adjoint with respect to the frame-induced Hermitian inner product."""
    return op.adjoint()


def graded_commutator(a: BlockOperator, b: BlockOperator) -> BlockOperator:
    """``a b - (-1)^{|a||b|} b a`` where ``|.|`` is total-degree parity.

    Raises :class:`~akh.forms.AlgebraError` when either operator mixes
    even and odd shifts, since the sign is then undefined.
    """
    pa = a.parity
    pb = b.parity
    if pa is None or pb is None:
        raise AlgebraError("graded commutator requires operators of pure parity")
    ab = a.compose(b)
    ba = b.compose(a)
    if pa == 1 and pb == 1:
        return ab + ba
    return ab - ba


def anticommutator(a: BlockOperator, b: BlockOperator) -> BlockOperator:
    return a.compose(b) + b.compose(a)


def laplacian(op: BlockOperator) -> BlockOperator:
    """``op op* + op* op``; degree zero whenever ``op`` has a pure shift."""
    star = op.adjoint()
    return op.compose(star) + star.compose(op)


def star_conjugate(algebra: BigradedAlgebra, op: BlockOperator) -> BlockOperator:
    """Conjugate ``op`` by the Hodge star twisted with the parity weight.

    Returns ``star . weight_inv . op . weight . star``.  For the exterior
    differential this produces ``[lam, d]`` up to sign conventions, and on
    each Dolbeault-type component it reproduces the adjoint up to a factor
    of ``i`` (checked in the test suite).
    """
    return algebra.star.compose(algebra.weight_inv).compose(op).compose(
        algebra.weight).compose(algebra.star)


# -- identity ledger ----------------------------------------------------------


@dataclass(frozen=True)
class LedgerEntry:
    """Outcome of checking one operator identity on one model."""

    id: str
    statement: str
    holds: bool
    first_failing_block: Optional[tuple] = None
    witness: Optional[Form] = None

    @property
    def status(self) -> str:
        return "holds" if self.holds else "fails"

    def to_json(self) -> dict:
        payload = {
            "id": self.id,
            "statement": self.statement,
            "status": self.status,
        }
        if not self.holds:
            payload["first_failing_block"] = list(self.first_failing_block)
            payload["witness"] = form_to_json(self.witness)
        return payload


@dataclass(frozen=True)
class IdentityLedger:
    """All identity outcomes for one model, in catalogue order."""

    model_name: str
    entries: tuple

    @property
    def all_hold(self) -> bool:
        return all(entry.holds for entry in self.entries)

    def failures(self) -> tuple:
        return tuple(entry for entry in self.entries if not entry.holds)

    def entry(self, entry_id: str) -> LedgerEntry:
        for entry in self.entries:
            if entry.id == entry_id:
                return entry
        raise KeyError(entry_id)

    def to_json(self) -> dict:
        return {
            "model": self.model_name,
            "all_hold": self.all_hold,
            "entries": [entry.to_json() for entry in self.entries],
        }


def _check_equal(algebra: BigradedAlgebra, entry_id: str, statement: str,
                 ops: Sequence[BlockOperator]) -> LedgerEntry:
    """Compare every operator in ``ops`` against the first one."""
    reference = ops[0]
    for other in ops[1:]:
        diff = other - reference
        hit = diff.first_nonzero()
        if hit is not None:
            pq, col = hit
            return LedgerEntry(
                id=entry_id,
                statement=statement,
                holds=False,
                first_failing_block=pq,
                witness=algebra.basis_form(pq, col),
            )
    return LedgerEntry(id=entry_id, statement=statement, holds=True)


def verify_identities(model: LieModel) -> IdentityLedger:
    """Evaluate the full almost Kahler identity catalogue on ``model``.

    The catalogue covers the Lefschetz commutators of all four differential
    components and their adjoints, the cross relations among the components,
    the Laplacian comparison and expansion identities, the two six-member
    commutator chains tying ``L`` and ``lam`` to the Laplacians, and the
    star-conjugation description of ``[lam, d]``.  Chains are verified
    member by member against their first expression, so ``witness`` always
    exhibits a concrete form on which the earliest failing member differs.
    """
    alg = build(model)
    mubar, dbar, partial, mu = alg.mu_bar, alg.dbar, alg.partial, alg.mu
    L, lam, d = alg.L, alg.lam, alg.d
    i = GAUSS_I

    mubar_s = mubar.adjoint()
    dbar_s = dbar.adjoint()
    partial_s = partial.adjoint()
    mu_s = mu.adjoint()

    zero = BlockOperator.zero(alg)
    gc = graded_commutator

    lap_mubar = laplacian(mubar)
    lap_dbar = laplacian(dbar)
    lap_partial = laplacian(partial)
    lap_mu = laplacian(mu)

    checks = [
        # Lefschetz operators commute with the non-Dolbeault components...
        ("L_mubar_commute", "[L, mubar] = 0", (gc(L, mubar), zero)),
        ("L_mu_commute", "[L, mu] = 0", (gc(L, mu), zero)),
        ("lam_mubar_adj_commute", "[lam, mubar*] = 0", (gc(lam, mubar_s), zero)),
        ("lam_mu_adj_commute", "[lam, mu*] = 0", (gc(lam, mu_s), zero)),
        # ...and with the Dolbeault components.
        ("L_dbar_commute", "[L, dbar] = 0", (gc(L, dbar), zero)),
        ("L_partial_commute", "[L, partial] = 0", (gc(L, partial), zero)),
        ("lam_dbar_adj_commute", "[lam, dbar*] = 0", (gc(lam, dbar_s), zero)),
        ("lam_partial_adj_commute", "[lam, partial*] = 0", (gc(lam, partial_s), zero)),
        # Mixed Lefschetz commutators rotate components into adjoints.
        ("L_mubar_adj", "[L, mubar*] = i mu", (gc(L, mubar_s), mu.scale(i))),
        ("L_mu_adj", "[L, mu*] = -i mubar", (gc(L, mu_s), mubar.scale(-i))),
        ("lam_mubar", "[lam, mubar] = i mu*", (gc(lam, mubar), mu_s.scale(i))),
        ("lam_mu", "[lam, mu] = -i mubar*", (gc(lam, mu), mubar_s.scale(-i))),
        ("L_dbar_adj", "[L, dbar*] = -i partial", (gc(L, dbar_s), partial.scale(-i))),
        ("L_partial_adj", "[L, partial*] = i dbar", (gc(L, partial_s), dbar.scale(i))),
        ("lam_dbar", "[lam, dbar] = -i partial*", (gc(lam, dbar), partial_s.scale(-i))),
        ("lam_partial", "[lam, partial] = i dbar*", (gc(lam, partial), dbar_s.scale(i))),
        # Cross relations among the four components.
        ("mubar_mu_adj", "[mubar, mu*] = 0", (gc(mubar, mu_s), zero)),
        ("mu_mubar_adj", "[mu, mubar*] = 0", (gc(mu, mubar_s), zero)),
        ("mubar_partial_adj", "[mubar, partial*] = [dbar, mu*]",
         (gc(mubar, partial_s), gc(dbar, mu_s))),
        ("mu_dbar_adj", "[mu, dbar*] = [partial, mubar*]",
         (gc(mu, dbar_s), gc(partial, mubar_s))),
        ("partial_dbar_adj", "[partial, dbar*] = [mubar*, dbar] + [mu, partial*]",
         (gc(partial, dbar_s), gc(mubar_s, dbar) + gc(mu, partial_s))),
        ("dbar_partial_adj", "[dbar, partial*] = [mu*, partial] + [mubar, dbar*]",
         (gc(dbar, partial_s), gc(mu_s, partial) + gc(mubar, dbar_s))),
        # Laplacian identities.
        ("lap_mu_split", "lap(mubar + mu) = lap(mubar) + lap(mu)",
         (laplacian(mubar + mu), lap_mubar + lap_mu)),
        ("lap_cross", "lap(dbar) + lap(mu) = lap(partial) + lap(mubar)",
         (lap_dbar + lap_mu, lap_partial + lap_mubar)),
        ("lap_d_expand",
         "lap(d) = 2(lap(dbar) + lap(mu) + [mubar, partial*] + [mu, dbar*]"
         " + [partial, dbar*] + [dbar, partial*])",
         (laplacian(d),
          (lap_dbar + lap_mu + gc(mubar, partial_s) + gc(mu, dbar_s)
           + gc(partial, dbar_s) + gc(dbar, partial_s)).scale(2))),
        # Commutator chains tying the Lefschetz operators to the Laplacians.
        ("L_lap_chain",
         "[L, lap(dbar)] = [L, lap(mubar)] = -[L, lap(partial)]"
         " = -[L, lap(mu)] = -i[dbar, partial] = i[mubar, mu]",
         (gc(L, lap_dbar), gc(L, lap_mubar),
          gc(L, lap_partial).scale(-1), gc(L, lap_mu).scale(-1),
          gc(dbar, partial).scale(-i), gc(mubar, mu).scale(i))),
        ("lam_lap_chain",
         "[lam, lap(dbar)] = [lam, lap(mubar)] = -[lam, lap(partial)]"
         " = -[lam, lap(mu)] = -i[dbar*, partial*] = i[mubar*, mu*]",
         (gc(lam, lap_dbar), gc(lam, lap_mubar),
          gc(lam, lap_partial).scale(-1), gc(lam, lap_mu).scale(-1),
          gc(dbar_s, partial_s).scale(-i), gc(mubar_s, mu_s).scale(i))),
        # The weighted star conjugate of d computes [lam, d].
        ("weil_star", "[lam, d] = star . weight_inv . d . weight . star",
         (gc(lam, d), star_conjugate(alg, d))),
    ]

    entries = tuple(
        _check_equal(alg, entry_id, statement, ops)
        for entry_id, statement, ops in checks
    )
    return IdentityLedger(model_name=model.name, entries=entries)


def laplacian_symmetry_witness(model: LieModel):
    """First basis-ordered form separating the two mixed Laplacian kernels.

    Compares ``ker(lap(dbar) + lap(mu))`` with ``ker(lap(partial) +
    lap(mubar))`` block by block and returns a pure-bidegree form lying
    in one kernel but not the other, or the string ``"symmetric"`` when
    the kernels agree everywhere (as they must on an almost Kahler
    model).  A witness certifies that no invariant metric compatible
    with this complex structure closes the fundamental form.
    """
    alg = build(model)
    side_a = laplacian(alg.dbar) + laplacian(alg.mu)
    side_b = laplacian(alg.partial) + laplacian(alg.mu_bar)
    for pq in alg.block_order:
        n = len(alg.blocks[pq])
        if n == 0:
            continue
        mat_a = side_a.block(pq, (0, 0))
        mat_b = side_b.block(pq, (0, 0))
        ker_a = kernel(mat_a)
        ker_b = kernel(mat_b)
        for vec in ker_a:
            if not in_span(ker_b, vec):
                return form_from_coordinates(alg, pq, vec)
        for vec in ker_b:
            if not in_span(ker_a, vec):
                return form_from_coordinates(alg, pq, vec)
    return "symmetric"


def ledger_to_text(ledger: IdentityLedger) -> str:
    """Plain text rendering, one line per entry."""
    lines = [f"identity ledger for {ledger.model_name}"]
    for entry in ledger.entries:
        mark = "ok  " if entry.holds else "FAIL"
        line = f"  [{mark}] {entry.id}: {entry.statement}"
        if not entry.holds:
            line += f"  (first failure at block {entry.first_failing_block})"
        lines.append(line)
    lines.append(
        "all identities hold" if ledger.all_hold
        else f"{len(ledger.failures())} of {len(ledger.entries)} identities fail")
    return "\n".join(lines)
