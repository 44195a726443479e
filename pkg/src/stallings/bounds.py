"""Intersection-rank bounds over the rank-2 free group.

For non-trivial finitely generated ``A1, A2`` the sum over double cosets of
``rk(A1 ∩ g A2 g^-1) - 1`` is bounded by

    (rk A1 - 1)(rk A2 - 1) + H1*H2 - (H1 - n1i)(H2 - n2i)

for each ``i`` in ``{1, 2}``, where ``H`` and ``n_i`` are spine invariants.
The classical error terms (Neumann, Burns, Tardos, Dicks) are reported
beside it.  All arithmetic is on Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cores import BasedCore, core_from_succ
from .covering import SpineInvariants, spine_invariants
from .pullback import fiber_product, intersection_rank_sum

CSV_FIELDS = (
    "rk1", "rk2", "H1", "n11", "n12", "H2", "n21", "n22",
    "exact", "paper_i1", "paper_i2", "neumann", "burns", "tardos", "dicks",
)


def error_term(inv1: SpineInvariants, inv2: SpineInvariants, i: int) -> int:
    """``H1*H2 - (H1 - n1i)(H2 - n2i)``; never negative since ``0 <= n_ji <= H_j``."""
    if i not in (1, 2):
        raise ValueError("i must be 1 or 2")
    return inv1.H * inv2.H - (inv1.H - inv1.n(i)) * (inv2.H - inv2.n(i))


def paper_bound(inv1: SpineInvariants, inv2: SpineInvariants, i: int) -> int:
    if inv1.rank < 1 or inv2.rank < 1:
        raise ValueError("bound needs non-trivial subgroups")
    return (inv1.rank - 1) * (inv2.rank - 1) + error_term(inv1, inv2, i)


@dataclass(frozen=True)
class ClassicalBounds:
    neumann: int
    burns: int
    tardos: int
    dicks: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.neumann, self.burns, self.tardos, self.dicks)


def classical_bounds(rk1: int, rk2: int) -> ClassicalBounds:
    """The four historical error terms, taken literally (including their clamps)."""
    return ClassicalBounds(
        neumann=(rk1 - 1) * (rk2 - 1),
        burns=max((rk1 - 2) * (rk2 - 1), (rk1 - 1) * (rk2 - 2)),
        tardos=max((rk1 - 2) * (rk2 - 2) - 1, 0),
        dicks=max((rk1 - 3) * (rk2 - 3), 0),
    )


@dataclass(frozen=True)
class BoundReport:
    inv1: SpineInvariants
    inv2: SpineInvariants
    exact_sum: int
    paper_bound_i1: int
    paper_bound_i2: int
    eps: ClassicalBounds

    @property
    def base_product(self) -> int:
        return (self.inv1.rank - 1) * (self.inv2.rank - 1)

    @property
    def paper_bound_best(self) -> int:
        return min(self.paper_bound_i1, self.paper_bound_i2)

    @property
    def classical_totals(self) -> dict[str, int]:
        return {
            "neumann": self.base_product + self.eps.neumann,
            "burns": self.base_product + self.eps.burns,
            "tardos": self.base_product + self.eps.tardos,
            "dicks": self.base_product + self.eps.dicks,
        }

    @property
    def satisfied(self) -> dict[str, bool]:
        flags = {
            "paper_i1": self.exact_sum <= self.paper_bound_i1,
            "paper_i2": self.exact_sum <= self.paper_bound_i2,
        }
        flags.update({k: self.exact_sum <= v for k, v in self.classical_totals.items()})
        return flags

    def to_dict(self) -> dict:
        return {
            "inv1": self.inv1.to_dict(),
            "inv2": self.inv2.to_dict(),
            "exact_sum": self.exact_sum,
            "paper_bound_i1": self.paper_bound_i1,
            "paper_bound_i2": self.paper_bound_i2,
            "paper_bound_best": self.paper_bound_best,
            "eps_neumann": self.eps.neumann,
            "eps_burns": self.eps.burns,
            "eps_tardos": self.eps.tardos,
            "eps_dicks": self.eps.dicks,
            "classical_totals": self.classical_totals,
            "satisfied": self.satisfied,
        }

    def csv_row(self) -> tuple[int, ...]:
        a, b = self.inv1, self.inv2
        return (
            a.rank, b.rank, a.H, a.n1, a.n2, b.H, b.n1, b.n2,
            self.exact_sum, self.paper_bound_i1, self.paper_bound_i2,
            *self.eps.as_tuple(),
        )


def compare(c1: BasedCore, c2: BasedCore) -> BoundReport:
    """Exact intersection-rank sum next to every bound."""
    inv1, inv2 = spine_invariants(c1), spine_invariants(c2)
    exact = intersection_rank_sum(fiber_product(c1, c2))
    return BoundReport(
        inv1,
        inv2,
        exact,
        paper_bound(inv1, inv2, 1),
        paper_bound(inv1, inv2, 2),
        classical_bounds(inv1.rank, inv2.rank),
    )


def family_core(k: int) -> BasedCore:
    """``k`` vertices on a path of ``b``-arcs, an ``a``-loop at each, based at an end.

    Spine invariants ``(H, n1, n2, rank) = (k, 0, 1, k)``.
    """
    if k < 2:
        raise ValueError("family needs k >= 2")
    succ: dict[int, dict[int, int]] = {v: {1: v, -1: v} for v in range(k)}
    for v in range(k - 1):
        succ[v][2] = v + 1
        succ[v + 1][-2] = v
    return core_from_succ(succ, 0, 2)


def family_pair(k: int) -> tuple[BasedCore, BasedCore]:
    c = family_core(k)
    return c, c


def rank_identity_check(core: BasedCore) -> bool:
    inv = spine_invariants(core)
    return inv.rank == inv.H - (inv.n1 + inv.n2) + 1 == core.subgroup_rank
