"""Finitely presented abelian groups over Z.

A group is Z^n modulo the column span of an n x r relation matrix.
Subgroups are carried around as generator matrices inside an ambient
presentation; everything reduces to Smith normal form, exact solving
and integer kernels from :mod:`mwtate.exactalg.intmat`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import intmat
from .groups import FormalGroup


@dataclass
class PresentedGroup:
    """Z^ngens / colspan(rels); rels has ngens rows."""

    ngens: int
    rels: list = field(default_factory=list)

    def __post_init__(self):
        if not self.rels:
            self.rels = intmat.zeros(self.ngens, 0)
        if len(self.rels) != self.ngens:
            raise ValueError("relation matrix must have one row per generator")
        # keep relation entries small; the column lattice is unchanged
        self.rels = intmat.column_reduce(self.rels)

    def invariants(self) -> FormalGroup:
        _, s, _ = intmat.smith_normal_form(self.rels)
        diag = intmat.diagonal(s)
        nonzero = [d for d in diag if d != 0]
        free = self.ngens - len(nonzero)
        return FormalGroup.from_invariants([0] * free + nonzero)

    def is_zero_element(self, vec) -> bool:
        return intmat.lattice_contains(self.rels, vec)

    def contains_subgroup(self, gens_a, gens_b) -> bool:
        """Whether every column of gens_b lies in <gens_a> + rels."""
        _, cb = intmat.shape(gens_b)
        if cb == 0:
            return True
        span = intmat.hstack(gens_a, self.rels)
        cols = [[row[c] for row in gens_b] for c in range(cb)]
        return all(intmat.solve(span, col) is not None for col in cols)

    def subgroups_equal(self, gens_a, gens_b) -> bool:
        return self.contains_subgroup(gens_a, gens_b) and self.contains_subgroup(
            gens_b, gens_a
        )

    def subgroup_presentation(self, gens) -> PresentedGroup:
        """The subgroup generated by the columns of ``gens`` as an
        abstract group (relations pulled back through the generators)."""
        _, k = intmat.shape(gens)
        rels = intmat.kernel_mod_lattice(gens, self.rels)
        return PresentedGroup(k, rels)

    def quotient_presentation(self, gens) -> PresentedGroup:
        return PresentedGroup(self.ngens, intmat.hstack(self.rels, gens))

    def express(self, gens, vec):
        """Coordinates of ``vec`` in the columns of ``gens`` modulo the
        relations, or None if it is not in that subgroup."""
        _, k = intmat.shape(gens)
        sol = intmat.solve(intmat.hstack(gens, self.rels), vec)
        if sol is None:
            return None
        return sol[:k]
