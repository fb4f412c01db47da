"""Closed-form Bockstein page tables for block normal forms.

Every page of every block is a direct sum of rho-cyclic towers: a tower
based at bidegree (p, q) with height h occupies (p+k, q+k) for
0 <= k < h (h = None meaning infinite), and rho acts by moving up the
tower.  The only differentials live on the page matching a dyadic
exponent: at page j+1 the u-tower of a 2^j cone maps onto rho^j times
its v-tower; everything else is zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..exactalg import GradedGroup
from ..motives import DyadicEta, Free, NormalForm
from ..cohomology import witt_cohomology


class PageTooSmall(ValueError):
    """Page tables start at the second page."""


INF = None  # tower height marker


@dataclass(frozen=True, order=True)
class Tower:
    p: int
    q: int
    height_key: int  # 0 for infinite towers, else the height
    label: str

    @property
    def height(self):
        return INF if self.height_key == 0 else self.height_key

    def covers(self, p: int, q: int) -> bool:
        k = q - self.q
        if k < 0 or p - self.p != k:
            return False
        return self.height_key == 0 or k < self.height_key

    def infinite(self) -> bool:
        return self.height_key == 0


def tower(p: int, q: int, height=INF, label: str = "plain") -> Tower:
    return Tower(p, q, 0 if height is INF else int(height), label)


@dataclass(frozen=True)
class Page:
    """One page: towers plus the rho-power arrows of its differential.

    Arrows are stored as (source tower, target tower, rho power); the
    differential sends offset k of the source onto offset k + power of
    the target, which matches the bidegree shift (index+1, index).
    """

    index: int
    towers: tuple
    arrows: tuple

    def dim(self, p: int, q: int) -> int:
        return sum(1 for t in self.towers if t.covers(p, q))

    def nonzero_positions(self, window) -> set:
        (p_lo, p_hi), (q_lo, q_hi) = window
        out = set()
        for p in range(p_lo, p_hi + 1):
            for q in range(q_lo, q_hi + 1):
                if self.dim(p, q):
                    out.add((p, q))
        return out

    def differential_rank(self, p: int, q: int) -> int:
        """Rank of the page differential out of bidegree (p, q).

        Arrows join distinct tower pairs, so the rank is the number of
        arrows whose source covers (p, q) and whose image entry is
        nonzero on the target tower.
        """
        rank = 0
        for src, dst, power in self.arrows:
            if src.covers(p, q):
                k = q - src.q
                if dst.covers(dst.p + k + power, dst.q + k + power):
                    rank += 1
        return rank

    def is_zero_differential(self) -> bool:
        return not self.arrows

    def canonical(self) -> tuple:
        return (
            self.index,
            tuple(sorted(self.towers)),
            tuple(sorted((s, d, power) for s, d, power in self.arrows)),
        )

    def __eq__(self, other):
        if not isinstance(other, Page):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())


def block_pages(block, i: int) -> Page:
    """The page-i table of one atomic block.

    >>> pg = block_pages(DyadicEta(2, 0), 4)
    >>> pg.towers
    (Tower(p=2, q=1, height_key=2, label='v'),)
    """
    if i < 2:
        raise PageTooSmall(f"pages start at 2, got {i}")
    if isinstance(block, Free):
        return Page(i, (tower(2 * block.weight, block.weight),), ())
    if not isinstance(block, DyadicEta):
        return Page(i, (), ())  # odd blocks vanish mod 2
    j, w = block.t, block.weight
    if j == 0:
        return Page(i, (), ())  # Sq2 is an isomorphism on the plain eta cone
    u = tower(2 * w, w, INF, "u")
    v = tower(2 * w + 2, w + 1, INF, "v")
    if i <= j:
        return Page(i, (u, v), ())
    if i == j + 1:
        return Page(i, (u, v), ((u, v, j),))
    return Page(i, (tower(2 * w + 2, w + 1, j, "v"),), ())


def pages(a: NormalForm, i: int) -> Page:
    """Direct sum of the block tables of a normal form."""
    if i < 2:
        raise PageTooSmall(f"pages start at 2, got {i}")
    towers = []
    arrows = []
    for b in a.blocks:
        pg = block_pages(b, i)
        towers.extend(pg.towers)
        arrows.extend(pg.arrows)
    return Page(i, tuple(towers), tuple(arrows))


@dataclass(frozen=True)
class WittProfile:
    """Multiplicities x[(row, exponent)] of Z/2^j summands per row, with
    exponent 0 standing for a free Z summand."""

    x: tuple

    @classmethod
    def of(cls, h: GradedGroup) -> WittProfile:
        data: dict[tuple[int, int], int] = {}
        for d, grp in h.items():
            if grp.free_rank:
                key = (d, 0)
                data[key] = data.get(key, 0) + grp.free_rank
            for c in grp.torsion:
                if c % 2 == 0:
                    key = (d, c.bit_length() - 1)
                    data[key] = data.get(key, 0) + 1
        return cls(tuple(sorted(data.items())))


def pages_from_witt(h: GradedGroup, i: int) -> Page:
    """Page tables recovered from a Witt cohomology profile alone.

    A free Z in cochain degree d is one infinite tower in row d; a
    Z/2^j summand in degree d is the u/v tower pair of rows (d-1, d)
    while i <= j+1 (with the rho^j arrow exactly at page i = j+1) and a
    height-j v-tower in row d afterwards.  Odd torsion is invisible.

    >>> h = GradedGroup({0: __import__('mwtate').exactalg.FormalGroup.free(1)})
    >>> len(pages_from_witt(h, 5).towers)
    1
    """
    if i < 2:
        raise PageTooSmall(f"pages start at 2, got {i}")
    towers = []
    arrows = []
    for (d, j), count in WittProfile.of(h).x:
        if j == 0:
            towers.extend([tower(2 * d, d)] * count)
            continue
        if i <= j + 1:
            u = tower(2 * (d - 1), d - 1, INF, "u")
            v = tower(2 * d, d, INF, "v")
            towers.extend([u, v] * count)
            if i == j + 1:
                arrows.extend([(u, v, j)] * count)
        else:
            towers.extend([tower(2 * d, d, j, "v")] * count)
    return Page(i, tuple(towers), tuple(arrows))


def degeneracy_page(a: NormalForm) -> int:
    """The page index from which the tables are constant.

    Equals r + 2 where 2^r is the largest dyadic torsion order of the
    Witt cohomology (r = 0 when there is none).

    >>> degeneracy_page(NormalForm([Free(0)]))
    2
    """
    r = witt_cohomology(a, 0).max_dyadic_exponent()
    return r + 2
