"""Derived tensor calculus for two-term F2[rho]-module complexes.

Write R = Z/2[rho].  A FreeTower summand, S, is R -> R with zero
differential in two consecutive chain degrees; a ConeTower(j) summand,
S_j, is R --rho^j--> R.  Tensor products over R split by the rules

    S   (x) S   = S   + S[1]
    S   (x) S_j = S_j + S_j[1]
    S_a (x) S_b = S_m + S_m[1],  m = min(a, b)

where [1] shifts the base degree up by one; the last rule for a = b is
the S_j (x) S_j = S_j (x) S identity and the mixed case follows from
two-term free resolutions (both Tor_0 and Tor_1 are R/rho^min).
"""

from __future__ import annotations

from dataclasses import dataclass

FREE = "free"
CONE = "cone"


@dataclass(frozen=True, order=True)
class RhoSummand:
    degree: int
    shape: str = FREE
    j: int = 0

    def __post_init__(self):
        if self.shape not in (FREE, CONE):
            raise ValueError(f"unknown shape {self.shape!r}")
        if self.shape == CONE and self.j < 1:
            raise ValueError("cone exponent must be >= 1")
        if self.shape == FREE and self.j != 0:
            raise ValueError("free towers carry no exponent")


def free_tower(degree: int) -> RhoSummand:
    return RhoSummand(degree, FREE, 0)


def cone_tower(j: int, degree: int) -> RhoSummand:
    return RhoSummand(degree, CONE, j)


class RhoComplex:
    """A finite direct sum of S and S_j summands, canonically ordered.

    >>> RhoComplex([cone_tower(2, 1), free_tower(0)]).summands
    (RhoSummand(degree=0, shape='free', j=0), RhoSummand(degree=1, shape='cone', j=2))
    """

    __slots__ = ("summands",)

    def __init__(self, summands=()):
        self.summands = tuple(sorted(summands))

    def __eq__(self, other):
        if not isinstance(other, RhoComplex):
            return NotImplemented
        return self.summands == other.summands

    def __hash__(self):
        return hash(self.summands)

    def __repr__(self):
        return f"RhoComplex({list(self.summands)!r})"

    def shift(self, by: int) -> RhoComplex:
        return RhoComplex(
            RhoSummand(s.degree + by, s.shape, s.j) for s in self.summands
        )


def _pair_tensor(a: RhoSummand, b: RhoSummand):
    d = a.degree + b.degree
    if a.shape == FREE and b.shape == FREE:
        base = free_tower(d)
        other = free_tower(d + 1)
    else:
        m = min(j for j in (a.j, b.j) if j >= 1)
        base = cone_tower(m, d)
        other = cone_tower(m, d + 1)
    return base, other


def rho_module_tensor(x: RhoComplex, y: RhoComplex) -> RhoComplex:
    """Derived tensor product over Z/2[rho], summand by summand.

    >>> s = RhoComplex([free_tower(0)])
    >>> rho_module_tensor(s, s) == RhoComplex([free_tower(0), free_tower(1)])
    True
    >>> s1 = RhoComplex([cone_tower(1, 0)])
    >>> rho_module_tensor(s1, s1) == RhoComplex([cone_tower(1, 0), cone_tower(1, 1)])
    True
    """
    out = []
    for a in x.summands:
        for b in y.summands:
            out.extend(_pair_tensor(a, b))
    return RhoComplex(out)
