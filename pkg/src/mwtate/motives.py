"""Tate cell complexes and their canonical block decomposition.

A TateComplex is a list of weighted cells with integer eta-attachment
coefficients between adjacent weights only; composability of the
attachment matrices is part of validity.  Every valid complex splits
into three species of atomic blocks:

  * Free(i)              -- a lone cell of weight i,
  * DyadicEta(t, i)      -- the cone of 2^t eta on weight i (t = 0 is
                            the plain eta cone),
  * OddTorsion(p, r, s)  -- the eta-local block of order p^r sitting in
                            shift s; odd blocks absorb Tate twists into
                            shifts, so they carry no weight.

The decomposition runs the integer Smith normal form sweep and then
splits each cone order n = 2^t s dyadically and odd-prime by prime.
Tensor products are computed on normal forms by the bilinear fusion
table; the naive complex-level tensor is wrong in this calculus, which
is why no such operation exists here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .exactalg import (
    ConePair,
    FreeCell,
    FreeComplex,
    NonComposable,
    decompose_free_complex,
    factor_prime_powers,
    intmat,
)


class InvalidComplex(ValueError):
    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


class OddBlockNotRealizable(ValueError):
    """Odd blocks exist only as summands of eta cones, never alone."""


class IllegalEntry(ValueError):
    """A gluing coefficient between non-adjacent weights."""


class NonComposableResult(ValueError):
    """A glued complex whose attachments fail composability."""


@dataclass(frozen=True, order=True)
class Free:
    weight: int

    def twisted(self, q: int) -> Free:
        return Free(self.weight + q)


@dataclass(frozen=True, order=True)
class DyadicEta:
    t: int
    weight: int

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("dyadic exponent must be nonnegative")

    def twisted(self, q: int) -> DyadicEta:
        return DyadicEta(self.t, self.weight + q)


@dataclass(frozen=True, order=True)
class OddTorsion:
    p: int
    r: int
    shift: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("odd torsion exponent must be positive")
        if self.p < 3 or self.p % 2 == 0 or not _is_prime(self.p):
            raise ValueError(f"{self.p} is not an odd prime")

    def twisted(self, q: int) -> OddTorsion:
        return OddTorsion(self.p, self.r, self.shift + q)


AtomicBlock = Union[Free, DyadicEta, OddTorsion]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


def _block_key(b: AtomicBlock):
    if isinstance(b, Free):
        return (0, b.weight, 0, 0)
    if isinstance(b, DyadicEta):
        return (1, b.weight, b.t, 0)
    return (2, b.shift, b.p, b.r)


class NormalForm:
    """Canonical multiset of atomic blocks.

    >>> NormalForm([DyadicEta(1, 0), Free(0)]).blocks
    (Free(weight=0), DyadicEta(t=1, weight=0))
    """

    __slots__ = ("blocks",)

    def __init__(self, blocks: Iterable[AtomicBlock] = ()):
        self.blocks = tuple(sorted(blocks, key=_block_key))

    def __eq__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __repr__(self):
        return f"NormalForm({list(self.blocks)!r})"

    def is_zero(self) -> bool:
        return not self.blocks

    def direct_sum(self, other: NormalForm) -> NormalForm:
        return NormalForm(self.blocks + other.blocks)


ZERO = NormalForm()
UNIT = NormalForm([Free(0)])


@dataclass(frozen=True)
class Violation:
    kind: str
    cells: tuple
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.ok:
            return "valid"
        return "; ".join(f"{v.kind}{list(v.cells)}: {v.detail}" for v in self.violations)


class TateComplex:
    """Weighted cells plus integer attachments between adjacent weights.

    ``cells`` is a sequence of (id, weight); ``attach`` maps
    (higher cell id, lower cell id) to an integer coefficient, where the
    first cell must sit one weight above the second.
    """

    __slots__ = ("cells", "attach")

    def __init__(self, cells, attach=None):
        self.cells = tuple((str(c), int(w)) for c, w in cells)
        self.attach = {
            (str(a), str(b)): int(v)
            for (a, b), v in (attach or {}).items()
            if int(v) != 0
        }

    def weight_of(self, cell_id: str) -> int:
        for c, w in self.cells:
            if c == cell_id:
                return w
        raise KeyError(cell_id)

    def cells_at(self, weight: int) -> list[str]:
        return [c for c, w in self.cells if w == weight]

    def weights(self) -> list[int]:
        return sorted({w for _, w in self.cells})

    def __eq__(self, other):
        if not isinstance(other, TateComplex):
            return NotImplemented
        return sorted(self.cells) == sorted(other.cells) and self.attach == other.attach

    def __repr__(self):
        return f"TateComplex(cells={list(self.cells)!r}, attach={self.attach!r})"


def validate_complex(c: TateComplex) -> ValidationReport:
    """Check cell-id uniqueness, weight adjacency of every attachment,
    and composability of consecutive attachment matrices.

    >>> validate_complex(TateComplex([("a", 0)])).ok
    True
    """
    violations = []
    ids = [cid for cid, _ in c.cells]
    seen = set()
    for cid in ids:
        if cid in seen:
            violations.append(Violation("DuplicateCell", (cid,), "cell id reused"))
        seen.add(cid)
    weight = dict(c.cells)
    for (hi, lo), coeff in c.attach.items():
        if hi not in weight or lo not in weight:
            violations.append(
                Violation("UnknownCell", (hi, lo), "attachment names a missing cell")
            )
            continue
        if weight[hi] != weight[lo] + 1:
            violations.append(
                Violation(
                    "NonAdjacent",
                    (hi, lo),
                    f"weights {weight[hi]} -> {weight[lo]} are not adjacent",
                )
            )
    if not violations:
        fc, index = _to_free_complex(c)
        for w in fc.weights():
            a = fc.differential(w)
            b = fc.differential(w + 1)
            if a and a[0] and b and b[0]:
                prod = intmat.matmul(a, b)
                for r in range(len(prod)):
                    for s in range(len(prod[0])):
                        if prod[r][s]:
                            violations.append(
                                Violation(
                                    "NonComposable",
                                    (index[w + 2][s], index[w][r]),
                                    "consecutive attachments compose nonzero",
                                )
                            )
    return ValidationReport(tuple(violations))


def _to_free_complex(c: TateComplex):
    """FreeComplex of the attachment data plus the cell-id bookkeeping."""
    index = {w: c.cells_at(w) for w in c.weights()}
    ranks = {w: len(cs) for w, cs in index.items()}
    diffs = {}
    for w in sorted(index):
        lo = index[w]
        hi = index.get(w + 1, [])
        if not lo or not hi:
            continue
        m = [[0] * len(hi) for _ in lo]
        for i, cl in enumerate(lo):
            for j, ch in enumerate(hi):
                m[i][j] = c.attach.get((ch, cl), 0)
        diffs[w] = m
    return FreeComplex(ranks, diffs), index


def decompose(c: TateComplex) -> NormalForm:
    """The canonical block normal form of a valid complex.

    Each Smith cone of order n = 2^t s (s odd) contributes DyadicEta(t)
    plus one odd block per prime power of s; unit cones survive as
    DyadicEta(0), the plain eta cone.

    >>> decompose(TateComplex([("a", 0), ("b", 1)], {("b", "a"): 6}))
    NormalForm([DyadicEta(t=1, weight=0), OddTorsion(p=3, r=1, shift=0)])
    """
    report = validate_complex(c)
    if not report.ok:
        raise InvalidComplex(report)
    fc, _ = _to_free_complex(c)
    try:
        summands = decompose_free_complex(fc)
    except NonComposable as exc:  # defensive; validation already checks
        raise InvalidComplex(
            ValidationReport((Violation("NonComposable", (), str(exc)),))
        ) from exc
    return NormalForm(blocks_of_summands(summands))


def blocks_of_summands(summands) -> list[AtomicBlock]:
    blocks: list[AtomicBlock] = []
    for s in summands:
        if isinstance(s, FreeCell):
            blocks.append(Free(s.degree))
            continue
        n, w = s.n, s.lower_degree
        t = 0
        while n % 2 == 0:
            n //= 2
            t += 1
        blocks.append(DyadicEta(t, w))
        for q in factor_prime_powers(n) if n > 1 else []:
            p, r = _prime_power_parts(q)
            blocks.append(OddTorsion(p, r, w))
    return blocks


def _prime_power_parts(q: int) -> tuple[int, int]:
    for p in range(3, q + 1, 2):
        if q % p == 0:
            r = 0
            while q % p == 0:
                q //= p
                r += 1
            return p, r
    raise ValueError(f"{q} is not an odd prime power")


def realize(a: NormalForm) -> TateComplex:
    """Canonical complex presenting an odd-free normal form.

    >>> realize(NormalForm([DyadicEta(2, 1)]))
    TateComplex(cells=[('c0', 1), ('c1', 2)], attach={('c1', 'c0'): 4})
    """
    cells = []
    attach = {}
    counter = 0

    def new_cell(w):
        nonlocal counter
        cid = f"c{counter}"
        counter += 1
        cells.append((cid, w))
        return cid

    for b in a.blocks:
        if isinstance(b, OddTorsion):
            raise OddBlockNotRealizable(
                f"{b} only occurs inside an eta cone; it has no lone cell model"
            )
        if isinstance(b, Free):
            new_cell(b.weight)
        else:
            lo = new_cell(b.weight)
            hi = new_cell(b.weight + 1)
            attach[(hi, lo)] = 1 << b.t
    return TateComplex(cells, attach)


def _tensor_blocks(a: AtomicBlock, b: AtomicBlock) -> list[AtomicBlock]:
    if isinstance(a, Free):
        return [b.twisted(a.weight)]
    if isinstance(b, Free):
        return [a.twisted(b.weight)]
    if isinstance(a, DyadicEta) and isinstance(b, DyadicEta):
        t = min(a.t, b.t)
        w = a.weight + b.weight
        return [DyadicEta(t, w + 1), DyadicEta(t, w)]
    if isinstance(a, OddTorsion) and isinstance(b, OddTorsion):
        if a.p != b.p:
            return []
        r = min(a.r, b.r)
        s = a.shift + b.shift
        return [OddTorsion(a.p, r, s + 1), OddTorsion(a.p, r, s)]
    # dyadic against odd: 2^t eta acts invertibly on the eta-local odd
    # block with 2 a unit, so the cone vanishes
    return []


def tensor(a: NormalForm, b: NormalForm) -> NormalForm:
    """Bilinear extension of the block fusion table.

    >>> tensor(NormalForm([DyadicEta(1, 0)]), NormalForm([DyadicEta(2, 0)]))
    NormalForm([DyadicEta(t=1, weight=0), DyadicEta(t=1, weight=1)])
    """
    out: list[AtomicBlock] = []
    for x in a.blocks:
        for y in b.blocks:
            out.extend(_tensor_blocks(x, y))
    return NormalForm(out)


def twist(a: NormalForm, q: int) -> NormalForm:
    """Tensor with Free(q): weights and odd shifts move by q."""
    return NormalForm(b.twisted(q) for b in a.blocks)


def quotient_by_dyadic_eta(a: NormalForm, j: int) -> NormalForm:
    """A / 2^j eta, the tensor with the cone of 2^j eta."""
    return tensor(a, NormalForm([DyadicEta(j, 0)]))


def cone_eta_map(source: TateComplex, target: TateComplex, f) -> TateComplex:
    """Total complex of an eta-matrix map from ``source`` into ``target``.

    ``f`` maps (source cell id, target cell id) to an integer, legal only
    when the source cell sits one weight above the target cell.  Cells
    keep their weights; the new attachments are the union of both
    complexes' attachments with ``f``.
    """
    for c in (source, target):
        report = validate_complex(c)
        if not report.ok:
            raise InvalidComplex(report)
    src_w = dict(source.cells)
    tgt_w = dict(target.cells)
    shared = set(src_w) & set(tgt_w)
    if shared:
        raise IllegalEntry(f"cell ids shared between source and target: {sorted(shared)}")
    attach = dict(target.attach)
    attach.update(source.attach)
    for (u, v), coeff in (f or {}).items():
        u, v = str(u), str(v)
        if int(coeff) == 0:
            continue
        if u not in src_w or v not in tgt_w:
            raise IllegalEntry(f"gluing entry ({u}, {v}) names a missing cell")
        if src_w[u] != tgt_w[v] + 1:
            raise IllegalEntry(
                f"gluing entry ({u}, {v}) joins weights {src_w[u]} -> {tgt_w[v]}"
            )
        attach[(u, v)] = int(coeff)
    total = TateComplex(tuple(target.cells) + tuple(source.cells), attach)
    report = validate_complex(total)
    if not report.ok:
        raise NonComposableResult(str(report))
    return total
