"""Named verification suites behind both `mwtate check` and the
acceptance tests, so desk verification and CI run identical code.

Every suite is deterministic for a fixed seed; corpus sizes default to
the acceptance-grade values but are parameters so the CLI can run
lighter sweeps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .bockstein import (
    block_pages,
    degeneracy_page,
    kunneth_e2,
    leibniz_check,
    pages,
    pages_from_witt,
    truncated_check,
)
from .bockstein.couple import bockstein_couple, couple_analyze
from .bockstein.steenrod import QUOTED_RULES, identity_sanity, steenrod_dsquare_check
from .cohomology import chow, hom_cone, witt_cohomology
from .exactalg import (
    FormalGroup,
    FreeComplex,
    GradedGroup,
    graded_kunneth,
    integer_cohomology,
    intmat,
)
from .geometry import hp1_classify, projective_bundle_hp1
from .motives import (
    DyadicEta,
    Free,
    NormalForm,
    OddTorsion,
    TateComplex,
    decompose,
    realize,
    tensor,
    _to_free_complex,
)
from .wittring import GWElement, kx_orbit_canonical


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""

    def line(self) -> str:
        mark = "pass" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{mark}  {self.name}: {self.cases} cases{extra}"


# ---------------------------------------------------------------- corpora


ODD_PRIMES = (3, 5, 7)


def random_normal_form(rng, max_blocks=8, allow_odd=True, max_t=4) -> NormalForm:
    blocks = []
    for _ in range(rng.randrange(1, max_blocks + 1)):
        w = rng.randrange(-3, 4)
        roll = rng.random()
        if roll < 0.35:
            blocks.append(Free(w))
        elif roll < 0.85 or not allow_odd:
            blocks.append(DyadicEta(rng.randrange(0, max_t + 1), w))
        else:
            blocks.append(
                OddTorsion(rng.choice(ODD_PRIMES), rng.randrange(1, 3), w)
            )
    return NormalForm(blocks)


def random_odd_free_normal_form(rng, max_blocks=8, max_t=4) -> NormalForm:
    return random_normal_form(rng, max_blocks, allow_odd=False, max_t=max_t)


def unimodular_twist(c: TateComplex, rng) -> TateComplex:
    """A complex isomorphic to c via random unimodular base change per
    weight, with fresh cell ids."""
    fc, index = _to_free_complex(c)
    auts = {w: intmat.random_unimodular(fc.rank(w), rng) for w in fc.ranks}
    diffs = {}
    for w in fc.weights():
        m = fc.differential(w)
        if not (m and m[0]):
            continue
        a_w = auts[w][0]
        m = intmat.matmul(a_w, m)
        if w + 1 in auts:
            m = intmat.matmul(m, auts[w + 1][1])
        diffs[w] = m
    cells = []
    names = {}
    for w in fc.weights():
        for k in range(fc.rank(w)):
            cid = f"w{w}n{k}"
            names[(w, k)] = cid
            cells.append((cid, w))
    attach = {}
    for w, m in diffs.items():
        for r in range(len(m)):
            for s in range(len(m[0])):
                if m[r][s]:
                    attach[(names[(w + 1, s)], names[(w, r)])] = m[r][s]
    return TateComplex(cells, attach)


def chow_direct(c: TateComplex) -> GradedGroup:
    """Chow groups straight from the complex: the eta attachments die
    in the ordinary motive, so each cell contributes a split Z."""
    data = {}
    for _, w in c.cells:
        data[w] = data.get(w, 0) + 1
    return GradedGroup({w: FormalGroup.free(n) for w, n in data.items()})


def witt_direct(c: TateComplex, modulus: int = 0) -> GradedGroup:
    """Witt cohomology straight from the complex: the integer
    cohomology of the attachment data."""
    fc, _ = _to_free_complex(c)
    return integer_cohomology(fc, modulus)


# ----------------------------------------------------------------- suites


def suite_block_pages(seed=0, j_range=(1, 2, 3), q_lo=-2, q_hi=10) -> SuiteResult:
    """Block tables against a direct transcription of the four cases."""
    cases = 0
    for j in j_range:
        for w in (-1, 0, 2):
            for i in range(2, j + 4):
                pg = block_pages(DyadicEta(j, w), i)
                for qq in range(q_lo, q_hi + 1):
                    for line in (-1, 0, 1, 2, 3):
                        q = qq + w
                        p = q + line + w  # p - 2w ranges around the diagonal
                        cases += 1
                        got = pg.dim(p, q)
                        want = _oracle_dim(j, i, p - 2 * w, q - w)
                        if got != want:
                            return SuiteResult(
                                "block-pages",
                                False,
                                cases,
                                f"dim at j={j} i={i} (p,q)=({p},{q}): {got} != {want}",
                            )
                        got_r = pg.differential_rank(p, q)
                        want_r = 1 if (p - 2 * w == q - w >= 0 and i == j + 1) else 0
                        if got_r != want_r:
                            return SuiteResult(
                                "block-pages",
                                False,
                                cases,
                                f"differential at j={j} i={i} ({p},{q})",
                            )
    return SuiteResult("block-pages", True, cases)


def _oracle_dim(j, i, p, q):
    # verbatim four-case table for the untwisted block
    if j > 0 and i <= j + 1 and p == q and q >= 0:
        return 1
    if j > 0 and i <= j + 1 and p == q + 1 and q >= 1:
        return 1
    if j > 0 and p == q + 1 and 0 < q < j + 1:
        return 1
    return 0


def suite_torsion_profile(seed=7, samples=300, max_blocks=12) -> SuiteResult:
    rng = random.Random(seed)
    cases = 0
    for _ in range(samples):
        a = random_normal_form(rng, max_blocks)
        h = witt_cohomology(a, 0)
        for i in range(2, degeneracy_page(a) + 3):
            cases += 1
            if pages_from_witt(h, i) != pages(a, i):
                return SuiteResult(
                    "torsion-profile", False, cases, f"mismatch at page {i} for {a}"
                )
    return SuiteResult("torsion-profile", True, cases)


def suite_degeneracy(seed=7, samples=300, max_blocks=12) -> SuiteResult:
    rng = random.Random(seed)
    cases = 0
    for _ in range(samples):
        a = random_normal_form(rng, max_blocks)
        d = degeneracy_page(a)
        r = d - 2
        cases += 1
        stable = _page_content(pages(a, d))
        for m in range(d + 1, d + 3):
            if _page_content(pages(a, m)) != stable:
                return SuiteResult("degeneracy", False, cases, f"not stable for {a}")
        if r >= 1 and _page_content(pages(a, d - 1)) == stable:
            return SuiteResult(
                "degeneracy", False, cases, f"stabilized early for {a}"
            )
    return SuiteResult("degeneracy", True, cases)


def _page_content(pg):
    return pg.canonical()[1:]


def suite_decompose(
    seed=11, samples=500, autos_per_complex=100, max_blocks=12
) -> SuiteResult:
    rng = random.Random(seed)
    cases = 0
    for _ in range(samples):
        a = random_odd_free_normal_form(rng, max_blocks)
        c = realize(a)
        cases += 1
        if decompose(c) != a:
            return SuiteResult("decompose", False, cases, f"round trip failed: {a}")
        base = decompose(c)
        for _k in range(autos_per_complex):
            cases += 1
            twisted = unimodular_twist(c, rng)
            if decompose(twisted) != base:
                return SuiteResult(
                    "decompose", False, cases, f"automorphism changed blocks: {a}"
                )
        # conservativity: blocks reproduce the direct invariants
        cases += 1
        if chow(base) != chow_direct(c) or witt_cohomology(base, 0) != witt_direct(c):
            return SuiteResult("decompose", False, cases, f"invariants differ: {a}")
    return SuiteResult("decompose", True, cases)


def suite_pbundle(seed=0, n_range=(1, 2, 3, 4, 5, 6)) -> SuiteResult:
    cases = 0
    for n in n_range:
        cases += 1
        blocks = decompose(projective_bundle_hp1(GWElement(0, 2**n)))
        w = witt_cohomology(blocks, 0)
        if w[2] != FormalGroup.cyclic(2**n):
            return SuiteResult("pbundle", False, cases, f"H^2 wrong for 2^{n}")
        if degeneracy_page(blocks) != n + 2:
            return SuiteResult("pbundle", False, cases, f"page wrong for 2^{n}")
    cases += 1
    blocks = decompose(projective_bundle_hp1(GWElement(1, 3)))
    if witt_cohomology(blocks, 0)[2] != FormalGroup.cyclic(3):
        return SuiteResult("pbundle", False, cases, "odd Euler class torsion wrong")
    if degeneracy_page(blocks) != 2:
        return SuiteResult("pbundle", False, cases, "odd Euler class page wrong")
    return SuiteResult("pbundle", True, cases)


def suite_kunneth(seed=5, samples=100, max_blocks=8, t_max=4) -> SuiteResult:
    rng = random.Random(seed)
    cases = 0
    for t1 in range(0, t_max + 1):
        for t2 in range(0, t_max + 1):
            cases += 1
            rep = kunneth_e2(
                NormalForm([DyadicEta(t1, 0)]), NormalForm([DyadicEta(t2, 0)])
            )
            if not rep.equal:
                return SuiteResult(
                    "kunneth", False, cases, f"block pair ({t1},{t2})"
                )
    for _ in range(samples):
        cases += 1
        a = random_normal_form(rng, max_blocks)
        b = random_normal_form(rng, max_blocks)
        rep = kunneth_e2(a, b)
        if not rep.equal:
            return SuiteResult("kunneth", False, cases, f"{a} x {b}")
    return SuiteResult("kunneth", True, cases)


def suite_tensor_witt(seed=3, samples=200, max_blocks=8) -> SuiteResult:
    rng = random.Random(seed)
    cases = 0
    for _ in range(samples):
        cases += 1
        a = random_normal_form(rng, max_blocks)
        b = random_normal_form(rng, max_blocks)
        got = witt_cohomology(tensor(a, b), 0)
        want = graded_kunneth(witt_cohomology(a, 0), witt_cohomology(b, 0))
        if got != want:
            return SuiteResult("tensor-witt", False, cases, f"{a} x {b}")
    return SuiteResult("tensor-witt", True, cases)


def suite_bounded(seed=9, samples=100, max_blocks=8, window=20) -> SuiteResult:
    rng = random.Random(seed)
    cases = 0
    for _ in range(samples):
        a = random_normal_form(rng, max_blocks)
        pg = pages(a, 2)
        wmod2 = witt_cohomology(a, 2)
        qs = [t.q for t in pg.towers] or [0]
        q0 = min(qs) - 2
        for q in range(q0, q0 + window):
            for p in range(q - 3, 2 * q + 4):
                cases += 1
                dim = pg.dim(p, q)
                if p > 2 * q:
                    if dim != 0:
                        return SuiteResult(
                            "bounded", False, cases, f"nonzero above line: {a}"
                        )
                    continue
                grp = wmod2[p - q]
                want = len(grp.torsion) + grp.free_rank
                if dim != want:
                    return SuiteResult(
                        "bounded", False, cases, f"({p},{q}) of {a}: {dim} != {want}"
                    )
    return SuiteResult("bounded", True, cases)


def random_adjacent_complex(rng, max_cells=8, bound=9) -> FreeComplex:
    """Random small composable complex with entries in [-bound, bound].

    Either a single random differential between two adjacent weights
    (composability is vacuous) or a stack of elementary cones whose
    matrices stay within the entry bound.
    """
    if rng.random() < 0.7:
        lo = rng.randrange(-2, 2)
        n_lo = rng.randrange(1, max_cells // 2 + 1)
        n_hi = rng.randrange(1, max_cells - n_lo + 1)
        m = [
            [rng.randrange(-bound, bound + 1) for _ in range(n_hi)]
            for _ in range(n_lo)
        ]
        return FreeComplex({lo: n_lo, lo + 1: n_hi}, {lo: m})
    ranks = {}
    diffs = {}
    w0 = rng.randrange(-2, 1)
    spread = rng.randrange(2, 4)
    for w in range(w0, w0 + spread + 1):
        ranks[w] = rng.randrange(1, 3)
    for w in range(w0, w0 + spread):
        m = intmat.zeros(ranks[w], ranks[w + 1])
        # block-diagonal cones only, so consecutive products vanish
        if rng.random() < 0.7:
            r = rng.randrange(0, ranks[w])
            s = rng.randrange(0, ranks[w + 1])
            if (w - w0) % 2 == 0:
                m[r][s] = rng.randrange(1, bound + 1)
        diffs[w] = m
    return FreeComplex(ranks, diffs)


def suite_couple(seed=13, samples=100, max_cells=8, bound=9) -> SuiteResult:
    rng = random.Random(seed)
    cases = 0
    for _ in range(samples):
        cases += 1
        c = random_adjacent_complex(rng, max_cells, bound)
        res = couple_analyze(bockstein_couple(c))
        h = integer_cohomology(c, 0)
        expected = {
            d: FormalGroup.from_invariants([2] * g.free_rank)
            for d, g in h.items()
            if g.free_rank
        }
        if res.e_infinity != expected:
            return SuiteResult("couple", False, cases, f"E_inf mismatch: {c.ranks}")
        if not res.four_term_exact:
            return SuiteResult("couple", False, cases, f"four-term: {c.ranks}")
        if not res.identification_holds:
            return SuiteResult("couple", False, cases, f"identification: {c.ranks}")
        if not res.degeneration_holds:
            return SuiteResult("couple", False, cases, f"degeneration: {c.ranks}")
    return SuiteResult("couple", True, cases)


def suite_steenrod(seed=0) -> SuiteResult:
    """The quoted-set reductions, the mutation sanity check, and the
    extended Cartan closure.  The (2,2) entry is irreducible under the
    exact quoted set; see the extended mode for the full square."""
    cases = 0
    rep = steenrod_dsquare_check()
    for pos in ((1, 1), (1, 2), (2, 1)):
        cases += 1
        if not rep.entry(*pos).reduced_to_zero:
            return SuiteResult("steenrod", False, cases, f"entry {pos} nonzero")
    cases += 1
    if rep.entry(2, 2).reduced_to_zero:
        return SuiteResult(
            "steenrod", False, cases, "(2,2) unexpectedly closed by quoted set"
        )
    cases += 1
    if not steenrod_dsquare_check(extended=True).all_zero:
        return SuiteResult("steenrod", False, cases, "extended set fails")
    cases += 1
    mutated = tuple(r for r in QUOTED_RULES if r[0] != ("Sq2", "Sq2"))
    if steenrod_dsquare_check(rules=mutated).entry(1, 1).reduced_to_zero:
        return SuiteResult("steenrod", False, cases, "mutation not detected")
    cases += 1
    if not identity_sanity():
        return SuiteResult("steenrod", False, cases, "identity sanity")
    return SuiteResult("steenrod", True, cases)


def suite_truncated(seed=17, samples=50, max_blocks=6, j_max=3) -> SuiteResult:
    rng = random.Random(seed)
    cases = 0
    for _ in range(samples):
        a = random_normal_form(rng, max_blocks)
        for j in range(1, j_max + 1):
            cases += 1
            rep = truncated_check(a, j)
            if not rep.holds:
                return SuiteResult(
                    "truncated", False, cases, f"j={j} for {a}: {rep.detail}"
                )
    return SuiteResult("truncated", True, cases)


def suite_leibniz(seed=0, e_max=3) -> SuiteResult:
    cases = 0
    for j in range(1, e_max + 1):
        for k in range(1, e_max + 1):
            cases += 1
            rep = leibniz_check(j, k)
            if not rep.holds:
                return SuiteResult("leibniz", False, cases, f"(j,k)=({j},{k})")
    return SuiteResult("leibniz", True, cases)


def suite_hom_cone(seed=0, l_max=24, pq_max=6) -> SuiteResult:
    cases = 1
    if hom_cone(6, 3, 2, "MW") != FormalGroup.from_invariants([3, 4]):
        return SuiteResult("hom-cone", False, cases, "spot value l=6 failed")
    for l in range(1, l_max + 1):
        t = 0
        s = l
        while s % 2 == 0:
            s //= 2
            t += 1
        for cat in ("MW", "W"):
            for p in range(-pq_max, pq_max + 1):
                for q in range(-pq_max, pq_max + 1):
                    cases += 1
                    lhs = hom_cone(l, p, q, cat).direct_sum(hom_cone(1, p, q, cat))
                    rhs = hom_cone(1 << t, p, q, cat).direct_sum(
                        hom_cone(s, p, q, cat)
                    )
                    if lhs != rhs:
                        return SuiteResult(
                            "hom-cone", False, cases, f"l={l} ({p},{q}) {cat}"
                        )
    return SuiteResult("hom-cone", True, cases)


def suite_hp1(seed=0, grid=5) -> SuiteResult:
    cases = 0
    for rank in range(-grid, grid + 1):
        for sig in range(-grid, grid + 1):
            if (rank - sig) % 2:
                continue
            e = GWElement(rank, sig)
            cases += 1
            canon = kx_orbit_canonical(e)
            if kx_orbit_canonical(canon) != canon:
                return SuiteResult("hp1", False, cases, "canonicalization not idempotent")
            flipped = GWElement(rank, -sig)
            if kx_orbit_canonical(flipped) != canon:
                return SuiteResult("hp1", False, cases, "orbit members disagree")
            cls = hp1_classify(2, e)
            want = rank == 0 and sig != 0
            if cls.stably_free_nontrivial != want:
                return SuiteResult("hp1", False, cases, f"flag wrong at ({rank},{sig})")
            if cls.is_free != (rank == 0 and sig == 0):
                return SuiteResult("hp1", False, cases, f"free flag at ({rank},{sig})")
            if hp1_classify(2, flipped) != cls:
                return SuiteResult("hp1", False, cases, "orbit constancy failed")
    return SuiteResult("hp1", True, cases)


SUITES = {
    "block-pages": suite_block_pages,
    "torsion-profile": suite_torsion_profile,
    "degeneracy": suite_degeneracy,
    "decompose": suite_decompose,
    "pbundle": suite_pbundle,
    "kunneth": suite_kunneth,
    "tensor-witt": suite_tensor_witt,
    "bounded": suite_bounded,
    "couple": suite_couple,
    "steenrod": suite_steenrod,
    "truncated": suite_truncated,
    "leibniz": suite_leibniz,
    "hom-cone": suite_hom_cone,
    "hp1": suite_hp1,
}


def run_suite(name: str, seed: int = 0, **kwargs) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](seed=seed, **kwargs)
