"""Matched pairs of 2-representations and of a Lie 2-algebroid with a
self-dual 2-representation, plus the bicrossproduct construction."""

from __future__ import annotations

import random as _random
from dataclasses import dataclass
from itertools import combinations

from .exactpoly import Polynomial, PolyMatrix, PolyTensor
from .report import CheckReport
from .bundle import (
    AnchoredBundle, BaseSpace, DullBracket, LieAlgebroidData,
    LinearConnection, TwoRepData, check_two_rep, field_apply, field_bracket,
    random_section, section_add, section_is_zero, section_neg, section_pair,
    section_sub, unit_section, zero_section,
)
from .lie2 import (
    Dorfman2Rep, GradedFunction, SplitLie2Data, build_homological_field,
    check_dorfman2rep,
)
from .poisson import PoissonStructure, SelfDual2Rep, check_selfdual2rep


# ---------------------------------------------------------------------------
# matched pairs of 2-term representations


@dataclass
class MatchedPair2Reps:
    """Two Lie algebroids A and B acting on each other up to homotopy,
    through the complexes partial_a : C -> A and partial_b : C -> B.

    curvAB holds R_AB(a_i, a_j) as a Hom(B, C) block; curvBA holds
    R_BA(b_i, b_j) as a Hom(A, C) block.
    """

    algA: LieAlgebroidData
    algB: LieAlgebroidData
    rank_c: int
    partialA: PolyMatrix
    partialB: PolyMatrix
    nablaAB: LinearConnection
    nablaAC: LinearConnection
    nablaBA: LinearConnection
    nablaBC: LinearConnection
    curvAB: PolyTensor
    curvBA: PolyTensor

    @property
    def rank_a(self):
        return self.algA.bundle.rank

    @property
    def rank_b(self):
        return self.algB.bundle.rank

    @property
    def base_dim(self):
        return self.algA.bundle.base_dim

    def two_rep_of_A(self) -> TwoRepData:
        return TwoRepData(self.algA, self.rank_b, self.rank_c, self.partialB,
                          self.nablaAB, self.nablaAC, self.curvAB)

    def two_rep_of_B(self) -> TwoRepData:
        return TwoRepData(self.algB, self.rank_a, self.rank_c, self.partialA,
                          self.nablaBA, self.nablaBC, self.curvBA)

    def curvAB_matrix(self, a1, a2) -> PolyMatrix:
        return self.two_rep_of_A().curv_matrix(a1, a2)

    def curvBA_matrix(self, b1, b2) -> PolyMatrix:
        return self.two_rep_of_B().curv_matrix(b1, b2)


def check_matched_two_reps(pair: MatchedPair2Reps, seed: int = 0,
                           title: str = "matched pair of 2-representations"
                           ) -> CheckReport:
    rng = _random.Random(seed)
    report = CheckReport(title, seed)
    report.merge(check_two_rep(pair.two_rep_of_A(), seed), prefix="2rep_A:")
    report.merge(check_two_rep(pair.two_rep_of_B(), seed), prefix="2rep_B:")

    p = pair.base_dim
    ra, rb, rc = pair.rank_a, pair.rank_b, pair.rank_c
    a_secs = pair.algA.bundle.frames() + [random_section(rng, p, ra)]
    b_secs = pair.algB.bundle.frames() + [random_section(rng, p, rb)]
    c_secs = [unit_section(p, rc, m) for m in range(rc)] + \
        [random_section(rng, p, rc)]

    dA = pair.partialA.apply
    dB = pair.partialB.apply
    nAB, nAC = pair.nablaAB.apply, pair.nablaAC.apply
    nBA, nBC = pair.nablaBA.apply, pair.nablaBC.apply
    brA = pair.algA.bracket.apply
    brB = pair.algB.bracket.apply

    # (1) symmetric part of the C-bracket candidate vanishes
    for i in range(len(c_secs)):
        for j in range(i, len(c_secs)):
            c1, c2 = c_secs[i], c_secs[j]
            res = section_sub(nAC(dA(c1), c2), nBC(dB(c2), c1))
            res = section_add(res, section_sub(nAC(dA(c2), c1), nBC(dB(c1), c2)))
            report.add_residual_section("condition_1", res,
                                        witness=f"(c{i + 1}, c{j + 1})")

    # (2) [a, partial_A c] = partial_A(nabla_a c) - nabla_{partial_B c} a
    for ia, a in enumerate(a_secs):
        for ic, c in enumerate(c_secs):
            res = section_sub(brA(a, dA(c)),
                              section_sub(dA(nAC(a, c)), nBA(dB(c), a)))
            report.add_residual_section("condition_2", res,
                                        witness=f"(a{ia + 1}, c{ic + 1})")

    # (3) [b, partial_B c] = partial_B(nabla_b c) - nabla_{partial_A c} b
    for ib, b in enumerate(b_secs):
        for ic, c in enumerate(c_secs):
            res = section_sub(brB(b, dB(c)),
                              section_sub(dB(nBC(b, c)), nAB(dA(c), b)))
            report.add_residual_section("condition_3", res,
                                        witness=f"(b{ib + 1}, c{ic + 1})")

    # (4) mixed flatness up to both curvatures
    for ia, a in enumerate(a_secs):
        for ib, b in enumerate(b_secs):
            for ic, c in enumerate(c_secs):
                lhs = section_sub(nBC(b, nAC(a, c)), nAC(a, nBC(b, c)))
                lhs = section_sub(lhs, nAC(nBA(b, a), c))
                lhs = section_add(lhs, nBC(nAB(a, b), c))
                rhs = section_sub(pair.curvBA_matrix(b, dB(c)).apply(a),
                                  pair.curvAB_matrix(a, dA(c)).apply(b))
                report.add_residual_section(
                    "condition_4", section_sub(lhs, rhs),
                    witness=f"(a{ia + 1}, b{ib + 1}, c{ic + 1})")

    # (5) partial_A of R_AB measures the failure of nabla_b as a derivation
    for i in range(len(a_secs)):
        for j in range(i + 1, len(a_secs)):
            a1, a2 = a_secs[i], a_secs[j]
            for ib, b in enumerate(b_secs):
                rhs = section_neg(nBA(b, brA(a1, a2)))
                rhs = section_add(rhs, brA(nBA(b, a1), a2))
                rhs = section_add(rhs, brA(a1, nBA(b, a2)))
                rhs = section_add(rhs, nBA(nAB(a2, b), a1))
                rhs = section_sub(rhs, nBA(nAB(a1, b), a2))
                lhs = dA(pair.curvAB_matrix(a1, a2).apply(b))
                report.add_residual_section(
                    "condition_5", section_sub(lhs, rhs),
                    witness=f"(a{i + 1}, a{j + 1}, b{ib + 1})")

    # (6) mirror of (5)
    for i in range(len(b_secs)):
        for j in range(i + 1, len(b_secs)):
            b1, b2 = b_secs[i], b_secs[j]
            for ia, a in enumerate(a_secs):
                rhs = section_neg(nAB(a, brB(b1, b2)))
                rhs = section_add(rhs, brB(nAB(a, b1), b2))
                rhs = section_add(rhs, brB(b1, nAB(a, b2)))
                rhs = section_add(rhs, nAB(nBA(b2, a), b1))
                rhs = section_sub(rhs, nAB(nBA(b1, a), b2))
                lhs = dB(pair.curvBA_matrix(b1, b2).apply(a))
                report.add_residual_section(
                    "condition_6", section_sub(lhs, rhs),
                    witness=f"(b{i + 1}, b{j + 1}, a{ia + 1})")

    # (7) the two covariant differentials of the curvatures agree
    def d_nablaA_curvBA(a1, a2, b1, b2):
        def phi(a, bb1, bb2):
            return pair.curvBA_matrix(bb1, bb2).apply(a)

        def cov(a, aa, bb1, bb2):
            term = nAC(a, phi(aa, bb1, bb2))
            term = section_sub(term, phi(aa, nAB(a, bb1), bb2))
            term = section_sub(term, phi(aa, bb1, nAB(a, bb2)))
            return term

        out = section_sub(cov(a1, a2, b1, b2), cov(a2, a1, b1, b2))
        return section_sub(out, phi(brA(a1, a2), b1, b2))

    def d_nablaB_curvAB(b1, b2, a1, a2):
        def phi(b, aa1, aa2):
            return pair.curvAB_matrix(aa1, aa2).apply(b)

        def cov(b, bb, aa1, aa2):
            term = nBC(b, phi(bb, aa1, aa2))
            term = section_sub(term, phi(bb, nBA(b, aa1), aa2))
            term = section_sub(term, phi(bb, aa1, nBA(b, aa2)))
            return term

        out = section_sub(cov(b1, b2, a1, a2), cov(b2, b1, a1, a2))
        return section_sub(out, phi(brB(b1, b2), a1, a2))

    for i in range(len(a_secs)):
        for j in range(i + 1, len(a_secs)):
            for k in range(len(b_secs)):
                for l in range(k + 1, len(b_secs)):
                    a1, a2 = a_secs[i], a_secs[j]
                    b1, b2 = b_secs[k], b_secs[l]
                    res = section_sub(d_nablaA_curvBA(a1, a2, b1, b2),
                                      d_nablaB_curvAB(b1, b2, a1, a2))
                    report.add_residual_section(
                        "condition_7", res,
                        witness=f"(a{i + 1}, a{j + 1}, b{k + 1}, b{l + 1})")

    # derived identities
    res = pair.algA.bundle.anchor.matmul(pair.partialA).add(
        pair.algB.bundle.anchor.matmul(pair.partialB).scale(-1))
    report.add("anchor_chain", res.is_zero(),
               witness="rho_A partial_A = rho_B partial_B")
    for ia, a in enumerate(a_secs):
        for ib, b in enumerate(b_secs):
            lhs = field_bracket(pair.algA.bundle.anchor_field(a),
                                pair.algB.bundle.anchor_field(b))
            rhs = section_sub(pair.algB.bundle.anchor_field(nAB(a, b)),
                              pair.algA.bundle.anchor_field(nBA(b, a)))
            report.add_residual_section(
                "anchor_mixed", section_sub(lhs, rhs),
                witness=f"(a{ia + 1}, b{ib + 1})")
    return report


# ---------------------------------------------------------------------------
# bicrossproduct


def bicrossproduct(pair: MatchedPair2Reps) -> SplitLie2Data:
    """Split Lie 2-algebroid on (A + B)[1] + C*[2] from a matched pair."""
    p = pair.base_dim
    ra, rb, rc = pair.rank_a, pair.rank_b, pair.rank_c
    rq = ra + rb
    base = pair.algA.bundle.base

    anchor = PolyMatrix(p, p, rq)
    for m in range(p):
        for i in range(ra):
            anchor[m, i] = pair.algA.bundle.anchor[m, i]
        for j in range(rb):
            anchor[m, ra + j] = pair.algB.bundle.anchor[m, j]
    Q = AnchoredBundle(base, rq, anchor)

    # l1 = (-partial_A) + partial_B : C -> A + B
    l1 = PolyMatrix(p, rq, rc)
    for m in range(rc):
        for i in range(ra):
            l1[i, m] = -pair.partialA[i, m]
        for j in range(rb):
            l1[ra + j, m] = pair.partialB[j, m]

    zero = Polynomial.zero(p)
    comps = [[[zero for _ in range(rq)] for _ in range(rq)] for _ in range(rq)]
    for i in range(ra):
        for j in range(ra):
            for k in range(ra):
                comps[i][j][k] = pair.algA.bracket.comps[i][j][k]
    for i in range(rb):
        for j in range(rb):
            for k in range(rb):
                comps[ra + i][ra + j][ra + k] = pair.algB.bracket.comps[i][j][k]
    frames_a = pair.algA.bundle.frames()
    frames_b = pair.algB.bundle.frames()
    for i in range(ra):
        for j in range(rb):
            grad_b = pair.nablaAB.apply(frames_a[i], frames_b[j])
            grad_a = pair.nablaBA.apply(frames_b[j], frames_a[i])
            for k in range(ra):
                comps[i][ra + j][k] = -grad_a[k]
                comps[ra + j][i][k] = grad_a[k]
            for k in range(rb):
                comps[i][ra + j][ra + k] = grad_b[k]
                comps[ra + j][i][ra + k] = -grad_b[k]
    bracket = DullBracket(Q, comps)

    # connection of Q on C*: dual of nabla^{AC} + nabla^{BC}
    gamma = [[[zero for _ in range(rc)] for _ in range(rc)] for _ in range(rq)]
    for i in range(ra):
        for j in range(rc):
            for k in range(rc):
                gamma[i][j][k] = -pair.nablaAC.gamma[i][k][j]
    for i in range(rb):
        for j in range(rc):
            for k in range(rc):
                gamma[ra + i][j][k] = -pair.nablaBC.gamma[i][k][j]
    nabla = LinearConnection(Q, rc, gamma)

    # l3 from both curvature tensors, values in C
    l3 = SplitLie2Data.l3_tensor(p, rq, rc)

    def part_a(idx):
        return frames_a[idx] if idx < ra else zero_section(p, ra)

    def part_b(idx):
        return frames_b[idx - ra] if idx >= ra else zero_section(p, rb)

    for i in range(rq):
        for j in range(i + 1, rq):
            for k in range(j + 1, rq):
                a1, a2, a3 = part_a(i), part_a(j), part_a(k)
                b1, b2, b3 = part_b(i), part_b(j), part_b(k)
                val = pair.curvAB_matrix(a1, a2).apply(b3)
                val = section_add(val, pair.curvAB_matrix(a2, a3).apply(b1))
                val = section_add(val, pair.curvAB_matrix(a3, a1).apply(b2))
                val = section_sub(val, pair.curvBA_matrix(b1, b2).apply(a3))
                val = section_sub(val, pair.curvBA_matrix(b2, b3).apply(a1))
                val = section_sub(val, pair.curvBA_matrix(b3, b1).apply(a2))
                for m in range(rc):
                    if not val[m].is_zero():
                        l3.set((i, j, k, m), val[m])

    return SplitLie2Data(Q, rc, l1, bracket, nabla, l3)


def decompose_bicrossproduct(split: SplitLie2Data, rank_a: int
                             ) -> MatchedPair2Reps:
    """Recover the matched pair from a bicrossproduct-shaped split Lie
    2-algebroid whose underlying bundle splits as A + B after the first
    rank_a frames.  Raises ValueError naming the violated precondition."""
    p = split.bundle.base_dim
    rq, rc = split.rank_q, split.rank_b
    ra = rank_a
    rb = rq - ra
    comps = split.bracket.comps

    for i in range(ra):
        for j in range(ra):
            for k in range(ra, rq):
                if not comps[i][j][k].is_zero():
                    raise ValueError(
                        "pure A-frame brackets do not close in A")
    for i in range(ra, rq):
        for j in range(ra, rq):
            for k in range(ra):
                if not comps[i][j][k].is_zero():
                    raise ValueError(
                        "pure B-frame brackets do not close in B")
    for key in combinations(range(ra), 3):
        for m in range(rc):
            if not split.l3.get(*key, m).is_zero():
                raise ValueError("l3 does not vanish on pure A-frame triples")
    for key in combinations(range(ra, rq), 3):
        for m in range(rc):
            if not split.l3.get(*key, m).is_zero():
                raise ValueError("l3 does not vanish on pure B-frame triples")

    base = split.bundle.base
    anchorA = PolyMatrix(p, p, ra)
    anchorB = PolyMatrix(p, p, rb)
    for m in range(p):
        for i in range(ra):
            anchorA[m, i] = split.bundle.anchor[m, i]
        for j in range(rb):
            anchorB[m, j] = split.bundle.anchor[m, ra + j]
    bundleA = AnchoredBundle(base, ra, anchorA)
    bundleB = AnchoredBundle(base, rb, anchorB)
    zero = Polynomial.zero(p)

    compsA = [[[comps[i][j][k] for k in range(ra)] for j in range(ra)]
              for i in range(ra)]
    compsB = [[[comps[ra + i][ra + j][ra + k] for k in range(rb)]
               for j in range(rb)] for i in range(rb)]
    algA = LieAlgebroidData(bundleA, DullBracket(bundleA, compsA))
    algB = LieAlgebroidData(bundleB, DullBracket(bundleB, compsB))

    partialA = PolyMatrix(p, ra, rc)
    partialB = PolyMatrix(p, rb, rc)
    for m in range(rc):
        for i in range(ra):
            partialA[i, m] = -split.l1[i, m]
        for j in range(rb):
            partialB[j, m] = split.l1[ra + j, m]

    gammaAB = [[[comps[i][ra + j][ra + k] for k in range(rb)]
                for j in range(rb)] for i in range(ra)]
    gammaBA = [[[comps[ra + j][i][k] for k in range(ra)] for i in range(ra)]
               for j in range(rb)]
    nablaAB = LinearConnection(bundleA, rb, gammaAB)
    nablaBA = LinearConnection(bundleB, ra, gammaBA)

    # split.nablaB is the Q-connection on C*; its dual acts on C
    gammaAC = [[[-split.nablaB.gamma[i][k][j] for k in range(rc)]
                for j in range(rc)] for i in range(ra)]
    gammaBC = [[[-split.nablaB.gamma[ra + i][k][j] for k in range(rc)]
                for j in range(rc)] for i in range(rb)]
    nablaAC = LinearConnection(bundleA, rc, gammaAC)
    nablaBC = LinearConnection(bundleB, rc, gammaBC)

    curvAB = PolyTensor(p, [(ra, 2, True), (rb, 1, False), (rc, 1, False)])
    for i in range(ra):
        for j in range(i + 1, ra):
            for r in range(rb):
                for m in range(rc):
                    entry = split.l3.get(i, j, ra + r, m)
                    if not entry.is_zero():
                        curvAB.set((i, j, r, m), entry)
    curvBA = PolyTensor(p, [(rb, 2, True), (ra, 1, False), (rc, 1, False)])
    for i in range(rb):
        for j in range(i + 1, rb):
            for r in range(ra):
                for m in range(rc):
                    entry = -split.l3.get(ra + i, ra + j, r, m)
                    if not entry.is_zero():
                        curvBA.set((i, j, r, m), entry)

    return MatchedPair2Reps(algA, algB, rc, partialA, partialB,
                            nablaAB, nablaAC, nablaBA, nablaBC,
                            curvAB, curvBA)


# ---------------------------------------------------------------------------
# matched pair of a Lie 2-algebroid with a self-dual 2-representation


@dataclass
class LAPairData:
    """A Dorfman 2-representation of Q on partial_b : Q* -> B matched with
    a self-dual 2-representation of B on partial_q : Q* -> Q.

    Component structures are assumed individually valid; this pairing
    data feeds the matched-pair conditions (M1)-(M5).
    """

    selfdual: SelfDual2Rep
    dorfman: Dorfman2Rep

    def __post_init__(self):
        if self.selfdual.rank_q != self.dorfman.rank_q:
            raise ValueError("Q-rank mismatch between the two structures")
        if self.selfdual.rank_b != self.dorfman.rank_b:
            raise ValueError("B-rank mismatch between the two structures")
        if self.selfdual.base_dim != self.dorfman.bundle.base_dim:
            raise ValueError("base dimension mismatch")


def check_la_matched_pair(pair: LAPairData, seed: int = 0,
                          title: str = "matched Lie 2-algebroid pair"
                          ) -> CheckReport:
    rng = _random.Random(seed)
    report = CheckReport(title, seed)
    S, D = pair.selfdual, pair.dorfman
    p = D.bundle.base_dim
    rq, rb = D.rank_q, D.rank_b

    q_secs = D.bundle.frames() + [random_section(rng, p, rq)]
    tau_secs = [unit_section(p, rq, j) for j in range(rq)] + \
        [random_section(rng, p, rq)]
    b_secs = S.algebroid.bundle.frames() + [random_section(rng, p, rb)]
    b_frames = S.algebroid.bundle.frames()
    q_frames = D.bundle.frames()

    dQ = S.partial_q.apply
    dB = D.partial_b.apply
    dBstar = D.partial_b_star_apply
    delta = D.delta.apply
    nB = D.nablaB.apply                       # Q-connection on B
    nQ = S.nablaQ.apply                       # B-connection on Q
    nQstar = S.nablaQstar().apply             # B-connection on Q*
    brQ = D.dual_bracket().apply
    brB = S.algebroid.bracket.apply
    RQ = D.curv_matrix                        # Hom(B, Q*)
    RB = S.curv_matrix                        # Hom(Q, Q*)

    # (M1)
    for iq, q in enumerate(q_secs):
        for it, tau in enumerate(tau_secs):
            res = dQ(delta(q, tau))
            res = section_sub(res, nQ(dB(tau), q))
            res = section_sub(res, brQ(q, dQ(tau)))
            contraction = [section_pair(tau, nQ(b_frames[r], q))
                           for r in range(rb)]
            res = section_sub(res, dBstar(contraction))
            report.add_residual_section("M1", res,
                                        witness=f"(q{iq + 1}, tau{it + 1})")

    # (M2)
    for ib, b in enumerate(b_secs):
        for it, tau in enumerate(tau_secs):
            res = dB(nQstar(b, tau))
            res = section_sub(res, brB(b, dB(tau)))
            res = section_sub(res, nB(dQ(tau), b))
            report.add_residual_section("M2", res,
                                        witness=f"(b{ib + 1}, tau{it + 1})")

    # (M3)
    for i in range(len(b_secs)):
        for j in range(i + 1, len(b_secs)):
            b1, b2 = b_secs[i], b_secs[j]
            for iq, q in enumerate(q_secs):
                lhs = dB(RB(b1, b2).apply(q))
                rhs = section_neg(nB(q, brB(b1, b2)))
                rhs = section_add(rhs, brB(nB(q, b1), b2))
                rhs = section_add(rhs, brB(b1, nB(q, b2)))
                rhs = section_add(rhs, nB(nQ(b2, q), b1))
                rhs = section_sub(rhs, nB(nQ(b1, q), b2))
                report.add_residual_section(
                    "M3", section_sub(lhs, rhs),
                    witness=f"(b{i + 1}, b{j + 1}, q{iq + 1})")

    # (M4)
    for i in range(len(q_secs)):
        for j in range(i + 1, len(q_secs)):
            q1, q2 = q_secs[i], q_secs[j]
            for ib, b in enumerate(b_secs):
                lhs = dQ(RQ(q1, q2).apply(b))
                rhs = section_neg(nQ(b, brQ(q1, q2)))
                rhs = section_add(rhs, brQ(q1, nQ(b, q2)))
                rhs = section_add(rhs, brQ(nQ(b, q1), q2))
                rhs = section_add(rhs, nQ(nB(q2, b), q1))
                rhs = section_sub(rhs, nQ(nB(q1, b), q2))
                contraction = [section_pair(RB(b_frames[r], b).apply(q1), q2)
                               for r in range(rb)]
                rhs = section_add(rhs, dBstar(contraction))
                report.add_residual_section(
                    "M4", section_sub(lhs, rhs),
                    witness=f"(q{i + 1}, q{j + 1}, b{ib + 1})")

    # (M5): the two covariant differentials agree as scalars on
    # (b1, b2; q1, q2, q3)
    def omega_r(qa, qb, qc, b):
        return section_pair(RQ(qa, qb).apply(b), qc)

    def omega_b(qa, qb, b1, b2):
        return section_pair(RB(b1, b2).apply(qa), qb)

    def rho_b(b, f):
        return S.algebroid.bundle.anchor_apply(b, f)

    def rho_q(q, f):
        return D.bundle.anchor_apply(q, f)

    def cov_b(b, bb, qs):
        # nabla_b of the 3-form omega_R(. , . , .)(bb), evaluated on qs
        out = rho_b(b, omega_r(qs[0], qs[1], qs[2], bb))
        for m in range(3):
            shifted = list(qs)
            shifted[m] = nQ(b, qs[m])
            out = out - omega_r(shifted[0], shifted[1], shifted[2], bb)
        return out

    def lhs_m5(b1, b2, qs):
        out = cov_b(b1, b2, qs) - cov_b(b2, b1, qs)
        out = out - omega_r(qs[0], qs[1], qs[2], brB(b1, b2))
        return out

    def cov_q(q, qa, qb, b1, b2):
        out = rho_q(q, omega_b(qa, qb, b1, b2))
        out = out - omega_b(qa, qb, nB(q, b1), b2)
        out = out - omega_b(qa, qb, b1, nB(q, b2))
        return out

    def rhs_m5(qs, b1, b2):
        out = cov_q(qs[0], qs[1], qs[2], b1, b2)
        out = out - cov_q(qs[1], qs[0], qs[2], b1, b2)
        out = out + cov_q(qs[2], qs[0], qs[1], b1, b2)
        out = out - omega_b(brQ(qs[0], qs[1]), qs[2], b1, b2)
        out = out + omega_b(brQ(qs[0], qs[2]), qs[1], b1, b2)
        out = out - omega_b(brQ(qs[1], qs[2]), qs[0], b1, b2)
        return out

    m5_abstract_ok = True
    for i in range(len(b_secs)):
        for j in range(i + 1, len(b_secs)):
            b1, b2 = b_secs[i], b_secs[j]
            for k in range(len(q_secs)):
                for l in range(k + 1, len(q_secs)):
                    for m in range(l + 1, len(q_secs)):
                        qs = [q_secs[k], q_secs[l], q_secs[m]]
                        res = lhs_m5(b1, b2, qs) - rhs_m5(qs, b1, b2)
                        if not res.is_zero():
                            m5_abstract_ok = False
                        report.add_residual_poly(
                            "M5", res,
                            witness=f"(b{i + 1}, b{j + 1}, "
                                    f"q{k + 1}, q{l + 1}, q{m + 1})")

    # (M5) in the expanded componentwise form
    def m5_expanded(q1, q2, b1, b2):
        lhs = nQstar(b2, RQ(q1, q2).apply(b1))
        lhs = section_sub(lhs, nQstar(b1, RQ(q1, q2).apply(b2)))
        lhs = section_add(lhs, RQ(q1, q2).apply(brB(b1, b2)))
        lhs = section_add(lhs, RQ(nQ(b1, q1), q2).apply(b2))
        lhs = section_add(lhs, RQ(q1, nQ(b1, q2)).apply(b2))
        lhs = section_sub(lhs, RQ(nQ(b2, q1), q2).apply(b1))
        lhs = section_sub(lhs, RQ(q1, nQ(b2, q2)).apply(b1))
        lhs = section_add(lhs, delta(q1, RB(b1, b2).apply(q2)))
        lhs = section_sub(lhs, delta(q2, RB(b1, b2).apply(q1)))
        lhs = section_sub(lhs, RB(b1, b2).apply(brQ(q1, q2)))
        lhs = section_sub(lhs, RB(nB(q1, b1), b2).apply(q2))
        lhs = section_sub(lhs, RB(b1, nB(q1, b2)).apply(q2))
        lhs = section_add(lhs, RB(nB(q2, b1), b2).apply(q1))
        lhs = section_add(lhs, RB(b1, nB(q2, b2)).apply(q1))
        rhs = [section_pair(
            section_add(RB(b1, nB(q_frames[k], b2)).apply(q1),
                        RB(nB(q_frames[k], b1), b2).apply(q1)), q2)
            for k in range(rq)]
        rhs = section_sub(rhs, D.bundle.anchor_pullback_d(
            section_pair(RB(b1, b2).apply(q1), q2)))
        return section_sub(lhs, rhs)

    m5_expanded_ok = True
    for i in range(len(b_secs)):
        for j in range(i + 1, len(b_secs)):
            for k in range(len(q_secs)):
                for l in range(k + 1, len(q_secs)):
                    res = m5_expanded(q_secs[k], q_secs[l],
                                      b_secs[i], b_secs[j])
                    if not section_is_zero(res):
                        m5_expanded_ok = False
                    report.add_residual_section(
                        "M5_expanded", res,
                        witness=f"(q{k + 1}, q{l + 1}, b{i + 1}, b{j + 1})")
    report.add("M5_agreement", m5_abstract_ok == m5_expanded_ok,
               witness="expanded form verdict matches the differential form")

    # equivalent forms, which must agree with the primary entries
    for i in range(len(tau_secs)):
        for j in range(i, len(tau_secs)):
            s1, s2 = tau_secs[i], tau_secs[j]
            res = section_sub(delta(dQ(s1), s2), nQstar(dB(s2), s1))
            res = section_add(res, section_sub(delta(dQ(s2), s1),
                                               nQstar(dB(s1), s2)))
            res = section_sub(res, D.bundle.anchor_pullback_d(
                section_pair(s1, dQ(s2))))
            report.add_residual_section("almost_C", res,
                                        witness=f"(tau{i + 1}, tau{j + 1})")

    for iq, q in enumerate(q_secs):
        for it, tau in enumerate(tau_secs):
            for ib, b in enumerate(b_secs):
                lhs = section_sub(RQ(q, dQ(tau)).apply(b),
                                  RB(b, dB(tau)).apply(q))
                rhs = section_sub(delta(q, nQstar(b, tau)),
                                  nQstar(b, delta(q, tau)))
                rhs = section_add(rhs, delta(nQ(b, q), tau))
                rhs = section_sub(rhs, nQstar(nB(q, b), tau))
                corr = [section_pair(nQ(nB(q_frames[k], b), q), tau)
                        for k in range(rq)]
                rhs = section_sub(rhs, corr)
                report.add_residual_section(
                    "LC10", section_sub(lhs, rhs),
                    witness=f"(q{iq + 1}, tau{it + 1}, b{ib + 1})")

    # derived anchor identities
    res = D.bundle.anchor.matmul(S.partial_q).add(
        S.algebroid.bundle.anchor.matmul(D.partial_b).scale(-1))
    report.add("anchor_chain", res.is_zero(),
               witness="rho_Q partial_Q = rho_B partial_B")
    for iq, q in enumerate(q_secs):
        for ib, b in enumerate(b_secs):
            lhs = field_bracket(D.bundle.anchor_field(q),
                                S.algebroid.bundle.anchor_field(b))
            rhs = section_sub(S.algebroid.bundle.anchor_field(nB(q, b)),
                              D.bundle.anchor_field(nQ(b, q)))
            report.add_residual_section(
                "anchor_mixed", section_sub(lhs, rhs),
                witness=f"(q{iq + 1}, b{ib + 1})")
    return report


def check_q_preserves_poisson(pair: LAPairData, seed: int = 0,
                              title: str = "Q preserves the Poisson bracket"
                              ) -> CheckReport:
    report = CheckReport(title, seed)
    ps = PoissonStructure(pair.selfdual)
    field = build_homological_field(pair.dorfman)
    gens = ps.generators()

    for i in range(len(gens)):
        for j in range(i, len(gens)):
            n1, g1, d1 = gens[i]
            n2, g2, d2 = gens[j]
            res = field.apply(ps.bracket(g1, g2))
            res = res - ps.bracket(field.apply(g1), g2)
            cross = ps.bracket(g1, field.apply(g2))
            res = res + cross if d1 % 2 == 1 else res - cross
            report.add("derivation", res.is_zero(), witness=f"({n1}, {n2})",
                       residual="" if res.is_zero() else res.render())

    agreement = check_la_matched_pair(pair, seed).passed == report.passed
    report.add("matched_agreement", agreement,
               witness="derivation verdict matches the matched-pair checker")
    return report
