"""(Degenerate) Courant algebroids over polynomial bases, constructions of
Dorfman 2-representations from them, the core Courant algebroid of a
matched pair, Dirac-structure checkers, and the Manin-pair quotient."""

from __future__ import annotations

import random as _random
from dataclasses import dataclass
from fractions import Fraction

from .exactpoly import Polynomial, PolyMatrix, PolyTensor, random_polynomial
from .report import CheckReport
from .bundle import (
    AnchoredBundle, BaseSpace, DullBracket, LieAlgebroidData,
    LinearConnection, dorfman_curvature, field_apply, field_bracket,
    random_section, section_add, section_neg, section_pair, section_smul,
    section_sub, unit_section, zero_section, DorfmanConnection,
)
from .lie2 import Dorfman2Rep
from .poisson import SelfDual2Rep
from .matched import LAPairData, check_la_matched_pair


# ---------------------------------------------------------------------------
# degenerate Courant algebroids


@dataclass
class DegenerateCourant:
    """Courant algebroid with a possibly degenerate pairing.

    bracket_comps[i][j] lists the components of the bracket of the i-th
    and j-th frames.  The bracket of arbitrary polynomial sections is
    extended by the Leibniz rule in the second slot and by
    [[f e1, e2]] = f [[e1, e2]] - rho(e2)(f) e1 + <e1, e2> Df
    in the first.  dmat columns give D applied to the coordinates:
    D f = sum_k (sum_m dmat[k][m] d_m f) e_k.
    """

    base: BaseSpace
    rank: int
    rho: PolyMatrix
    pairing: PolyMatrix
    bracket_comps: list
    dmat: PolyMatrix

    def __post_init__(self):
        p = self.base.dim
        if (self.rho.rows, self.rho.cols) != (p, self.rank):
            raise ValueError("anchor shape mismatch")
        if (self.pairing.rows, self.pairing.cols) != (self.rank, self.rank):
            raise ValueError("pairing shape mismatch")
        if (self.dmat.rows, self.dmat.cols) != (self.rank, p):
            raise ValueError("D-map shape mismatch")

    @property
    def base_dim(self):
        return self.base.dim

    def frames(self):
        return [unit_section(self.base_dim, self.rank, i)
                for i in range(self.rank)]

    def rho_field(self, e):
        return self.rho.apply(e)

    def rho_apply(self, e, f: Polynomial) -> Polynomial:
        return field_apply(self.rho_field(e), f)

    def pair(self, e1, e2) -> Polynomial:
        out = Polynomial.zero(self.base_dim)
        for i in range(self.rank):
            if e1[i].is_zero():
                continue
            for j in range(self.rank):
                if e2[j].is_zero():
                    continue
                out = out + e1[i] * self.pairing[i, j] * e2[j]
        return out

    def dee(self, f: Polynomial):
        out = zero_section(self.base_dim, self.rank)
        for k in range(self.rank):
            for m in range(self.base_dim):
                out[k] = out[k] + self.dmat[k, m] * f.diff(m)
        return out

    def _frame_bracket_with(self, i, e2):
        """[[e_i, e2]] for a frame e_i and a polynomial section e2."""
        out = zero_section(self.base_dim, self.rank)
        for j in range(self.rank):
            if not e2[j].is_zero():
                for k in range(self.rank):
                    out[k] = out[k] + e2[j] * self.bracket_comps[i][j][k]
            out[j] = out[j] + self.rho_apply(
                unit_section(self.base_dim, self.rank, i), e2[j])
        return out

    def bracket(self, e1, e2):
        out = zero_section(self.base_dim, self.rank)
        frame = [unit_section(self.base_dim, self.rank, i)
                 for i in range(self.rank)]
        for i in range(self.rank):
            if e1[i].is_zero():
                continue
            out = section_add(out, section_smul(e1[i],
                                                self._frame_bracket_with(i, e2)))
            out = section_sub(out, section_smul(self.rho_apply(e2, e1[i]),
                                                frame[i]))
            out = section_add(out, section_smul(self.pair(frame[i], e2),
                                                self.dee(e1[i])))
        return out


def check_courant_axioms(ca: DegenerateCourant, seed: int = 0,
                         title: str = "Courant algebroid") -> CheckReport:
    rng = _random.Random(seed)
    report = CheckReport(title, seed)
    p, n = ca.base_dim, ca.rank

    sym = ca.pairing.add(ca.pairing.transpose().scale(-1))
    report.add("G_symmetric", sym.is_zero())

    secs = ca.frames() + [random_section(rng, p, n), random_section(rng, p, n)]
    funcs = [Polynomial.variable(p, m) for m in range(p)] + \
        [random_polynomial(rng, p)]

    for i in range(len(secs)):
        for j in range(len(secs)):
            for k in range(len(secs)):
                e1, e2, e3 = secs[i], secs[j], secs[k]
                res = section_sub(
                    ca.bracket(e1, ca.bracket(e2, e3)),
                    section_add(ca.bracket(ca.bracket(e1, e2), e3),
                                ca.bracket(e2, ca.bracket(e1, e3))))
                report.add_residual_section(
                    "CA1", res, witness=f"(e{i + 1}, e{j + 1}, e{k + 1})")
                res = ca.rho_apply(e1, ca.pair(e2, e3)) \
                    - ca.pair(ca.bracket(e1, e2), e3) \
                    - ca.pair(e2, ca.bracket(e1, e3))
                report.add_residual_poly(
                    "CA2", res, witness=f"(e{i + 1}, e{j + 1}, e{k + 1})")

    for i in range(len(secs)):
        for j in range(i, len(secs)):
            e1, e2 = secs[i], secs[j]
            res = section_sub(section_add(ca.bracket(e1, e2),
                                          ca.bracket(e2, e1)),
                              ca.dee(ca.pair(e1, e2)))
            report.add_residual_section("CA3", res,
                                        witness=f"(e{i + 1}, e{j + 1})")
    for i in range(len(secs)):
        for j in range(len(secs)):
            e1, e2 = secs[i], secs[j]
            res = section_sub(ca.rho_field(ca.bracket(e1, e2)),
                              field_bracket(ca.rho_field(e1),
                                            ca.rho_field(e2)))
            report.add_residual_section("CA4", res,
                                        witness=f"(e{i + 1}, e{j + 1})")
            for m, f in enumerate(funcs):
                res = section_sub(
                    ca.bracket(e1, section_smul(f, e2)),
                    section_add(section_smul(f, ca.bracket(e1, e2)),
                                section_smul(ca.rho_apply(e1, f), e2)))
                report.add_residual_section(
                    "CA5", res, witness=f"(e{i + 1}, f{m + 1}, e{j + 1})")

    for m, f in enumerate(funcs):
        for i, e in enumerate(secs):
            res = ca.pair(ca.dee(f), e) - ca.rho_apply(e, f)
            report.add_residual_poly("D_compat", res,
                                     witness=f"(f{m + 1}, e{i + 1})")
    report.add("rho_D_zero", ca.rho.matmul(ca.dmat).is_zero(),
               witness="rho composed with D")
    return report


# ---------------------------------------------------------------------------
# example classes


def quadratic_lie_algebra(base: BaseSpace, comps, pairing: PolyMatrix
                          ) -> DegenerateCourant:
    """Courant algebroid with zero anchor and D: a Lie algebra bundle with
    an invariant pairing (invariance is the caller's CA2 check)."""
    n = pairing.rows
    p = base.dim
    return DegenerateCourant(base, n, PolyMatrix(p, p, n), pairing, comps,
                             PolyMatrix(p, n, p))


def standard_courant(p: int) -> DegenerateCourant:
    """TM + T*M over R^p with the Dorfman bracket; frames are the
    coordinate fields followed by the coordinate differentials."""
    base = BaseSpace(p, [f"x{m + 1}" for m in range(p)])
    n = 2 * p
    zero = Polynomial.zero(p)
    one = Polynomial.const(p, 1)
    rho = PolyMatrix(p, p, n)
    for m in range(p):
        rho[m, m] = one
    pairing = PolyMatrix(p, n, n)
    for m in range(p):
        pairing[m, p + m] = one
        pairing[p + m, m] = one
    comps = [[[zero for _ in range(n)] for _ in range(n)] for _ in range(n)]
    dmat = PolyMatrix(p, n, p)
    for m in range(p):
        dmat[p + m, m] = one
    return DegenerateCourant(base, n, rho, pairing, comps, dmat)


# ---------------------------------------------------------------------------
# Dorfman 2-representations from Courant algebroids and 2-representations


def _nabla_vec(ca: DegenerateCourant, gamma, x, e):
    """Covariant derivative along the vector field x of the section e, for
    a TM-connection with Christoffel data gamma[m][i][j]."""
    p, n = ca.base_dim, ca.rank
    out = zero_section(p, n)
    for j in range(n):
        out[j] = out[j] + field_apply(x, e[j])
    for m in range(p):
        if x[m].is_zero():
            continue
        for i in range(n):
            if e[i].is_zero():
                continue
            coeff = x[m] * e[i]
            for j in range(n):
                out[j] = out[j] + coeff * gamma[m][i][j]
    return out


def adjoint_dorfman2rep(ca: DegenerateCourant, gamma) -> Dorfman2Rep:
    """Basic Dorfman 2-representation of a Courant algebroid with
    nondegenerate pairing and a metric TM-connection gamma[m][i][j]."""
    p, n = ca.base_dim, ca.rank
    for m in range(p):
        for i in range(n):
            for k in range(n):
                res = -ca.pairing[i, k].diff(m)
                for j in range(n):
                    res = res + gamma[m][i][j] * ca.pairing[j, k] \
                        + gamma[m][k][j] * ca.pairing[i, j]
                if not res.is_zero():
                    raise ValueError(
                        "connection is not metric: witness "
                        f"(d{m + 1}, e{i + 1}, e{k + 1})")
    try:
        ginv = ca.pairing.inverse_constant()
    except ValueError as exc:
        raise ValueError(f"pairing is not invertible: {exc}") from exc

    bundle = AnchoredBundle(ca.base, n, ca.rho)
    partial_b = ca.rho.matmul(ginv)

    frames = ca.frames()

    def delta_prime(e, s):
        """Delta'_e s = [[e, s]] + nabla_{rho(s)} e."""
        return section_add(ca.bracket(e, s),
                           _nabla_vec(ca, gamma, ca.rho_field(s), e))

    def lower(s):
        """Transport E -> E* via the pairing."""
        return ca.pairing.apply(s)

    comps = [[[Polynomial.zero(p) for _ in range(n)] for _ in range(n)]
             for _ in range(n)]
    ginv_cols = [[ginv[r, j] for r in range(n)] for j in range(n)]
    for i in range(n):
        for j in range(n):
            img = lower(delta_prime(frames[i], ginv_cols[j]))
            for k in range(n):
                comps[i][j][k] = img[k]
    delta = DorfmanConnection(bundle, comps)

    gamma_bas = [[[Polynomial.zero(p) for _ in range(p)] for _ in range(p)]
                 for _ in range(n)]
    for i in range(n):
        for m in range(p):
            for mp in range(p):
                acc = -ca.rho[mp, i].diff(m)
                for j in range(n):
                    acc = acc + gamma[m][i][j] * ca.rho[mp, j]
                gamma_bas[i][m][mp] = acc
    nabla_bas = LinearConnection(bundle, p, gamma_bas)

    coord_fields = [unit_section(p, p, m) for m in range(p)]

    def bracket_delta(e1, e2):
        alpha = [ca.pair(_nabla_vec(ca, gamma, coord_fields[m], e1), e2)
                 for m in range(p)]
        pulled = ca.rho.transpose().apply(alpha)
        return section_sub(ca.bracket(e1, e2), ginv.apply(pulled))

    def nabla_bas_field(e, x):
        return section_add(field_bracket(ca.rho_field(e), x),
                           ca.rho_field(_nabla_vec(ca, gamma, x, e)))

    def curv_nabla(x, y, e):
        out = section_sub(_nabla_vec(ca, gamma, x, _nabla_vec(ca, gamma, y, e)),
                          _nabla_vec(ca, gamma, y, _nabla_vec(ca, gamma, x, e)))
        return section_sub(out, _nabla_vec(ca, gamma, field_bracket(x, y), e))

    curv = Dorfman2Rep.curv_tensor(p, n, p)
    for i in range(n):
        for j in range(i + 1, n):
            e1, e2 = frames[i], frames[j]
            for m in range(p):
                x = coord_fields[m]
                val = section_neg(
                    _nabla_vec(ca, gamma, x, bracket_delta(e1, e2)))
                val = section_add(val,
                                  bracket_delta(_nabla_vec(ca, gamma, x, e1), e2))
                val = section_add(val,
                                  bracket_delta(e1, _nabla_vec(ca, gamma, x, e2)))
                val = section_add(val, _nabla_vec(
                    ca, gamma, nabla_bas_field(e2, x), e1))
                val = section_sub(val, _nabla_vec(
                    ca, gamma, nabla_bas_field(e1, x), e2))
                alpha = [ca.pair(curv_nabla(x, coord_fields[mp], e1), e2)
                         for mp in range(p)]
                val = section_sub(val,
                                  ginv.apply(ca.rho.transpose().apply(alpha)))
                img = lower(val)
                for k in range(n):
                    if not img[k].is_zero():
                        curv.set((i, j, m, k), img[k])
    return Dorfman2Rep(bundle, p, partial_b, delta, nabla_bas, curv)


def standard_dorfman2rep(rank_e: int, dull: DullBracket) -> Dorfman2Rep:
    """Standard Dorfman 2-representation from a skew dull bracket on
    TM + E* anchored by the tangent projection."""
    bundle = dull.bundle
    p = bundle.base_dim
    rq = bundle.rank
    if rq != p + rank_e:
        raise ValueError("bundle rank must be base dim + E-rank")
    expected = PolyMatrix(p, p, rq)
    for m in range(p):
        expected[m, m] = Polynomial.const(p, 1)
    if not bundle.anchor.add(expected.scale(-1)).is_zero():
        raise ValueError("anchor is not the tangent projection")
    if not dull.is_skew():
        raise ValueError("bracket is not skew-symmetric")
    for i in range(rq):
        for j in range(rq):
            for k in range(p):
                if not dull.comps[i][j][k].is_zero():
                    raise ValueError(
                        "tangent part of the bracket is not the Lie bracket: "
                        f"witness (v{i + 1}, v{j + 1})")

    partial_b = PolyMatrix(p, rank_e, rq)
    for r in range(rank_e):
        partial_b[r, p + r] = Polynomial.const(p, 1)
    delta = DorfmanConnection.from_dull_bracket(dull)
    gamma = [[[delta.comps[i][p + j][p + k] for k in range(rank_e)]
              for j in range(rank_e)] for i in range(rq)]
    nabla = LinearConnection(bundle, rank_e, gamma)

    curv = Dorfman2Rep.curv_tensor(p, rq, rank_e)
    frames = bundle.frames()
    for i in range(rq):
        for j in range(i + 1, rq):
            for r in range(rank_e):
                tau = unit_section(p, rq, p + r)
                val = dorfman_curvature(delta, dull, frames[i], frames[j], tau)
                for k in range(rq):
                    if not val[k].is_zero():
                        curv.set((i, j, r, k), val[k])
    return Dorfman2Rep(bundle, rank_e, partial_b, delta, nabla, curv)


def semidirect_dorfman2rep(rep) -> Dorfman2Rep:
    """Dorfman 2-representation on Q = A + C* defined by a 2-term
    representation of A on partial: C -> B."""
    algA = rep.algebroid
    p = algA.bundle.base_dim
    ra = algA.bundle.rank
    rb, rc = rep.rank_b, rep.rank_c
    rq = ra + rc

    anchor = PolyMatrix(p, p, rq)
    for m in range(p):
        for i in range(ra):
            anchor[m, i] = algA.bundle.anchor[m, i]
    bundle = AnchoredBundle(algA.bundle.base, rq, anchor)

    partial_b = PolyMatrix(p, rb, rq)
    for r in range(rb):
        for m in range(rc):
            partial_b[r, ra + m] = rep.partial[r, m]

    zero = Polynomial.zero(p)
    comps = [[[zero for _ in range(rq)] for _ in range(rq)] for _ in range(rq)]
    gammaAC = rep.connC.gamma
    for i in range(ra):
        for j in range(ra):
            for k in range(ra):
                comps[i][j][k] = -algA.bracket.comps[i][k][j]
        for m in range(rc):
            for k in range(rc):
                comps[i][ra + m][ra + k] = gammaAC[i][m][k]
    for n_ in range(rc):
        for m in range(rc):
            for j in range(ra):
                comps[ra + n_][ra + m][j] = -gammaAC[j][m][n_]
    delta = DorfmanConnection(bundle, comps)

    gamma = [[[zero for _ in range(rb)] for _ in range(rb)]
             for _ in range(rq)]
    for i in range(ra):
        gamma[i] = [[rep.connB.gamma[i][j][k] for k in range(rb)]
                    for j in range(rb)]
    nabla = LinearConnection(bundle, rb, gamma)

    curv = Dorfman2Rep.curv_tensor(p, rq, rb)
    for i in range(ra):
        for j in range(i + 1, ra):
            for r in range(rb):
                for m in range(rc):
                    entry = rep.curv.get(i, j, r, m)
                    if not entry.is_zero():
                        curv.set((i, j, r, ra + m), entry)
    for i in range(ra):
        for n_ in range(rc):
            for r in range(rb):
                for j in range(ra):
                    entry = rep.curv.get(i, j, r, n_)
                    if not entry.is_zero():
                        curv.set((i, ra + n_, r, j), entry)
    return Dorfman2Rep(bundle, rb, partial_b, delta, nabla, curv)


# ---------------------------------------------------------------------------
# core Courant algebroid of a matched pair


def core_courant(pair: LAPairData) -> DegenerateCourant:
    """Degenerate Courant algebroid inherited by the core Q* of a matched
    pair: anchor rho_Q partial_Q, pairing <tau1, partial_Q tau2>, bracket
    Delta_{partial_Q tau1} tau2 - nabla_{partial_B tau2} tau1, D = rho_Q* d."""
    S, D = pair.selfdual, pair.dorfman
    p = D.bundle.base_dim
    n = D.rank_q

    rho = D.bundle.anchor.matmul(S.partial_q)
    pairing = S.partial_q
    dmat = D.bundle.anchor.transpose()

    nQstar = S.nablaQstar()
    comps = []
    for i in range(n):
        tau_i = unit_section(p, n, i)
        row = []
        for j in range(n):
            tau_j = unit_section(p, n, j)
            val = section_sub(
                D.delta.apply(S.partial_q.apply(tau_i), tau_j),
                nQstar.apply(D.partial_b.apply(tau_j), tau_i))
            row.append(val)
        comps.append(row)
    return DegenerateCourant(D.bundle.base, n, rho, pairing, comps, dmat)


def check_core_courant(pair: LAPairData, seed: int = 0,
                       title: str = "core Courant algebroid") -> CheckReport:
    rng = _random.Random(seed)
    ca = core_courant(pair)
    report = CheckReport(title, seed)
    report.merge(check_courant_axioms(ca, seed))

    S, D = pair.selfdual, pair.dorfman
    p, n = ca.base_dim, ca.rank
    taus = ca.frames() + [random_section(rng, p, n)]
    algB = S.algebroid

    for i in range(len(taus)):
        for j in range(len(taus)):
            res = section_sub(
                D.partial_b.apply(ca.bracket(taus[i], taus[j])),
                algB.bracket.apply(D.partial_b.apply(taus[i]),
                                   D.partial_b.apply(taus[j])))
            report.add_residual_section(
                "partialB_bracket", res, witness=f"(tau{i + 1}, tau{j + 1})")
    res = algB.bundle.anchor.matmul(D.partial_b).add(ca.rho.scale(-1))
    report.add("partialB_anchor", res.is_zero(),
               witness="rho_B partial_B = rho_{Q*}")

    funcs = [Polynomial.variable(p, m) for m in range(p)] + \
        [random_polynomial(rng, p)]
    for m, f in enumerate(funcs):
        exact = D.bundle.anchor_pullback_d(f)
        for j, tau in enumerate(taus):
            res = ca.bracket(exact, tau)
            report.add_residual_section(
                "exact_central", res, witness=f"(f{m + 1}, tau{j + 1})")
    return report


def tangent_double_pair(ca: DegenerateCourant, gamma) -> LAPairData:
    """Matched pair encoding the tangent double of a Courant algebroid with
    nondegenerate pairing, split by a metric TM-connection gamma[m][i][j]."""
    dorfman = adjoint_dorfman2rep(ca, gamma)
    p, n = ca.base_dim, ca.rank
    ginv = ca.pairing.inverse_constant()

    tm_anchor = PolyMatrix.identity(p, p)
    tm = AnchoredBundle(ca.base, p, tm_anchor)
    zero = Polynomial.zero(p)
    tm_comps = [[[zero for _ in range(p)] for _ in range(p)] for _ in range(p)]
    algB = LieAlgebroidData(tm, DullBracket(tm, tm_comps))

    nablaQ = LinearConnection(tm, n, [[[gamma[m][i][j] for j in range(n)]
                                       for i in range(n)] for m in range(p)])

    coord_fields = [unit_section(p, p, m) for m in range(p)]

    def curv_nabla(x, y, e):
        out = section_sub(_nabla_vec(ca, gamma, x, _nabla_vec(ca, gamma, y, e)),
                          _nabla_vec(ca, gamma, y, _nabla_vec(ca, gamma, x, e)))
        return section_sub(out, _nabla_vec(ca, gamma, field_bracket(x, y), e))

    curvB = SelfDual2Rep.curv_tensor(p, p, n)
    frames = ca.frames()
    for l in range(p):
        for m in range(l + 1, p):
            for s in range(n):
                val = curv_nabla(coord_fields[l], coord_fields[m], frames[s])
                img = ca.pairing.apply(val)
                for t in range(n):
                    if not img[t].is_zero():
                        curvB.set((l, m, s, t), img[t])
    selfdual = SelfDual2Rep(algB, n, ginv, nablaQ, curvB)
    return LAPairData(selfdual, dorfman)


# ---------------------------------------------------------------------------
# exact linear algebra over the rationals


def _constant_matrix(mat: PolyMatrix):
    out = []
    for row in mat.data:
        out_row = []
        for e in row:
            if not e.is_constant():
                raise ValueError("inclusion matrices must be constant")
            out_row.append(e.constant_value())
        out.append(out_row)
    return out


def _rref(rows):
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _null_space(rows, ncols):
    """Basis of the right null space of the given rational matrix."""
    rref, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for c in free:
        vec = [Fraction(0)] * ncols
        vec[c] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rref[r][c]
        basis.append(vec)
    return basis


def _rank(rows, ncols):
    return len(_rref(rows)[0]) if rows else 0


def _invert_rational(mat):
    n = len(mat)
    aug = [list(row) + [Fraction(1) if i == j else Fraction(0)
                        for j in range(n)] for i, row in enumerate(mat)]
    rref, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("rational matrix is singular")
    return [row[n:] for row in rref]


def _left_inverse(cols_matrix):
    """Left inverse of a full-column-rank rational matrix (n x d)."""
    n = len(cols_matrix)
    d = len(cols_matrix[0]) if n else 0
    gram = [[sum(cols_matrix[k][i] * cols_matrix[k][j] for k in range(n))
             for j in range(d)] for i in range(d)]
    ginv = _invert_rational(gram)
    return [[sum(ginv[i][k] * cols_matrix[j][k] for k in range(d))
             for j in range(n)] for i in range(d)]


def _apply_rational(rows, section, base_dim):
    out = []
    for row in rows:
        acc = Polynomial.zero(base_dim)
        for coeff, comp in zip(row, section):
            if coeff != 0:
                acc = acc + comp.scale(coeff)
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# Dirac structures


@dataclass
class DiracData:
    """Constant subbundles U of Q (columns of u_incl) and B' of B
    (columns of bprime_incl); the core part is fixed to the annihilator
    of U in Q*."""

    u_incl: PolyMatrix
    bprime_incl: PolyMatrix

    def __post_init__(self):
        self._u = _constant_matrix(self.u_incl)
        self._bp = _constant_matrix(self.bprime_incl)
        ut = self.u_transpose_rows()
        if _rank(ut, self.u_incl.rows) != self.u_incl.cols:
            raise ValueError("U inclusion matrix is not of full column rank")
        bpt = [[self._bp[i][a] for i in range(self.bprime_incl.rows)]
               for a in range(self.bprime_incl.cols)]
        if _rank(bpt, self.bprime_incl.rows) != self.bprime_incl.cols:
            raise ValueError("B' inclusion matrix is not of full column rank")

    @property
    def dim_u(self):
        return self.u_incl.cols

    def u_transpose_rows(self):
        return [[self._u[i][a] for i in range(self.u_incl.rows)]
                for a in range(self.u_incl.cols)]

    def u_annihilator_basis(self):
        """Basis of the annihilator of U inside Q* (rational vectors)."""
        return _null_space(self.u_transpose_rows(), self.u_incl.rows)

    def u_membership_rows(self):
        """Rows annihilating the column space of u_incl; for the standard
        pairing these coincide with the annihilator basis."""
        return self.u_annihilator_basis()

    def bp_membership_rows(self):
        rows = [[self._bp[i][a] for i in range(self.bprime_incl.rows)]
                for a in range(self.bprime_incl.cols)]
        return _null_space(rows, self.bprime_incl.rows)


def _sections_of(mat: PolyMatrix, rng, base_dim):
    cols = [[mat[i, a] for i in range(mat.rows)] for a in range(mat.cols)]
    if cols:
        mix = zero_section(base_dim, mat.rows)
        for col in cols:
            f = random_polynomial(rng, base_dim, max_degree=1)
            mix = section_add(mix, section_smul(f, col))
        cols = cols + [mix]
    return cols


def check_dirac(dorfman: Dorfman2Rep, selfdual, data: DiracData,
                mode: str = "vb_dirac", seed: int = 0) -> CheckReport:
    """Check the Dirac conditions for (U, B') in the given mode:
    vb_dirac, la_subalgebroid, or la_dirac (the union of both)."""
    if mode not in ("vb_dirac", "la_subalgebroid", "la_dirac"):
        raise ValueError(f"unknown mode: {mode}")
    if mode in ("la_subalgebroid", "la_dirac") and selfdual is None:
        raise ValueError(f"mode {mode} requires the self-dual structure")
    rng = _random.Random(seed)
    p = dorfman.bundle.base_dim

    report = CheckReport(f"Dirac conditions ({mode})", seed)
    u_rows = data.u_membership_rows()
    bp_rows = data.bp_membership_rows()
    ut_rows = data.u_transpose_rows()
    ann = data.u_annihilator_basis()
    ann_secs = [[Polynomial.const(p, c) for c in vec] for vec in ann]
    u_secs = _sections_of(data.u_incl, rng, p)
    bp_secs = _sections_of(data.bprime_incl, rng, p)

    def in_bprime(label, sec, witness):
        report.add_residual_section(
            label, _apply_rational(bp_rows, sec, p), witness=witness)

    def in_u(label, sec, witness):
        report.add_residual_section(
            label, _apply_rational(u_rows, sec, p), witness=witness)

    def in_u_ann(label, sec, witness):
        report.add_residual_section(
            label, _apply_rational(ut_rows, sec, p), witness=witness)

    if mode in ("vb_dirac", "la_dirac"):
        prefix = "vb:" if mode == "la_dirac" else ""
        bracket = dorfman.dual_bracket()
        for it, tau in enumerate(ann_secs):
            in_bprime(prefix + "1_partial_into_Bprime",
                      dorfman.partial_b.apply(tau), f"(core{it + 1})")
        for iu, u in enumerate(u_secs):
            for ib, b in enumerate(bp_secs):
                in_bprime(prefix + "2_nabla_preserves_Bprime",
                          dorfman.nablaB.apply(u, b),
                          f"(u{iu + 1}, b{ib + 1})")
        for i in range(len(u_secs)):
            for j in range(len(u_secs)):
                in_u(prefix + "3_bracket_closes_in_U",
                     bracket.apply(u_secs[i], u_secs[j]),
                     f"(u{i + 1}, u{j + 1})")
                for ib, b in enumerate(bp_secs):
                    in_u_ann(prefix + "4_curvature_into_annihilator",
                             dorfman.curv_matrix(u_secs[i],
                                                 u_secs[j]).apply(b),
                             f"(u{i + 1}, u{j + 1}, b{ib + 1})")
    if mode in ("la_subalgebroid", "la_dirac"):
        prefix = "la:" if mode == "la_dirac" else ""
        for it, tau in enumerate(ann_secs):
            in_u(prefix + "1_partial_into_U",
                 selfdual.partial_q.apply(tau), f"(core{it + 1})")
        for ib, b in enumerate(bp_secs):
            for iu, u in enumerate(u_secs):
                in_u(prefix + "2_nabla_preserves_U",
                     selfdual.nablaQ.apply(b, u), f"(b{ib + 1}, u{iu + 1})")
        for i in range(len(bp_secs)):
            for j in range(len(bp_secs)):
                in_bprime(prefix + "3_bracket_closes_in_Bprime",
                          selfdual.algebroid.bracket.apply(bp_secs[i],
                                                           bp_secs[j]),
                          f"(b{i + 1}, b{j + 1})")
                for iu, u in enumerate(u_secs):
                    in_u_ann(prefix + "4_curvature_into_annihilator",
                             selfdual.curv_matrix(bp_secs[i],
                                                  bp_secs[j]).apply(u),
                             f"(b{i + 1}, b{j + 1}, u{iu + 1})")
    return report


def induced_lie_algebroid_on_U(dorfman: Dorfman2Rep, data: DiracData
                               ) -> LieAlgebroidData:
    """Lie algebroid structure inherited by U from a VB-Dirac structure
    with full support."""
    p = dorfman.bundle.base_dim
    d = data.dim_u
    cols = _constant_matrix(data.u_incl)
    left = _left_inverse(cols) if d else []
    u_rows = data.u_membership_rows()
    bracket = dorfman.dual_bracket()

    anchor = dorfman.bundle.anchor.matmul(data.u_incl)
    bundle = AnchoredBundle(dorfman.bundle.base, d, anchor)
    zero = Polynomial.zero(p)
    comps = [[[zero for _ in range(d)] for _ in range(d)] for _ in range(d)]
    u_cols = [[data.u_incl[i, a] for i in range(data.u_incl.rows)]
              for a in range(d)]
    for a in range(d):
        for b in range(d):
            val = bracket.apply(u_cols[a], u_cols[b])
            if any(not r.is_zero()
                   for r in _apply_rational(u_rows, val, p)):
                raise ValueError("bracket of U-frames does not close in U")
            coeffs = _apply_rational(left, val, p)
            for c in range(d):
                comps[a][b][c] = coeffs[c]
    return LieAlgebroidData(bundle, DullBracket(bundle, comps))


# ---------------------------------------------------------------------------
# Manin pair


@dataclass
class ManinPairResult:
    courant: DegenerateCourant
    complement_indices: list
    u_inclusion: PolyMatrix


def manin_pair(pair: LAPairData, data: DiracData) -> ManinPairResult:
    """Courant algebroid on (U + Q*) / graph(-partial_Q on the annihilator
    of U), realized on the basis U-frames + a coordinate complement of the
    annihilator in Q*."""
    S, D = pair.selfdual, pair.dorfman
    p = D.bundle.base_dim
    rq = D.rank_q
    rb = D.rank_b
    if data.bprime_incl.cols != rb:
        raise ValueError("Manin pair requires full support B' = B")
    d = data.dim_u

    ann = data.u_annihilator_basis()           # dim rq - d
    # deterministic coordinate complement of the annihilator in Q*
    complement = []
    span = [list(v) for v in ann]
    current = _rank(span, rq)
    for k in range(rq):
        cand = [Fraction(0)] * rq
        cand[k] = Fraction(1)
        trial = span + [cand]
        if _rank(trial, rq) > current:
            span = trial
            current += 1
            complement.append(k)
        if current == rq:
            break
    if len(complement) != d:
        raise ValueError("could not build a complement of the annihilator")

    # change of basis on Q*: columns are the complement vectors then the
    # annihilator basis; its inverse decomposes tau = c + upsilon
    basis_cols = []
    for k in complement:
        col = [Fraction(0)] * rq
        col[k] = Fraction(1)
        basis_cols.append(col)
    basis_cols.extend(ann)
    basis_matrix = [[basis_cols[c][r] for c in range(rq)] for r in range(rq)]
    basis_inv = _invert_rational(basis_matrix)

    u_cols = [[data.u_incl[i, a] for i in range(rq)] for a in range(d)]
    u_const = _constant_matrix(data.u_incl)
    u_left = _left_inverse(u_const) if d else []
    u_rows = data.u_membership_rows()

    def reduce(u_sec, tau_sec):
        """Canonical representative of (u, tau) in the chosen basis;
        returns the 2d components."""
        coeffs = _apply_rational(basis_inv, tau_sec, p)
        c_part, w_part = coeffs[:d], coeffs[d:]
        shift = zero_section(p, rq)
        for wc, vec in zip(w_part, ann):
            shift = section_add(
                shift, section_smul(wc, [Polynomial.const(p, c)
                                         for c in vec]))
        u_new = section_add(u_sec, S.partial_q.apply(shift))
        if any(not r.is_zero() for r in _apply_rational(u_rows, u_new, p)):
            raise ValueError("quotient representative does not lie in U")
        out = _apply_rational(u_left, u_new, p)
        return out + c_part

    def pairing_value(u1, t1, u2, t2):
        return section_pair(u1, t2) + section_pair(u2, t1) \
            + section_pair(t1, S.partial_q.apply(t2))

    # basis sections of the quotient
    basis_u = [(u_cols[a], zero_section(p, rq)) for a in range(d)]
    basis_c = []
    for k in complement:
        tau = zero_section(p, rq)
        tau[k] = Polynomial.const(p, 1)
        basis_c.append((zero_section(p, rq), tau))
    basis = basis_u + basis_c
    n = 2 * d

    rho = PolyMatrix(p, p, n)
    for idx, (u, tau) in enumerate(basis):
        vec = section_add(D.bundle.anchor.apply(u),
                          S.algebroid.bundle.anchor.apply(
                              D.partial_b.apply(tau)))
        for m in range(p):
            rho[m, idx] = vec[m]

    pairing = PolyMatrix(p, n, n)
    for i in range(n):
        for j in range(n):
            pairing[i, j] = pairing_value(*basis[i], *basis[j])

    nQ = S.nablaQ
    nQstar = S.nablaQstar()
    bracketU = D.dual_bracket()

    def core_bracket(t1, t2):
        return section_sub(D.delta.apply(S.partial_q.apply(t1), t2),
                           nQstar.apply(D.partial_b.apply(t2), t1))

    def full_bracket(u1, t1, u2, t2):
        u_out = bracketU.apply(u1, u2)
        u_out = section_add(u_out, nQ.apply(D.partial_b.apply(t1), u2))
        u_out = section_sub(u_out, nQ.apply(D.partial_b.apply(t2), u1))
        t_out = core_bracket(t1, t2)
        t_out = section_add(t_out, D.delta.apply(u1, t2))
        t_out = section_sub(t_out, D.delta.apply(u2, t1))
        t_out = section_add(t_out, D.bundle.anchor_pullback_d(
            section_pair(t1, u2)))
        return u_out, t_out

    comps = []
    for i in range(n):
        row = []
        for j in range(n):
            u_out, t_out = full_bracket(*basis[i], *basis[j])
            row.append(reduce(u_out, t_out))
        comps.append(row)

    dmat = PolyMatrix(p, n, p)
    for m in range(p):
        f = Polynomial.variable(p, m)
        vec = reduce(zero_section(p, rq), D.bundle.anchor_pullback_d(f))
        for k in range(n):
            dmat[k, m] = vec[k]

    base = D.bundle.base
    ca = DegenerateCourant(base, n, rho, pairing, comps, dmat)
    u_inclusion = PolyMatrix(p, n, d)
    for a in range(d):
        u_inclusion[a, a] = Polynomial.const(p, 1)
    return ManinPairResult(ca, complement, u_inclusion)


def check_manin_pair(result: ManinPairResult, seed: int = 0,
                     title: str = "Manin pair") -> CheckReport:
    report = CheckReport(title, seed)
    ca = result.courant
    report.merge(check_courant_axioms(ca, seed))
    det = ca.pairing.determinant()
    report.add("pairing_nondegenerate",
               det.is_constant() and det.constant_value() != 0,
               residual="" if det.is_constant() else det.render())
    d = result.u_inclusion.cols
    iso = all(ca.pairing[i, j].is_zero() for i in range(d) for j in range(d))
    report.add("U_isotropic", iso)
    closed = all(ca.bracket_comps[i][j][k].is_zero()
                 for i in range(d) for j in range(d)
                 for k in range(d, ca.rank))
    report.add("U_bracket_closed", closed)
    return report


# ---------------------------------------------------------------------------
# splitting change on the self-dual side


def selfdual_change_splitting(rep: SelfDual2Rep, phi: PolyTensor,
                              sign: int = 1) -> SelfDual2Rep:
    """Shift a self-dual 2-representation by the 2-form phi on Q with
    values in B* (indices (i, j, r)), matching the splitting change of the
    Dorfman side: Phi(b) in Hom(Q, Q*) with
    <Phi(b) q1, q2> = sign * <phi(q1, q2), b>."""
    p = rep.base_dim
    rq, rb = rep.rank_q, rep.rank_b

    def phi_matrix(l):
        out = PolyMatrix(p, rq, rq)
        for s in range(rq):
            for t in range(rq):
                out[t, s] = phi.get(s, t, l).scale(sign)
        return out

    phi_mats = [phi_matrix(l) for l in range(rb)]
    dq_phi = [rep.partial_q.matmul(m) for m in phi_mats]

    gamma = [[[rep.nablaQ.gamma[l][s][k] + dq_phi[l][k, s]
               for k in range(rq)] for s in range(rq)] for l in range(rb)]
    nablaQ2 = LinearConnection(rep.algebroid.bundle, rq, gamma)

    frames_b = rep.algebroid.bundle.frames()
    nQ = rep.nablaQ
    nQstar = rep.nablaQstar()

    def phi_apply(l, sec):
        return phi_mats[l].apply(sec)

    curv2 = SelfDual2Rep.curv_tensor(p, rb, rq)
    for l in range(rb):
        for m in range(l + 1, rb):
            b1, b2 = frames_b[l], frames_b[m]
            base_mat = rep.curv_matrix(b1, b2)
            bracket_b = rep.algebroid.bracket.apply(b1, b2)
            for s in range(rq):
                q = unit_section(p, rq, s)
                val = base_mat.apply(q)
                # covariant differential of Phi
                val = section_add(val, nQstar.apply(b1, phi_apply(m, q)))
                val = section_sub(val, phi_apply(m, nQ.apply(b1, q)))
                val = section_sub(val, nQstar.apply(b2, phi_apply(l, q)))
                val = section_add(val, phi_apply(l, nQ.apply(b2, q)))
                for r in range(rb):
                    if not bracket_b[r].is_zero():
                        val = section_sub(
                            val, section_smul(bracket_b[r],
                                              phi_apply(r, q)))
                # quadratic correction
                val = section_add(val, phi_mats[l].apply(
                    rep.partial_q.apply(phi_apply(m, q))))
                val = section_sub(val, phi_mats[m].apply(
                    rep.partial_q.apply(phi_apply(l, q))))
                for t in range(rq):
                    if not val[t].is_zero():
                        curv2.add_to((l, m, s, t), val[t])
    return SelfDual2Rep(rep.algebroid, rq, rep.partial_q, nablaQ2, curv2)
