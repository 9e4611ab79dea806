"""Anchored bundles, connections, dull brackets, Lie algebroids, 2-term reps.

Sections of a rank-r bundle are coefficient vectors: lists of r
polynomials over the base coordinates.  All operators are stored by
their frame components and extended to arbitrary polynomial sections by
the Leibniz rules, so every check can run both on frames and on random
polynomial sections.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .exactpoly import Polynomial, PolyMatrix, PolyTensor, random_polynomial


# ---------------------------------------------------------------------------
# sections and vector fields


def zero_section(base_dim: int, rank: int):
    return [Polynomial.zero(base_dim) for _ in range(rank)]


def unit_section(base_dim: int, rank: int, index: int):
    out = zero_section(base_dim, rank)
    out[index] = Polynomial.const(base_dim, 1)
    return out


def section_add(u, v):
    return [a + b for a, b in zip(u, v)]


def section_sub(u, v):
    return [a - b for a, b in zip(u, v)]


def section_neg(u):
    return [-a for a in u]


def section_smul(f: Polynomial, u):
    return [f * a for a in u]


def section_pair(u, v) -> Polynomial:
    """Canonical pairing of a bundle section with a dual-bundle section."""
    if len(u) != len(v):
        raise ValueError("section length mismatch")
    if not u:
        raise ValueError("cannot pair empty sections without a base dimension")
    acc = Polynomial.zero(u[0].base_dim)
    for a, b in zip(u, v):
        acc = acc + a * b
    return acc


def section_is_zero(u) -> bool:
    return all(a.is_zero() for a in u)


def field_bracket(x, y):
    """Lie bracket of two vector fields given by component lists."""
    p = len(x)
    out = []
    for k in range(p):
        acc = Polynomial.zero(p) if p else Polynomial.zero(0)
        for m in range(p):
            acc = acc + x[m] * y[k].diff(m) - y[m] * x[k].diff(m)
        out.append(acc)
    return out


def field_apply(x, f: Polynomial) -> Polynomial:
    acc = Polynomial.zero(f.base_dim)
    for m, comp in enumerate(x):
        acc = acc + comp * f.diff(m)
    return acc


def random_section(rng, base_dim: int, rank: int, max_degree: int = 2):
    return [random_polynomial(rng, base_dim, max_degree) for _ in range(rank)]


# ---------------------------------------------------------------------------
# base space and bundles


@dataclass
class BaseSpace:
    dim: int
    names: tuple = ()

    def __post_init__(self):
        if not self.names:
            self.names = tuple(f"x{i + 1}" for i in range(self.dim))
        if len(self.names) != self.dim:
            raise ValueError("coordinate name count mismatch")


class AnchoredBundle:
    """Trivial bundle of given rank with a polynomial anchor to TM.

    The anchor is a (dim x rank) matrix: column i holds the vector-field
    components of the anchor image of the i-th frame section.
    """

    def __init__(self, base: BaseSpace, rank: int, anchor: PolyMatrix = None):
        self.base = base
        self.rank = rank
        if anchor is None:
            anchor = PolyMatrix(base.dim, base.dim, rank)
        if (anchor.rows, anchor.cols) != (base.dim, rank):
            raise ValueError("anchor shape mismatch")
        self.anchor = anchor

    @property
    def base_dim(self) -> int:
        return self.base.dim

    def frames(self):
        return [unit_section(self.base_dim, self.rank, i) for i in range(self.rank)]

    def anchor_field(self, q):
        """Vector-field components of the anchor applied to a section."""
        return self.anchor.apply(q)

    def anchor_apply(self, q, f: Polynomial) -> Polynomial:
        return field_apply(self.anchor_field(q), f)

    def anchor_pullback_d(self, f: Polynomial):
        """Dual-bundle section rho^* df: component i is rho(frame_i)(f)."""
        return [self.anchor_apply(unit_section(self.base_dim, self.rank, i), f)
                for i in range(self.rank)]


@dataclass
class BundleMap:
    """Bundle map over the identity on the base, as a matrix on frames."""

    source: AnchoredBundle
    target: AnchoredBundle
    matrix: PolyMatrix

    def __post_init__(self):
        if (self.matrix.rows, self.matrix.cols) != (self.target.rank, self.source.rank):
            raise ValueError("bundle map shape mismatch")

    def apply(self, u):
        return self.matrix.apply(u)


# ---------------------------------------------------------------------------
# connections


class LinearConnection:
    """Connection of an anchored bundle Q on an auxiliary module of rank r.

    gamma[i][j][k] is the k-th component of the covariant derivative of
    the j-th module frame along the i-th Q-frame.
    """

    def __init__(self, bundle: AnchoredBundle, module_rank: int, gamma=None):
        self.bundle = bundle
        self.module_rank = module_rank
        p = bundle.base_dim
        if gamma is None:
            gamma = [[[Polynomial.zero(p) for _ in range(module_rank)]
                      for _ in range(module_rank)] for _ in range(bundle.rank)]
        self.gamma = gamma

    def apply(self, q, s):
        p = self.bundle.base_dim
        out = zero_section(p, self.module_rank)
        for j in range(self.module_rank):
            out[j] = out[j] + self.bundle.anchor_apply(q, s[j])
        for i in range(self.bundle.rank):
            if q[i].is_zero():
                continue
            for j in range(self.module_rank):
                if s[j].is_zero():
                    continue
                coeff = q[i] * s[j]
                for k in range(self.module_rank):
                    out[k] = out[k] + coeff * self.gamma[i][j][k]
        return out

    def dual(self) -> "LinearConnection":
        """Dual connection on the dual module: gamma*[i][j][k] = -gamma[i][k][j]."""
        r = self.module_rank
        gamma = [[[-self.gamma[i][k][j] for k in range(r)] for j in range(r)]
                 for i in range(self.bundle.rank)]
        return LinearConnection(self.bundle, r, gamma)

    def shift(self, delta) -> "LinearConnection":
        """New connection with gamma + delta (same shape)."""
        r = self.module_rank
        gamma = [[[self.gamma[i][j][k] + delta[i][j][k] for k in range(r)]
                  for j in range(r)] for i in range(self.bundle.rank)]
        return LinearConnection(self.bundle, r, gamma)


class DorfmanConnection:
    """Dorfman connection of Q on Q*: anchored, Leibniz in the section slot,
    and Delta_{fq} tau = f Delta_q tau + <tau, q> rho^* df in the lower slot.

    comps[i][j][k] is the k-th component of Delta of the j-th dual frame
    along the i-th frame.
    """

    def __init__(self, bundle: AnchoredBundle, comps=None):
        self.bundle = bundle
        p = bundle.base_dim
        r = bundle.rank
        if comps is None:
            comps = [[[Polynomial.zero(p) for _ in range(r)] for _ in range(r)]
                     for _ in range(r)]
        self.comps = comps

    def apply(self, q, tau):
        p = self.bundle.base_dim
        r = self.bundle.rank
        out = zero_section(p, r)
        for j in range(r):
            out[j] = out[j] + self.bundle.anchor_apply(q, tau[j])
        for i in range(r):
            if q[i].is_zero():
                continue
            for j in range(r):
                if tau[j].is_zero():
                    continue
                coeff = q[i] * tau[j]
                for k in range(r):
                    out[k] = out[k] + coeff * self.comps[i][j][k]
        for j in range(r):
            if tau[j].is_zero():
                continue
            pull = self.bundle.anchor_pullback_d(q[j])
            for k in range(r):
                out[k] = out[k] + tau[j] * pull[k]
        return out

    def dual_dull_bracket(self) -> "DullBracket":
        r = self.bundle.rank
        comps = [[[-self.comps[i][k][j] for k in range(r)] for j in range(r)]
                 for i in range(r)]
        return DullBracket(self.bundle, comps)

    @classmethod
    def from_dull_bracket(cls, bracket: "DullBracket") -> "DorfmanConnection":
        r = bracket.bundle.rank
        comps = [[[-bracket.comps[i][k][j] for k in range(r)] for j in range(r)]
                 for i in range(r)]
        return cls(bracket.bundle, comps)


class DullBracket:
    """Anchored bracket on sections of Q, Leibniz in both slots.

    comps[i][j][k] is the k-th component of the bracket of frames i, j.
    """

    def __init__(self, bundle: AnchoredBundle, comps=None):
        self.bundle = bundle
        p = bundle.base_dim
        r = bundle.rank
        if comps is None:
            comps = [[[Polynomial.zero(p) for _ in range(r)] for _ in range(r)]
                     for _ in range(r)]
        self.comps = comps

    def apply(self, q1, q2):
        p = self.bundle.base_dim
        r = self.bundle.rank
        out = zero_section(p, r)
        for i in range(r):
            if q1[i].is_zero():
                continue
            for j in range(r):
                if q2[j].is_zero():
                    continue
                coeff = q1[i] * q2[j]
                for k in range(r):
                    out[k] = out[k] + coeff * self.comps[i][j][k]
        for j in range(r):
            out[j] = out[j] + self.bundle.anchor_apply(q1, q2[j]) \
                - self.bundle.anchor_apply(q2, q1[j])
        return out

    def is_skew(self) -> bool:
        r = self.bundle.rank
        return all((self.comps[i][j][k] + self.comps[j][i][k]).is_zero()
                   for i in range(r) for j in range(i, r) for k in range(r))


# ---------------------------------------------------------------------------
# derived operators


def apply_connection(conn: LinearConnection, q, s):
    return conn.apply(q, s)


def apply_dorfman(delta: DorfmanConnection, q, tau):
    return delta.apply(q, tau)


def connection_curvature(conn: LinearConnection, bracket: DullBracket, q1, q2, s):
    """R(q1, q2)s = nabla_q1 nabla_q2 s - nabla_q2 nabla_q1 s - nabla_[q1,q2] s."""
    return section_sub(
        section_sub(conn.apply(q1, conn.apply(q2, s)),
                    conn.apply(q2, conn.apply(q1, s))),
        conn.apply(bracket.apply(q1, q2), s))


def dorfman_curvature(delta: DorfmanConnection, bracket: DullBracket, q1, q2, tau):
    return section_sub(
        section_sub(delta.apply(q1, delta.apply(q2, tau)),
                    delta.apply(q2, delta.apply(q1, tau))),
        delta.apply(bracket.apply(q1, q2), tau))


def jacobiator(bracket: DullBracket, q1, q2, q3):
    """[[q1,q2],q3] + [q2,[q1,q3]] - [q1,[q2,q3]]."""
    return section_sub(
        section_add(bracket.apply(bracket.apply(q1, q2), q3),
                    bracket.apply(q2, bracket.apply(q1, q3))),
        bracket.apply(q1, bracket.apply(q2, q3)))


@dataclass
class VectorValuedForm:
    """Alternating form on Q with values in a rank-r module, by components."""

    bundle: AnchoredBundle
    arity: int
    value_rank: int
    tensor: PolyTensor

    @classmethod
    def empty(cls, bundle: AnchoredBundle, arity: int, value_rank: int):
        tensor = PolyTensor(bundle.base_dim,
                            [(bundle.rank, arity, True), (value_rank, 1, False)])
        return cls(bundle, arity, value_rank, tensor)

    def value(self, *idx):
        """Value section on frame arguments idx (length = arity)."""
        return [self.tensor.get(*idx, m) for m in range(self.value_rank)]

    def eval_sections(self, args):
        """Tensorial evaluation on section arguments."""
        p = self.bundle.base_dim
        out = zero_section(p, self.value_rank)
        for key in combinations(range(self.bundle.rank), self.arity):
            coeff = _alternating_coeff(args, key, p)
            if coeff.is_zero():
                continue
            for m in range(self.value_rank):
                out[m] = out[m] + coeff * self.tensor.get(*key, m)
        return out


def _alternating_coeff(args, key, base_dim):
    """det of the (arity x arity) matrix of chosen components of args."""
    n = len(key)
    mat = PolyMatrix(base_dim, n, n,
                     [[args[a][key[b]] for b in range(n)] for a in range(n)])
    return mat.determinant()


def form_cartan_differential(form: VectorValuedForm, conn: LinearConnection,
                             bracket: DullBracket, args):
    """Koszul differential of a module-valued form, on section arguments.

    (d omega)(a_1..a_{k+1}) = sum_i (-1)^{i+1} nabla_{a_i} omega(.. a_i ..)
      + sum_{i<j} (-1)^{i+j} omega([a_i,a_j], .. a_i .. a_j ..).
    """
    p = form.bundle.base_dim
    k = len(args)
    out = zero_section(p, form.value_rank)
    for i in range(k):
        rest = args[:i] + args[i + 1:]
        term = conn.apply(args[i], form.eval_sections(rest))
        out = section_add(out, term) if i % 2 == 0 else section_sub(out, term)
    for i in range(k):
        for j in range(i + 1, k):
            rest = [bracket.apply(args[i], args[j])] + \
                [args[m] for m in range(k) if m not in (i, j)]
            term = form.eval_sections(rest)
            # 1-based sign (-1)^{(i+1)+(j+1)} = (-1)^{i+j}
            out = section_add(out, term) if (i + j) % 2 == 0 else \
                section_sub(out, term)
    return out


# ---------------------------------------------------------------------------
# Lie algebroids and 2-term representations


@dataclass
class LieAlgebroidData:
    bundle: AnchoredBundle
    bracket: DullBracket

    def __post_init__(self):
        if self.bracket.bundle is not self.bundle:
            self.bracket.bundle = self.bundle


def _random_sections(rng, base_dim, rank, count=3, max_degree=2):
    return [random_section(rng, base_dim, rank, max_degree) for _ in range(count)]


def check_lie_algebroid(alg: LieAlgebroidData, seed: int = 0,
                        title: str = "lie algebroid") -> "CheckReport":
    from .report import CheckReport
    import random as _random

    rng = _random.Random(seed)
    report = CheckReport(title, seed)
    bundle = alg.bundle
    p = bundle.base_dim
    frames = bundle.frames()
    randoms = _random_sections(rng, p, bundle.rank)

    report.add("skew", alg.bracket.is_skew(),
               witness="frame components")

    sections = frames + randoms
    names = [f"q{i + 1}" for i in range(len(frames))] + \
        [f"r{i + 1}" for i in range(len(randoms))]
    for i in range(len(sections)):
        for j in range(i + 1, len(sections)):
            lhs = bundle.anchor_field(alg.bracket.apply(sections[i], sections[j]))
            rhs = field_bracket(bundle.anchor_field(sections[i]),
                                bundle.anchor_field(sections[j]))
            report.add_residual_section(
                "anchor_compat", section_sub(lhs, rhs),
                witness=f"({names[i]}, {names[j]})")

    for i in range(len(sections)):
        for j in range(i + 1, len(sections)):
            for k in range(j + 1, len(sections)):
                res = jacobiator(alg.bracket, sections[i], sections[j], sections[k])
                report.add_residual_section(
                    "jacobi", res,
                    witness=f"({names[i]}, {names[j]}, {names[k]})")
    return report


@dataclass
class TwoRepData:
    """2-term representation up to homotopy of a Lie algebroid A.

    The complex is partial: C -> B (matrix rank_b x rank_c); connB and
    connC are A-connections on B and C; curv holds R(a_i, a_j) as a
    Hom(B, C) block: curv indices (i, j, r, m) give the m-th C-component
    of R(a_i, a_j) applied to the r-th B-frame.
    """

    algebroid: LieAlgebroidData
    rank_b: int
    rank_c: int
    partial: PolyMatrix
    connB: LinearConnection
    connC: LinearConnection
    curv: PolyTensor

    @classmethod
    def curv_tensor(cls, base_dim, rank_a, rank_b, rank_c) -> PolyTensor:
        return PolyTensor(base_dim,
                          [(rank_a, 2, True), (rank_b, 1, False), (rank_c, 1, False)])

    def curv_matrix(self, a1, a2) -> PolyMatrix:
        """R(a1, a2) as a Hom(B, C) polynomial matrix (tensorial)."""
        p = self.algebroid.bundle.base_dim
        out = PolyMatrix(p, self.rank_c, self.rank_b)
        ra = self.algebroid.bundle.rank
        for i in range(ra):
            for j in range(i + 1, ra):
                coeff = a1[i] * a2[j] - a1[j] * a2[i]
                if coeff.is_zero():
                    continue
                for r in range(self.rank_b):
                    for m in range(self.rank_c):
                        entry = self.curv.get(i, j, r, m)
                        if not entry.is_zero():
                            out.data[m][r] = out.data[m][r] + coeff * entry
        return out

    def hom_derivative(self, a, phi: PolyMatrix) -> PolyMatrix:
        """nabla^Hom_a phi = connC_a . phi - phi . connB_a on a Hom(B,C) matrix."""
        p = self.algebroid.bundle.base_dim
        out = PolyMatrix(p, self.rank_c, self.rank_b)
        for r in range(self.rank_b):
            col = [phi.data[m][r] for m in range(self.rank_c)]
            term1 = self.connC.apply(a, col)
            br = unit_section(p, self.rank_b, r)
            term2 = phi.apply(self.connB.apply(a, br))
            for m in range(self.rank_c):
                out.data[m][r] = term1[m] - term2[m]
        return out


def check_two_rep(rep: TwoRepData, seed: int = 0,
                  title: str = "2-term representation") -> "CheckReport":
    from .report import CheckReport
    import random as _random

    rng = _random.Random(seed)
    report = CheckReport(title, seed)
    report.merge(check_lie_algebroid(rep.algebroid, seed), prefix="algebroid:")

    bundle = rep.algebroid.bundle
    bracket = rep.algebroid.bracket
    p = bundle.base_dim
    a_secs = bundle.frames() + _random_sections(rng, p, bundle.rank)
    c_secs = [unit_section(p, rep.rank_c, m) for m in range(rep.rank_c)] + \
        _random_sections(rng, p, rep.rank_c, count=1)
    b_secs = [unit_section(p, rep.rank_b, r) for r in range(rep.rank_b)] + \
        _random_sections(rng, p, rep.rank_b, count=1)

    for ia, a in enumerate(a_secs):
        for ic, c in enumerate(c_secs):
            lhs = rep.partial.apply(rep.connC.apply(a, c))
            rhs = rep.connB.apply(a, rep.partial.apply(c))
            report.add_residual_section(
                "chain_map", section_sub(lhs, rhs),
                witness=f"(a{ia + 1}, c{ic + 1})")

    for i in range(len(a_secs)):
        for j in range(i + 1, len(a_secs)):
            a1, a2 = a_secs[i], a_secs[j]
            rmat = rep.curv_matrix(a1, a2)
            for ic, c in enumerate(c_secs):
                lhs = connection_curvature(rep.connC, bracket, a1, a2, c)
                rhs = rmat.apply(rep.partial.apply(c))
                report.add_residual_section(
                    "curv_on_C", section_sub(lhs, rhs),
                    witness=f"(a{i + 1}, a{j + 1}, c{ic + 1})")
            for ib, b in enumerate(b_secs):
                lhs = connection_curvature(rep.connB, bracket, a1, a2, b)
                rhs = rep.partial.apply(rmat.apply(b))
                report.add_residual_section(
                    "curv_on_B", section_sub(lhs, rhs),
                    witness=f"(a{i + 1}, a{j + 1}, b{ib + 1})")

    for i in range(len(a_secs)):
        for j in range(i + 1, len(a_secs)):
            for k in range(j + 1, len(a_secs)):
                res = _two_rep_dR(rep, a_secs[i], a_secs[j], a_secs[k])
                report.add_residual_section(
                    "dR_zero", _flatten_matrix(res),
                    witness=f"(a{i + 1}, a{j + 1}, a{k + 1})")
    return report


def _flatten_matrix(mat: PolyMatrix):
    return [mat.data[i][j] for i in range(mat.rows) for j in range(mat.cols)]


def _two_rep_dR(rep: TwoRepData, a1, a2, a3) -> PolyMatrix:
    """(d_{nabla^Hom} R)(a1, a2, a3) as a Hom(B, C) matrix."""
    bracket = rep.algebroid.bracket
    p = rep.algebroid.bundle.base_dim
    out = PolyMatrix(p, rep.rank_c, rep.rank_b)
    args = [a1, a2, a3]
    for i in range(3):
        rest = [args[m] for m in range(3) if m != i]
        term = rep.hom_derivative(args[i], rep.curv_matrix(*rest))
        out = out.add(term if i % 2 == 0 else term.scale(-1))
    for i in range(3):
        for j in range(i + 1, 3):
            k = 3 - i - j
            term = rep.curv_matrix(bracket.apply(args[i], args[j]), args[k])
            out = out.add(term if (i + j) % 2 == 0 else term.scale(-1))
    return out


def dualize_two_rep(rep: TwoRepData) -> TwoRepData:
    """Dual 2-term representation on partial^T : B* -> C*."""
    p = rep.algebroid.bundle.base_dim
    ra = rep.algebroid.bundle.rank
    curv = TwoRepData.curv_tensor(p, ra, rep.rank_c, rep.rank_b)
    for i in range(ra):
        for j in range(i + 1, ra):
            for m in range(rep.rank_c):
                for r in range(rep.rank_b):
                    entry = rep.curv.get(i, j, r, m)
                    if not entry.is_zero():
                        # new R(a_i, a_j): C* -> B*, minus the transpose
                        curv.set((i, j, m, r), -entry)
    return TwoRepData(
        algebroid=rep.algebroid,
        rank_b=rep.rank_c,
        rank_c=rep.rank_b,
        partial=rep.partial.transpose(),
        connB=rep.connC.dual(),
        connC=rep.connB.dual(),
        curv=curv,
    )
