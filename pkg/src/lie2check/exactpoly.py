"""Exact arithmetic kernel: rationals, multivariate polynomials, tensors.

Every structure function in this package is a polynomial over the
rationals in the base coordinates x_1..x_p.  Zero-testing is structural:
a polynomial is zero exactly when it stores no terms.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def rational(value) -> Fraction:
    """Coerce ints, strings like "a/b", and Fractions to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def format_rational(value: Fraction) -> str:
    return str(value)


class Polynomial:
    """Multivariate polynomial over the rationals with dense exponent tuples.

    Terms map an exponent tuple of length ``base_dim`` to a nonzero
    Fraction.  base_dim 0 is legal and leaves room for constants only.
    Instances are immutable; all operations return new values.
    """

    __slots__ = ("base_dim", "terms")

    def __init__(self, base_dim: int, terms=None):
        self.base_dim = base_dim
        clean = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(exps)
                if len(exps) != base_dim:
                    raise ValueError("exponent tuple has wrong length")
                coeff = rational(coeff)
                if coeff != 0:
                    clean[exps] = coeff
        self.terms = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, base_dim: int) -> "Polynomial":
        return cls(base_dim)

    @classmethod
    def const(cls, base_dim: int, value) -> "Polynomial":
        value = rational(value)
        if value == 0:
            return cls(base_dim)
        return cls(base_dim, {(0,) * base_dim: value})

    @classmethod
    def variable(cls, base_dim: int, index: int) -> "Polynomial":
        if not 0 <= index < base_dim:
            raise IndexError("coordinate index out of range")
        exps = tuple(1 if i == index else 0 for i in range(base_dim))
        return cls(base_dim, {exps: Fraction(1)})

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.base_dim, Fraction(0))

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(exps) for exps in self.terms)

    # -- ring operations ----------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.base_dim != other.base_dim:
            raise ValueError("base dimension mismatch")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            total = terms.get(exps, Fraction(0)) + coeff
            if total == 0:
                terms.pop(exps, None)
            else:
                terms[exps] = total
        return Polynomial(self.base_dim, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.base_dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                total = terms.get(exps, Fraction(0)) + c1 * c2
                if total == 0:
                    terms.pop(exps, None)
                else:
                    terms[exps] = total
        return Polynomial(self.base_dim, terms)

    def __rmul__(self, other) -> "Polynomial":
        return self.__mul__(other)

    def scale(self, value) -> "Polynomial":
        value = rational(value)
        if value == 0:
            return Polynomial(self.base_dim)
        return Polynomial(self.base_dim, {e: c * value for e, c in self.terms.items()})

    def diff(self, index: int) -> "Polynomial":
        if not 0 <= index < self.base_dim:
            raise IndexError("coordinate index out of range")
        terms: dict = {}
        for exps, coeff in self.terms.items():
            e = exps[index]
            if e == 0:
                continue
            new = list(exps)
            new[index] = e - 1
            terms[tuple(new)] = coeff * e
        return Polynomial(self.base_dim, terms)

    # -- comparison / rendering ---------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Polynomial.const(self.base_dim, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.base_dim == other.base_dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.base_dim, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({self.render()})"

    def render(self, names=None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.base_dim)]
        pieces = []
        for exps in sorted(self.terms, key=lambda e: (sum(e), e)):
            coeff = self.terms[exps]
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            if body and coeff == 1:
                pieces.append(body)
            elif body and coeff == -1:
                pieces.append(f"-{body}")
            elif body:
                pieces.append(f"{coeff}*{body}")
            else:
                pieces.append(str(coeff))
        out = pieces[0]
        for piece in pieces[1:]:
            out += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return out

    # -- serialization -------------------------------------------------
    def to_json(self):
        items = sorted(self.terms.items())
        return [{"coeff": format_rational(c), "exps": list(e)} for e, c in items]

    @classmethod
    def from_json(cls, base_dim: int, data) -> "Polynomial":
        terms = {}
        for item in data:
            if set(item) != {"coeff", "exps"}:
                raise ValueError("polynomial term must have exactly coeff and exps")
            exps = tuple(int(e) for e in item["exps"])
            coeff = rational(item["coeff"])
            if exps in terms:
                raise ValueError("duplicate exponent tuple")
            terms[exps] = coeff
        return cls(base_dim, terms)


def poly_arith(a: Polynomial, b, op: str, scalar=None) -> Polynomial:
    """Dispatch add/mul/scale on polynomials; used by the JSON front end."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(scalar)
    raise ValueError(f"unknown polynomial operation: {op}")


def poly_diff(f: Polynomial, index: int) -> Polynomial:
    return f.diff(index)


def random_polynomial(rng, base_dim: int, max_degree: int = 2) -> Polynomial:
    """Small random polynomial with integer coefficients in [-3, 3]."""
    exps_pool = [()] if base_dim == 0 else None
    if exps_pool is None:
        exps_pool = []

        def walk(prefix, budget):
            if len(prefix) == base_dim:
                exps_pool.append(tuple(prefix))
                return
            for e in range(budget + 1):
                walk(prefix + [e], budget - e)

        walk([], max_degree)
    terms = {}
    for exps in exps_pool:
        coeff = rng.randint(-3, 3)
        if coeff:
            terms[exps] = Fraction(coeff)
    return Polynomial(base_dim, terms)


def _perm_sign_and_sort(indices):
    """Sort index list, returning (sign, sorted tuple); sign 0 on repeats."""
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(idx)):
        if idx[i - 1] == idx[i]:
            return 0, tuple(idx)
    return sign, tuple(idx)


class PolyTensor:
    """Tensor of polynomials with per-index-group antisymmetry.

    ``groups`` is a sequence of (dim, arity, antisym) triples; the full
    index tuple concatenates one block per group.  Antisymmetric blocks
    are stored only on strictly increasing tuples; permuted reads return
    the signed entry and repeated indices read zero.
    """

    __slots__ = ("base_dim", "groups", "entries")

    def __init__(self, base_dim: int, groups):
        self.base_dim = base_dim
        self.groups = tuple((int(d), int(a), bool(s)) for d, a, s in groups)
        self.entries: dict = {}

    def _canonical(self, idx):
        idx = tuple(idx)
        expected = sum(a for _, a, _ in self.groups)
        if len(idx) != expected:
            raise ValueError("index tuple has wrong length")
        sign = 1
        key = []
        pos = 0
        for dim, arity, antisym in self.groups:
            block = idx[pos:pos + arity]
            pos += arity
            for i in block:
                if not 0 <= i < dim:
                    raise IndexError("tensor index out of range")
            if antisym:
                s, block = _perm_sign_and_sort(block)
                if s == 0:
                    return 0, None
                sign *= s
            key.extend(block)
        return sign, tuple(key)

    def get(self, *idx) -> Polynomial:
        sign, key = self._canonical(idx)
        if sign == 0 or key not in self.entries:
            return Polynomial.zero(self.base_dim)
        entry = self.entries[key]
        return entry if sign == 1 else -entry

    def set(self, idx, value: Polynomial):
        sign, key = self._canonical(idx)
        if sign == 0:
            if not value.is_zero():
                raise ValueError("repeated antisymmetric index must be zero")
            return
        if value.is_zero():
            self.entries.pop(key, None)
        else:
            self.entries[key] = value if sign == 1 else -value

    def add_to(self, idx, value: Polynomial):
        self.set(idx, self.get(*idx) + value)

    def is_zero(self) -> bool:
        return not self.entries

    def canonical_keys(self):
        """All canonical index tuples (strictly increasing in antisym blocks)."""
        blocks = []
        for dim, arity, antisym in self.groups:
            if antisym:
                blocks.append([tuple(c) for c in combinations(range(dim), arity)])
            else:
                block = [()]
                for _ in range(arity):
                    block = [b + (i,) for b in block for i in range(dim)]
                blocks.append(block)
        keys = [()]
        for block in blocks:
            keys = [k + b for k in keys for b in block]
        return keys

    def __eq__(self, other):
        if not isinstance(other, PolyTensor):
            return NotImplemented
        return (self.base_dim == other.base_dim and self.groups == other.groups
                and self.entries == other.entries)

    def copy(self) -> "PolyTensor":
        out = PolyTensor(self.base_dim, self.groups)
        out.entries = dict(self.entries)
        return out

    def to_json(self):
        items = sorted(self.entries.items())
        return [{"idx": list(k), "val": v.to_json()} for k, v in items]

    @classmethod
    def from_json(cls, base_dim: int, groups, data) -> "PolyTensor":
        out = cls(base_dim, groups)
        for item in data:
            if set(item) != {"idx", "val"}:
                raise ValueError("tensor entry must have exactly idx and val")
            out.set(tuple(item["idx"]), Polynomial.from_json(base_dim, item["val"]))
        return out


class PolyMatrix:
    """Dense matrix of polynomials (rows x cols)."""

    __slots__ = ("base_dim", "rows", "cols", "data")

    def __init__(self, base_dim: int, rows: int, cols: int, data=None):
        self.base_dim = base_dim
        self.rows = rows
        self.cols = cols
        if data is None:
            self.data = [[Polynomial.zero(base_dim) for _ in range(cols)]
                         for _ in range(rows)]
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError("matrix shape mismatch")
            self.data = [list(r) for r in data]

    @classmethod
    def identity(cls, base_dim: int, n: int) -> "PolyMatrix":
        out = cls(base_dim, n, n)
        for i in range(n):
            out.data[i][i] = Polynomial.const(base_dim, 1)
        return out

    @classmethod
    def from_rationals(cls, base_dim: int, data) -> "PolyMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        out = cls(base_dim, rows, cols)
        for i, row in enumerate(data):
            for j, value in enumerate(row):
                out.data[i][j] = Polynomial.const(base_dim, rational(value))
        return out

    def __getitem__(self, key):
        i, j = key
        return self.data[i][j]

    def __setitem__(self, key, value: Polynomial):
        i, j = key
        self.data[i][j] = value

    def apply(self, vec):
        """Matrix times a coefficient vector of polynomials."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = []
        for i in range(self.rows):
            acc = Polynomial.zero(self.base_dim)
            for j in range(self.cols):
                acc = acc + self.data[i][j] * vec[j]
            out.append(acc)
        return out

    def matmul(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("matrix shape mismatch")
        out = PolyMatrix(self.base_dim, self.rows, other.cols)
        for i in range(self.rows):
            for k in range(other.cols):
                acc = Polynomial.zero(self.base_dim)
                for j in range(self.cols):
                    acc = acc + self.data[i][j] * other.data[j][k]
                out.data[i][k] = acc
        return out

    def transpose(self) -> "PolyMatrix":
        out = PolyMatrix(self.base_dim, self.cols, self.rows)
        for i in range(self.rows):
            for j in range(self.cols):
                out.data[j][i] = self.data[i][j]
        return out

    def add(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("matrix shape mismatch")
        out = PolyMatrix(self.base_dim, self.rows, self.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                out.data[i][j] = self.data[i][j] + other.data[i][j]
        return out

    def scale(self, value) -> "PolyMatrix":
        out = PolyMatrix(self.base_dim, self.rows, self.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                out.data[i][j] = self.data[i][j].scale(value)
        return out

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.data for e in row)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and \
            all(self.data[i][j] == other.data[i][j]
                for i in range(self.rows) for j in range(self.cols))

    def determinant(self) -> Polynomial:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return Polynomial.const(self.base_dim, 1)
        # cofactor expansion; matrices here are small (rank <= 6)
        if n == 1:
            return self.data[0][0]
        acc = Polynomial.zero(self.base_dim)
        for j in range(n):
            minor = PolyMatrix(self.base_dim, n - 1, n - 1,
                               [[self.data[i][k] for k in range(n) if k != j]
                                for i in range(1, n)])
            term = self.data[0][j] * minor.determinant()
            acc = acc + (term if j % 2 == 0 else -term)
        return acc

    def inverse_constant(self) -> "PolyMatrix":
        """Exact inverse; requires a nonzero constant determinant."""
        det = self.determinant()
        if not det.is_constant() or det.constant_value() == 0:
            raise ValueError("matrix is not invertible over the polynomial ring")
        n = self.rows
        inv_det = Fraction(1) / det.constant_value()
        out = PolyMatrix(self.base_dim, n, n)
        for i in range(n):
            for j in range(n):
                minor = PolyMatrix(self.base_dim, n - 1, n - 1,
                                   [[self.data[r][c] for c in range(n) if c != i]
                                    for r in range(n) if r != j])
                cof = minor.determinant()
                if (i + j) % 2 == 1:
                    cof = -cof
                out.data[i][j] = cof.scale(inv_det)
        return out

    def to_json(self):
        return [[e.to_json() for e in row] for row in self.data]

    @classmethod
    def from_json(cls, base_dim: int, rows: int, cols: int, data) -> "PolyMatrix":
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("matrix shape mismatch")
        out = cls(base_dim, rows, cols)
        for i in range(rows):
            for j in range(cols):
                out.data[i][j] = Polynomial.from_json(base_dim, data[i][j])
        return out
