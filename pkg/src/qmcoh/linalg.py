"""Exact dense linear algebra over the rationals and small prime
fields, organized around subspace-lattice work: spans, intersections,
preimages and quotient coordinates.

Vectors are opaque to callers; every operation goes through a
``VectorOps`` backend. The generic backend stores tuples of field
elements, the GF(2) backend stores bit-packed ints (bit i = coordinate
i), which is what makes the larger finite-group complexes tractable.
Subspace bases are plain lists of vectors and never assumed reduced
unless a function says so.
"""

from __future__ import annotations

from fractions import Fraction


class PrimeField:
    """Arithmetic mod p; elements are plain ints in [0, p)."""

    def __init__(self, p: int):
        if p < 2 or any(p % k == 0 for k in range(2, p)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1

    def of(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return (x.numerator * self.inv(x.denominator % self.p)) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverting 0")
        return pow(a, self.p - 2, self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))


class RationalField:
    """Fraction arithmetic behind the same protocol."""

    p = None
    zero = Fraction(0)
    one = Fraction(1)

    def of(self, x) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverting 0")
        return 1 / Fraction(a)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rationals")


QQ = RationalField()
GF2 = PrimeField(2)

FIELDS = {"Q": QQ, "F2": GF2, "F3": PrimeField(3), "F5": PrimeField(5),
          "F7": PrimeField(7)}


def field_name(field) -> str:
    return "Q" if field.p is None else f"F{field.p}"


class _Gf2Echelon:
    """Row echelon over GF(2); rows and coefficient combos are ints."""

    def __init__(self):
        self.rows: dict = {}  # pivot bit -> (vector, combo)
        self.count = 0  # vectors offered so far (width of combos)

    @property
    def rank(self):
        return len(self.rows)

    def _reduce(self, v: int):
        combo = 0
        rows = self.rows
        while v:
            pivot = v.bit_length() - 1
            hit = rows.get(pivot)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        return v, combo

    def reduce(self, v: int):
        """(residual, coeffs) with v = sum coeffs_i . offered_i + residual."""
        res, combo = self._reduce(v)
        return res, [(combo >> i) & 1 for i in range(self.count)]

    def add(self, v: int) -> bool:
        """Offer a vector; True when it enlarged the span."""
        res, combo = self._reduce(v)
        mine = 1 << self.count
        self.count += 1
        if res == 0:
            return False
        self.rows[res.bit_length() - 1] = (res, combo | mine)
        return True


class _FieldEchelon:
    """Row echelon over a generic field; vectors are tuples."""

    def __init__(self, field):
        self.field = field
        self.rows: dict = {}  # pivot index -> (vector list, combo dict)
        self.count = 0

    @property
    def rank(self):
        return len(self.rows)

    def _reduce(self, v):
        F = self.field
        v = list(v)
        combo: dict = {}
        i = 0
        n = len(v)
        while i < n:
            if v[i] == F.zero:
                i += 1
                continue
            hit = self.rows.get(i)
            if hit is None:
                break
            c = v[i]
            vec, vcombo = hit
            for j in range(i, n):
                v[j] = F.sub(v[j], F.mul(c, vec[j]))
            for k, a in vcombo.items():
                combo[k] = F.add(combo.get(k, F.zero), F.mul(c, a))
            i += 1
        return v, combo, i

    def reduce(self, v):
        res, combo, lead = self._reduce(v)
        out = [combo.get(i, self.field.zero) for i in range(self.count)]
        if lead >= len(res):
            res = None  # fully reduced to zero
        return res, out

    def add(self, v) -> bool:
        F = self.field
        res, combo, lead = self._reduce(v)
        mine = self.count
        self.count += 1
        if lead >= len(res):
            return False
        inv = F.inv(res[lead])
        vec = [F.mul(inv, x) for x in res]
        combo = {k: F.neg(F.mul(inv, a)) for k, a in combo.items()}
        combo[mine] = inv
        self.rows[lead] = (vec, combo)
        return True


class Gf2Ops:
    """Bit-packed vectors over GF(2)."""

    def __init__(self, width: int):
        self.field = GF2
        self.width = width
        self.zero_vec = 0

    def from_entries(self, entries):
        v = 0
        for i, x in enumerate(entries):
            if int(x) % 2:
                v |= 1 << i
        return v

    def entries(self, v):
        return [(v >> i) & 1 for i in range(self.width)]

    def from_sparse(self, coords: dict):
        v = 0
        for i, x in coords.items():
            if int(x) % 2:
                v |= 1 << i
        return v

    def basis_vector(self, i):
        return 1 << i

    def add(self, u, v):
        return u ^ v

    def scale(self, a, v):
        return v if int(a) % 2 else 0

    def is_zero(self, v):
        return v == 0

    def combine(self, coeffs, vectors):
        acc = 0
        for a, v in zip(coeffs, vectors):
            if int(a) % 2:
                acc ^= v
        return acc

    def mask(self, indices):
        m = 0
        for i in indices:
            m |= 1 << i
        return m

    def outside(self, v, mask):
        """The part of v supported off the masked coordinates."""
        return v & ~mask

    def echelon(self):
        return _Gf2Echelon()


class FieldOps:
    """Tuple vectors over an arbitrary exact field."""

    def __init__(self, field, width: int):
        self.field = field
        self.width = width
        self.zero_vec = (field.zero,) * width

    def from_entries(self, entries):
        out = list(self.zero_vec)
        for i, x in enumerate(entries):
            out[i] = self.field.of(x)
        return tuple(out)

    def entries(self, v):
        return list(v)

    def from_sparse(self, coords: dict):
        out = list(self.zero_vec)
        for i, x in coords.items():
            out[i] = self.field.of(x)
        return tuple(out)

    def basis_vector(self, i):
        out = list(self.zero_vec)
        out[i] = self.field.one
        return tuple(out)

    def add(self, u, v):
        F = self.field
        return tuple(F.add(a, b) for a, b in zip(u, v))

    def scale(self, a, v):
        F = self.field
        a = F.of(a)
        return tuple(F.mul(a, x) for x in v)

    def is_zero(self, v):
        z = self.field.zero
        return all(x == z for x in v)

    def combine(self, coeffs, vectors):
        acc = list(self.zero_vec)
        F = self.field
        for a, v in zip(coeffs, vectors):
            if a == F.zero:
                continue
            for i, x in enumerate(v):
                acc[i] = F.add(acc[i], F.mul(a, x))
        return tuple(acc)

    def mask(self, indices):
        return frozenset(indices)

    def outside(self, v, mask):
        z = self.field.zero
        return tuple(z if i in mask else x for i, x in enumerate(v))

    def echelon(self):
        return _FieldEchelon(self.field)


def vector_ops(field, width: int):
    if field.p == 2:
        return Gf2Ops(width)
    return FieldOps(field, width)


# ------------------------------------------------------- subspace algebra


def span_reduce(ops, vectors):
    """An independent subset of the input spanning the same space,
    keeping the original vectors (first occurrence wins)."""
    ech = ops.echelon()
    return [v for v in vectors if ech.add(v)]


def rank_of(ops, vectors) -> int:
    ech = ops.echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def relations(ops, vectors):
    """Basis of {a : sum a_i vectors_i = 0} as coefficient lists."""
    F = ops.field
    ech = ops.echelon()
    out = []
    for idx, v in enumerate(vectors):
        if not ech.add(v):
            _, coeffs = ech.reduce(v)
            rel = list(coeffs[:idx]) + [F.neg(F.one)]
            rel += [F.zero] * (len(vectors) - idx - 1)
            out.append(rel)
            # re-offer so later combos keep one slot per input vector
    return out


def solve_coords(ops, basis, v):
    """Coefficients expressing v over basis, or None. The basis must be
    independent for the answer to be canonical."""
    ech = ops.echelon()
    for b in basis:
        ech.add(b)
    res, coeffs = ech.reduce(v)
    if res is not None and not ops.is_zero(res):
        return None
    return list(coeffs[:len(basis)])


def in_span(ops, basis, v) -> bool:
    return solve_coords(ops, basis, v) is not None


def subspace_sum(ops, *parts):
    merged = []
    for part in parts:
        merged.extend(part)
    return span_reduce(ops, merged)


def intersect(ops, U, V):
    """Basis of span(U) & span(V)."""
    rels = relations(ops, list(U) + list(V))
    got = [ops.combine(rel[:len(U)], U) for rel in rels]
    return span_reduce(ops, got)


def vectors_into_span(ops, vectors, W):
    """{a : sum a_i vectors_i lands in span W} as coefficient lists."""
    k = len(vectors)
    rels = relations(ops, list(vectors) + list(W))
    return [rel[:k] for rel in rels]


def vectors_into_coordspan(ops, vectors, mask):
    """Same, for the coordinate subspace spanned by the masked axes."""
    outside = [ops.outside(v, mask) for v in vectors]
    return relations(ops, outside)


def complement_in(ops, D, Z):
    """Vectors of Z extending a basis of span(D) to span(D)+span(Z);
    their classes form a basis of the quotient."""
    ech = ops.echelon()
    for v in D:
        ech.add(v)
    return [z for z in Z if ech.add(z)]


def matrix_rank(field, columns, height: int) -> int:
    """Rank of a small coefficient matrix given by columns (lists)."""
    ops = vector_ops(field, height)
    return rank_of(ops, [ops.from_entries(col) for col in columns])


def matmul(field, a_cols, b_cols, height: int):
    """Columns of A.B when A is given by columns of length ``height``
    and B by columns of coefficients over A's column count."""
    out = []
    for bcol in b_cols:
        acc = [field.zero] * height
        for coeff, acol in zip(bcol, a_cols):
            if coeff == field.zero:
                continue
            for i, x in enumerate(acol):
                acc[i] = field.add(acc[i], field.mul(field.of(coeff), x))
        out.append(acc)
    return out
