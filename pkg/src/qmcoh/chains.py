"""Finite-support chains in the bar complexes of a group model.

Two complexes live here. The inhomogeneous one (class ``Chain``) is
normalized with trivial coefficients: basis tuples [g1|...|gn], tuples
containing the identity are zero, and the degree-1 boundary vanishes. A
chain may carry a *tail*: the l1 mass of series terms that were cut off,
recorded symbolically when the cut series is one of the power series
produced by ``m_chain`` (each discarded term is a same-base power pair,
which is what makes certified zero-error pairings possible downstream).

The homogeneous one (class ``HomogeneousChain``) uses (n+1)-tuples, is
*not* normalized, and has the standard contracting homotopy that
prepends the identity.

Entries of free-group chains may be symbolic powers (``words.Pow``); the
boundary multiplies same-base powers without expanding them.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from . import words
from .errors import ResourceCapExceeded
from .groups import FreeGroup, Group
from .words import Pow


class MSeriesTail(NamedTuple):
    """The cut-off part of a power series chain: coeff times the terms
    2^-n [base^(2^(n-1)) | base^(2^(n-1))] for all n > cutoff. Its l1
    mass is |coeff| * 2^-cutoff."""

    base: object
    cutoff: int
    coeff: Fraction

    @property
    def mass(self) -> Fraction:
        return abs(self.coeff) * Fraction(1, 2**self.cutoff)


def _canon_entry(group: Group, x):
    # Free-word entries are keyed by primitive root so that equal
    # elements always share a dict key, whatever path produced them.
    if isinstance(x, Pow):
        return words.pow_entry(x.base, x.exp)
    if isinstance(group, FreeGroup) and x != ():
        return words.pow_entry(x, 1)
    return x


def _entry_mul(group: Group, x, y):
    if isinstance(group, FreeGroup):
        return words.entry_mul(x, y)
    return group.mul(x, y)


class Chain:
    """Finite rational combination of bar tuples plus tail metadata.

    Equality compares group, degree and support; the tail fields are
    truncation bookkeeping, not part of the chain's value.
    """

    __slots__ = ("group", "degree", "support", "tails", "tail_bound")

    def __init__(self, group: Group, degree: int, items=(), tails=(),
                 tail_bound=None):
        if degree < 0:
            raise ValueError("degree must be >= 0")
        self.group = group
        self.degree = degree
        e = group.identity
        support: dict = {}
        pairs = items.items() if isinstance(items, dict) else items
        for t, coeff in pairs:
            t = tuple(_canon_entry(group, x) for x in t)
            if len(t) != degree:
                raise ValueError(f"tuple {t!r} has wrong length for degree {degree}")
            if any(x == e for x in t):
                continue  # normalized complex: degenerate tuples vanish
            coeff = Fraction(coeff)
            acc = support.get(t, 0) + coeff
            if acc == 0:
                support.pop(t, None)
            else:
                support[t] = acc
        self.support = support
        self.tails = tuple(tails)
        if tail_bound is None:
            tail_bound = sum((t.mass for t in self.tails), Fraction(0))
        self.tail_bound = Fraction(tail_bound)

    @classmethod
    def zero(cls, group: Group, degree: int) -> "Chain":
        return cls(group, degree)

    @classmethod
    def basis(cls, group: Group, *entries) -> "Chain":
        return cls(group, len(entries), [(tuple(entries), Fraction(1))])

    def norm1(self) -> Fraction:
        """l1 mass of the stored support (the tail is not included)."""
        return sum((abs(c) for c in self.support.values()), Fraction(0))

    def norm1_total(self) -> Fraction:
        return self.norm1() + self.tail_bound

    def scale(self, a) -> "Chain":
        a = Fraction(a)
        return Chain(
            self.group, self.degree,
            [(t, a * c) for t, c in self.support.items()],
            tails=tuple(t._replace(coeff=a * t.coeff) for t in self.tails),
            tail_bound=abs(a) * self.tail_bound,
        )

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other: "Chain") -> "Chain":
        if self.group is not other.group or self.degree != other.degree:
            raise ValueError("chain mismatch")
        items = dict(self.support)
        for t, c in other.support.items():
            acc = items.get(t, 0) + c
            if acc == 0:
                items.pop(t, None)
            else:
                items[t] = acc
        return Chain(
            self.group, self.degree, items,
            tails=self.tails + other.tails,
            tail_bound=self.tail_bound + other.tail_bound,
        )

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return (
            isinstance(other, Chain)
            and self.group is other.group
            and self.degree == other.degree
            and self.support == other.support
        )

    def __hash__(self):
        return hash((id(self.group), self.degree, frozenset(self.support.items())))

    def __repr__(self):
        n = len(self.support)
        return f"Chain(deg={self.degree}, terms={n}, tail={self.tail_bound})"


def boundary(z: Chain) -> Chain:
    """Bar boundary; the tail bound propagates multiplied by (n+1).

    In degree 1 the two outer terms cancel (trivial coefficients), so
    the result is the zero chain of degree 0.
    """
    n = z.degree
    if n < 1:
        raise ValueError("boundary needs degree >= 1")
    group = z.group
    items: list = []
    for t, c in z.support.items():
        items.append((t[1:], c))
        sign = 1
        for i in range(n - 1):
            sign = -sign
            merged = t[:i] + (_entry_mul(group, t[i], t[i + 1]),) + t[i + 2:]
            items.append((merged, sign * c))
        items.append((t[:-1], c if n % 2 == 0 else -c))
    return Chain(
        group, n - 1, items,
        tails=(),
        tail_bound=(n + 1) * z.tail_bound,
    )


def m_chain(group: Group, g, N: int) -> Chain:
    """Truncated telescoping power series for g in degree 2.

    Sum over n = 1..N of 2^-n [g^(2^(n-1)) | g^(2^(n-1))], with the cut
    tail recorded symbolically (l1 mass exactly 2^-N). The boundary of
    the full series telescopes; at cutoff N it equals [g] - 2^-N [g^(2^N)].

    For the identity every term is degenerate, so the chain (tail
    included) is exactly zero in the normalized complex.
    """
    if not 1 <= N <= 16:
        raise ResourceCapExceeded(f"cutoff N={N} outside 1..16")
    if g == group.identity:
        return Chain.zero(group, 2)
    symbolic = isinstance(group, FreeGroup)
    items = []
    for n in range(1, N + 1):
        k = 2 ** (n - 1)
        p = words.pow_entry(g, k) if symbolic else group.power(g, k)
        items.append(((p, p), Fraction(1, 2**n)))
    return Chain(
        group, 2, items,
        tails=(MSeriesTail(g, N, Fraction(1)),),
    )


def m2_chain(group: Group, g, h, N: int) -> Chain:
    """[g|h] - m(g) + m(gh) - m(h); support norm at most 4, tail mass at
    most 3 * 2^-N."""
    gh = group.mul(g, h)
    lead = Chain(group, 2, [((g, h), Fraction(1))])
    return lead - m_chain(group, g, N) + m_chain(group, gh, N) \
        - m_chain(group, h, N)


def pushforward(aut, z: Chain) -> Chain:
    """Apply a homomorphism entrywise; symbolic powers map base-wise
    (images of powers are powers of images)."""
    def fwd(x):
        if isinstance(x, Pow):
            return words.pow_entry(aut(x.base), x.exp)
        return aut(x)

    return Chain(
        z.group, z.degree,
        [(tuple(fwd(x) for x in t), c) for t, c in z.support.items()],
        tails=tuple(t._replace(base=aut(t.base)) for t in z.tails),
        tail_bound=z.tail_bound,
    )


class HomogeneousChain:
    """Rational combination of (n+1)-tuples; not normalized."""

    __slots__ = ("group", "degree", "support")

    def __init__(self, group: Group, degree: int, items=()):
        if degree < 0:
            raise ValueError("degree must be >= 0")
        self.group = group
        self.degree = degree
        support: dict = {}
        pairs = items.items() if isinstance(items, dict) else items
        for t, coeff in pairs:
            t = tuple(t)
            if len(t) != degree + 1:
                raise ValueError(
                    f"degree-{degree} tuples have {degree + 1} components"
                )
            coeff = Fraction(coeff)
            acc = support.get(t, 0) + coeff
            if acc == 0:
                support.pop(t, None)
            else:
                support[t] = acc
        self.support = support

    def __add__(self, other):
        if self.group is not other.group or self.degree != other.degree:
            raise ValueError("chain mismatch")
        items = dict(self.support)
        for t, c in other.support.items():
            acc = items.get(t, 0) + c
            if acc == 0:
                items.pop(t, None)
            else:
                items[t] = acc
        return HomogeneousChain(self.group, self.degree, items)

    def scale(self, a):
        a = Fraction(a)
        return HomogeneousChain(
            self.group, self.degree,
            [(t, a * c) for t, c in self.support.items()],
        )

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return (
            isinstance(other, HomogeneousChain)
            and self.group is other.group
            and self.degree == other.degree
            and self.support == other.support
        )

    def __hash__(self):
        return hash((id(self.group), self.degree,
                     frozenset(self.support.items())))

    def __repr__(self):
        return f"HomogeneousChain(deg={self.degree}, terms={len(self.support)})"


def homogeneous_boundary(z: HomogeneousChain) -> HomogeneousChain:
    """Alternating sum over dropped components; degenerate tuples are
    kept (this complex is not normalized)."""
    if z.degree < 1:
        raise ValueError("boundary needs degree >= 1")
    items = []
    for t, c in z.support.items():
        sign = 1
        for i in range(len(t)):
            items.append((t[:i] + t[i + 1:], sign * c))
            sign = -sign
    return HomogeneousChain(z.group, z.degree - 1, items)


def contracting_homotopy(z: HomogeneousChain) -> HomogeneousChain:
    """Prepend the identity: s(x0,...,xn) = (e,x0,...,xn); satisfies
    s d + d s = id in positive degrees."""
    e = z.group.identity
    return HomogeneousChain(
        z.group, z.degree + 1,
        [((e,) + t, c) for t, c in z.support.items()],
    )


def format_element(group: Group, x) -> object:
    """JSON-friendly form of a chain entry component, dispatched on the
    group model (free words as text, finite elements as ints, twisted
    pairs as two-element lists)."""
    from .groups import TwistedProduct

    if isinstance(x, Pow):
        return f"({format_element(group, x.base)})^{x.exp}"
    if isinstance(group, TwistedProduct):
        return [
            format_element(group.base, x[0]),
            format_element(group.fiber, x[1]),
        ]
    if isinstance(group, FreeGroup):
        return words.fmt(x)
    return x


def chain_to_json(z: Chain) -> dict:
    """Dump format: entry list plus tail metadata."""
    entries = []
    for t, c in z.support.items():
        entries.append({
            "tuple": [format_element(z.group, x) for x in t],
            "coeff": str(c),
        })
    entries.sort(key=lambda e: (str(e["tuple"]), e["coeff"]))
    out = {
        "degree": z.degree,
        "entries": entries,
        "tail_bound": str(z.tail_bound),
        "tail_kind": "m_series" if z.tails else "none",
    }
    if z.tails:
        out["tails"] = [
            {
                "base": format_element(z.group, t.base),
                "cutoff": t.cutoff,
                "coeff": str(t.coeff),
            }
            for t in z.tails
        ]
    return out
