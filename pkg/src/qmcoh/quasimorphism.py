"""Counting quasimorphisms on free groups, exact homogenization, and the
associated degree-2 cocycles.

All values are exact rationals (ints where possible). Homogenization
uses the stabilization of power increments: for counting functions the
sequence n -> phi(g^n) is eventually linear in n, so once a window of
consecutive increments agrees, that common increment is the exact limit
of phi(g^n)/n. Nothing here is floating point and nothing is truncated.

Counting is done on the one-character-per-letter string encoding (see
``words.chars``), so occurrence counts on long periodic powers reduce to
substring scans.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import words
from .errors import NoStabilization, NotACocycle
from .words import Pow, Word


def count_occurrences(needle: str, hay: str) -> int:
    """Occurrences of needle in hay, overlapping ones included."""
    if not needle:
        raise ValueError("empty needle")
    n = 0
    i = hay.find(needle)
    while i != -1:
        n += 1
        i = hay.find(needle, i + 1)
    return n


def brooks_count(w: Word, g: Word) -> int:
    """Overlapping occurrences of the reduced word w inside g."""
    if w == ():
        raise ValueError("counting the empty word is not defined")
    return count_occurrences(words.chars(w), words.chars(g))


def _inv_chars(s: str) -> str:
    return s.swapcase()[::-1]


class Quasimorphism:
    """Evaluator with an optional defect bound and a homogeneity flag.

    ``defect_bound`` is advisory (used as a fallback interval width when
    homogenization fails to stabilize); ``homogeneous`` marks maps that
    already satisfy phi(g^n) = n phi(g).
    """

    homogeneous = False

    def __init__(self, func, name: str = "phi", defect_bound=None,
                 homogeneous: bool = False):
        self._func = func
        self.name = name
        self.defect_bound = defect_bound
        self.homogeneous = homogeneous
        self._homog_cache: dict = {}

    def __call__(self, g):
        return self._func(g)

    def eval_power(self, g: Word, n: int):
        """phi(g^n); subclasses exploit periodicity."""
        return self(words.power(g, n))

    def __repr__(self):
        return self.name


class BrooksQuasimorphism(Quasimorphism):
    """phi_w(g) = (occurrences of w in g) - (occurrences of w^-1 in g),
    overlapping occurrences counted."""

    def __init__(self, w: Word, name: str | None = None):
        if w == ():
            raise ValueError("Brooks word must be nonempty")
        super().__init__(None, name=name or f"brooks({words.fmt(w)})")
        self.word = tuple(w)
        self._w = words.chars(w)
        self._winv = _inv_chars(self._w)
        self._cyclic: dict = {}
        self._power_cache: dict = {}

    def eval_string(self, s: str) -> int:
        return count_occurrences(self._w, s) - count_occurrences(self._winv, s)

    def __call__(self, g):
        return self.eval_string(words.chars(g))

    def eval_power(self, g: Word, n: int) -> int:
        key = (g, n)
        hit = self._power_cache.get(key)
        if hit is not None:
            return hit
        if n == 0:
            val = 0
        else:
            # g^-k is counted honestly as (g^-1)^k; no homogeneity assumed.
            base, k = (g, n) if n > 0 else (words.inv(g), -n)
            cached = self._cyclic.get(base)
            if cached is None:
                cached = self._cyclic[base] = words.cyclic_reduce(base)
            core, conj = cached
            cc = words.chars(core)
            uc = words.chars(conj)
            val = self.eval_string(uc + cc * k + _inv_chars(uc))
        self._power_cache[key] = val
        return val


class HomomorphismQuasimorphism(Quasimorphism):
    """Exact homomorphism F_r -> Q given by generator weights."""

    def __init__(self, weights: dict[int, Fraction], name: str | None = None):
        super().__init__(None, name=name or "hom", defect_bound=Fraction(0),
                         homogeneous=True)
        self.weights = {k: Fraction(v) for k, v in weights.items()}

    def __call__(self, g):
        return sum(
            (w * words.exponent_sum(g, k) for k, w in self.weights.items()),
            start=Fraction(0),
        )

    def eval_power(self, g, n):
        return n * self(g)


class SumQuasimorphism(Quasimorphism):
    """Pointwise sum of quasimorphisms; the defect bound adds."""

    def __init__(self, parts, name: str | None = None):
        parts = tuple(parts)
        if not parts:
            raise ValueError("empty sum")
        bounds = [p.defect_bound for p in parts]
        total = sum(bounds) if all(b is not None for b in bounds) else None
        super().__init__(None, name=name or "+".join(repr(p) for p in parts),
                         defect_bound=total,
                         homogeneous=all(p.homogeneous for p in parts))
        self.parts = parts

    def __call__(self, g):
        return sum(p(g) for p in self.parts)

    def eval_power(self, g, n):
        return sum(p.eval_power(g, n) for p in self.parts)


def qm_from_json(data) -> Quasimorphism:
    """Load {"type": "brooks", "word": ...} or
    {"type": "homomorphism", "weights": {letter: "p/q"}}."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    kind = data.get("type")
    if kind == "brooks":
        return BrooksQuasimorphism(words.parse(data["word"]))
    if kind == "homomorphism":
        weights = {}
        for letter, val in data["weights"].items():
            gen = words.parse(letter)
            if len(gen) != 1 or gen[0] < 0:
                raise ValueError(f"bad generator key {letter!r}")
            weights[gen[0]] = Fraction(val)
        return HomomorphismQuasimorphism(weights)
    raise ValueError(f"unknown quasimorphism type {kind!r}")


def defect_estimate(phi, group, samples: int = 200, seed: int = 0,
                    size: int = 12) -> Fraction:
    """Sampled max of |phi(gh) - phi(g) - phi(h)|.

    This is a lower bound for the true defect (the sup over all pairs);
    callers that need an upper bound must supply one from structure.
    """
    import random

    rng = random.Random(seed)
    best = Fraction(0)
    for _ in range(samples):
        g = group.random_element(rng, size)
        h = group.random_element(rng, size)
        d = abs(phi(group.mul(g, h)) - phi(g) - phi(h))
        if d > best:
            best = Fraction(d)
    return best


class CertifiedInterval(tuple):
    """(lo, hi) bracket returned when stabilization fails but a defect
    bound certifies the limit's location."""

    __slots__ = ()

    def __new__(cls, lo, hi):
        return super().__new__(cls, (Fraction(lo), Fraction(hi)))

    @property
    def lo(self):
        return self[0]

    @property
    def hi(self):
        return self[1]


DEFAULT_WINDOW = 4
DEFAULT_NMAX = 64


def homogenize(phi: Quasimorphism, g: Word, window: int = DEFAULT_WINDOW,
               n_max: int = DEFAULT_NMAX):
    """Exact value of the homogenization of phi at g.

    Computes increments phi(g^(n+1)) - phi(g^n) until ``window``
    consecutive ones agree; that common value is returned. For counting
    quasimorphisms the increment sequence is eventually constant, so
    this is the exact limit of phi(g^n)/n.

    Raises NoStabilization(n_max) if no window stabilizes; if
    phi.defect_bound is set, returns a CertifiedInterval of width
    2*defect_bound around phi(g^n_max)/n_max instead.
    """
    if phi.homogeneous:
        return phi(g)
    key = (g, window, n_max)
    hit = phi._homog_cache.get(key)
    if hit is not None:
        return hit
    if g == ():
        phi._homog_cache[key] = 0
        return 0
    prev = phi.eval_power(g, 1)
    run_val = None
    run_len = 0
    for n in range(1, n_max + 1):
        cur = phi.eval_power(g, n + 1)
        inc = cur - prev
        prev = cur
        if inc == run_val:
            run_len += 1
        else:
            run_val = inc
            run_len = 1
        if run_len >= window:
            phi._homog_cache[key] = run_val
            return run_val
    if phi.defect_bound is not None:
        center = Fraction(phi.eval_power(g, n_max)) / n_max
        d = Fraction(phi.defect_bound)
        return CertifiedInterval(center - d, center + d)
    raise NoStabilization(n_max, what=f"power increments of {phi!r}")


class Homogenization(Quasimorphism):
    """The homogenization of another quasimorphism, as a callable."""

    def __init__(self, phi: Quasimorphism, window: int = DEFAULT_WINDOW,
                 n_max: int = DEFAULT_NMAX):
        super().__init__(None, name=f"homog({phi!r})", homogeneous=True)
        self.base = phi
        self.window = window
        self.n_max = n_max
        self._values = {}

    def __call__(self, g):
        try:
            return self._values[g]
        except KeyError:
            val = homogenize(self.base, g, self.window, self.n_max)
            self._values[g] = val
            return val

    def eval_power(self, g, n):
        return n * self(g)


def _entry_chain_value(phi: Quasimorphism, x):
    """phi on a chain entry that may be a symbolic power."""
    if isinstance(x, Pow):
        return phi.eval_power(x.base, x.exp)
    return phi(x)


def _entry_mul(x, y):
    """Product of two word-or-Pow entries, kept symbolic when the bases
    agree up to inversion (see ``words.entry_mul``)."""
    return words.entry_mul(x, y)


def _same_power_base(x, y) -> bool:
    bx = x.base if isinstance(x, Pow) else x
    by = y.base if isinstance(y, Pow) else y
    return bx == by or bx == words.inv(by)


class Cochain2:
    """Degree-2 evaluator protocol shared by the cocycle classes.

    ``evaluate`` receives a pair of chain entries (words or symbolic
    powers) and must return an exact rational; ``homogeneous`` enables
    the pairing shortcut that kills same-base power pairs.
    """

    degree = 2
    homogeneous = False
    norm_bound = None
    name = "c"

    def __call__(self, g, h):
        return self.evaluate((g, h))

    def evaluate(self, entry):
        raise NotImplementedError

    def __repr__(self):
        return self.name


class HomogeneousCocycle(Cochain2):
    """c(g,h) = phi(gh) - phi(g) - phi(h) for homogeneous phi.

    Vanishes identically on pairs of powers of a common element; the
    evaluator short-circuits that case so symbolic powers never expand.
    """

    homogeneous = True

    def __init__(self, phi: Quasimorphism, name: str | None = None):
        if not phi.homogeneous:
            phi = Homogenization(phi)
        self.phi = phi
        self.name = name or f"defect({phi!r})"
        self._cache: dict = {}

    def evaluate(self, entry):
        x, y = entry
        # Same-base symbolic powers vanish by homogeneity; the shortcut
        # is deliberately limited to them so that plain word pairs are
        # always evaluated honestly.
        if (isinstance(x, Pow) or isinstance(y, Pow)) and _same_power_base(x, y):
            return 0
        key = (x, y)
        hit = self._cache.get(key)
        if hit is None:
            phi = self.phi
            hit = (
                _entry_chain_value(phi, _entry_mul(x, y))
                - _entry_chain_value(phi, x)
                - _entry_chain_value(phi, y)
            )
            self._cache[key] = hit
        return hit


class DefectCocycle(Cochain2):
    """c(g,h) = phi(gh) - phi(g) - phi(h) for a not necessarily
    homogeneous phi. Bounded by three times any bound on phi's defect;
    set ``norm_bound`` explicitly when a certified pairing bound is
    needed."""

    def __init__(self, phi: Quasimorphism, name: str | None = None,
                 norm_bound=None):
        self.phi = phi
        self.name = name or f"defect({phi!r})"
        self.norm_bound = norm_bound
        self._cache: dict = {}

    def evaluate(self, entry):
        x, y = entry
        key = (x, y)
        hit = self._cache.get(key)
        if hit is None:
            phi = self.phi
            hit = (
                _entry_chain_value(phi, _entry_mul(x, y))
                - _entry_chain_value(phi, x)
                - _entry_chain_value(phi, y)
            )
            self._cache[key] = hit
        return hit


def homogeneous_cocycle(phi: Quasimorphism, window: int = DEFAULT_WINDOW,
                        n_max: int = DEFAULT_NMAX) -> HomogeneousCocycle:
    """The coboundary-style cocycle of the homogenization of phi."""
    return HomogeneousCocycle(Homogenization(phi, window, n_max))


class PulledBackCocycle(Cochain2):
    """c(aut(g), aut(h)); keeps symbolic powers symbolic since
    automorphisms send powers to powers."""

    def __init__(self, aut, c: Cochain2):
        self.aut = aut
        self.inner = c
        self.homogeneous = c.homogeneous
        self.norm_bound = c.norm_bound
        self.name = f"pullback({c!r})"

    def _map(self, x):
        if isinstance(x, Pow):
            return words.pow_entry(self.aut(x.base), x.exp)
        return self.aut(x)

    def evaluate(self, entry):
        return self.inner.evaluate(tuple(self._map(x) for x in entry))


def pullback_cocycle(aut, c: Cochain2) -> PulledBackCocycle:
    return PulledBackCocycle(aut, c)


def cocycle_defect(c, g, h, k, group) -> Fraction:
    """dc(g,h,k) = c(h,k) - c(gh,k) + c(g,hk) - c(g,h)."""
    return (
        c(h, k)
        - c(group.mul(g, h), k)
        + c(g, group.mul(h, k))
        - c(g, h)
    )


class CorrectedCocycle(Cochain2):
    """c plus the coboundary of the stabilized primitive psi; this is the
    homogeneous representative of c's class when c is a bounded cocycle
    whose power values stabilize."""

    homogeneous = True

    def __init__(self, c, group, window: int = DEFAULT_WINDOW,
                 n_max: int = DEFAULT_NMAX):
        self.base = c
        self.group = group
        self.window = window
        self.n_max = n_max
        self._psi_cache: dict = {}
        self.name = f"homog-rep({c!r})"

    def psi(self, g):
        hit = self._psi_cache.get(g)
        if hit is not None:
            return hit
        grp = self.group
        if g == grp.identity:
            self._psi_cache[g] = 0
            return 0
        run_val = None
        run_len = 0
        gk = g
        for _ in range(1, self.n_max + 1):
            val = self.base(g, gk)
            gk = grp.mul(gk, g)
            if val == run_val:
                run_len += 1
            else:
                run_val = val
                run_len = 1
            if run_len >= self.window:
                self._psi_cache[g] = run_val
                return run_val
        raise NoStabilization(self.n_max, what=f"psi values of {self.base!r}")

    def evaluate(self, entry):
        x, y = entry
        g = words.expand_entry(x)
        h = words.expand_entry(y)
        gh = self.group.mul(g, h)
        return (
            self.base(g, h) + self.psi(gh) - self.psi(g) - self.psi(h)
        )


def homogeneous_representative(c, group, sample_triples=(),
                               window: int = DEFAULT_WINDOW,
                               n_max: int = DEFAULT_NMAX) -> CorrectedCocycle:
    """Homogeneous cocycle cohomologous to c.

    Prechecks on the supplied samples: c must vanish against the
    identity (normalization precondition) and satisfy the cocycle law
    (NotACocycle with a witness otherwise). The primitive psi(g) is the
    stabilized value of c(g, g^k); NoStabilization propagates.
    """
    e = group.identity
    for (g, h, k) in sample_triples:
        if c(g, e) != 0 or c(e, g) != 0:
            raise ValueError(f"c is not normalized at the identity on {g!r}")
        d = cocycle_defect(c, g, h, k, group)
        if d != 0:
            raise NotACocycle((g, h, k), d)
    return CorrectedCocycle(c, group, window, n_max)
