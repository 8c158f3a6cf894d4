"""Filtered cochain complexes over exact fields and the spectral
sequences they generate.

A ``FiniteComplex`` is a finite tower of based vector spaces with
differentials given column-wise; a ``Filtration`` is a decreasing,
differential-stable chain of subspaces in every degree, with ``F^0``
the whole space and ``F^p = 0`` beyond the regularity bound ``u(n)``.
Pages are computed from the classical cycle/boundary lattice

    Z_r = F^p  meet  d^{-1}(F^{p+r}),
    B_r = F^p  meet  d(F^{p-r}),
    E_r = Z_r / (Z_{r-1}[p+1] + B_{r-1}),

with the induced differential d_r evaluated on chosen coset
representatives. Everything is exact arithmetic; there is no floating
point anywhere below.

The double complex of a finite group extension is instantiated with
trivial one-dimensional coefficients: horizontal cochains on the
quotient, vertical cochains built from orbit functions on tuples over
the ambient group. Its vertical (column) filtration is by coordinate
blocks, which the page computations exploit through masks.
"""

from __future__ import annotations

import itertools
import os
import random
from fractions import Fraction
from typing import NamedTuple

from .errors import BudgetExceeded, InvariantViolation
from .groups import FiniteGroup
from .linalg import (FIELDS, GF2, complement_in, field_name, matmul,
                     matrix_rank, rank_of, solve_coords, span_reduce,
                     vector_ops, vectors_into_coordspan, vectors_into_span)

DEFAULT_BUDGET_MB = 256
DEFAULT_WINDOW = 3
DEFAULT_MAX_R = 4


def memory_budget_mb() -> int:
    raw = os.environ.get("QMCOH_BUDGET_MB")
    if raw is None:
        return DEFAULT_BUDGET_MB
    return int(raw)


class FiniteComplex:
    """Cochain complex in degrees 0..max_degree, differentials as column
    lists; d(basis_i of degree n) = diffs[n][i] in degree n+1."""

    def __init__(self, field, dims, diffs, check: bool = True):
        if len(diffs) != len(dims) - 1:
            raise ValueError("need exactly one differential per adjacent pair")
        self.field = field
        self.dims = list(dims)
        self.ops = [vector_ops(field, d) for d in self.dims]
        self.diffs = [list(cols) for cols in diffs]
        for n, cols in enumerate(self.diffs):
            if len(cols) != self.dims[n]:
                raise ValueError(f"degree {n}: {len(cols)} columns for "
                                 f"dimension {self.dims[n]}")
        self._rank_cache: dict = {}
        if check:
            for n in range(len(self.diffs) - 1):
                for i, col in enumerate(self.diffs[n]):
                    if not self.ops[n + 2].is_zero(self.apply(n + 1, col)):
                        raise InvariantViolation(
                            f"d.d != 0 on basis vector {i} of degree {n}")

    @property
    def max_degree(self) -> int:
        return len(self.dims) - 1

    def apply(self, n: int, v):
        """Image of a degree-n vector under d."""
        cols = self.diffs[n]
        tgt = self.ops[n + 1]
        if self.field.p == 2:
            acc = 0
            while v:
                low = v & -v
                acc ^= cols[low.bit_length() - 1]
                v ^= low
            return acc
        acc = tgt.zero_vec
        for a, col in zip(v, cols):
            if a != self.field.zero:
                acc = tgt.add(acc, tgt.scale(a, col))
        return acc

    def d_rank(self, n: int) -> int:
        if n < 0 or n >= len(self.diffs):
            return 0
        if n not in self._rank_cache:
            self._rank_cache[n] = rank_of(self.ops[n + 1], self.diffs[n])
        return self._rank_cache[n]

    def homology_dim(self, n: int) -> int:
        """dim ker d_n - rank d_{n-1} (d is zero off the stored range)."""
        if n < 0 or n > self.max_degree:
            return 0
        kernel = self.dims[n] - self.d_rank(n)
        return kernel - self.d_rank(n - 1)


class Filtration:
    """Decreasing subspace chain per degree. ``bases[n][p]`` lists the
    vectors spanning F^p K^n; a truncated list means zero beyond. When
    every level is spanned by standard basis vectors, ``masks`` carries
    the coordinate supports and membership tests become projections."""

    def __init__(self, cx: FiniteComplex, bases, masks=None,
                 check: bool = True):
        if len(bases) != len(cx.dims):
            raise ValueError("one level chain per degree required")
        self.cx = cx
        self.bases = [list(map(list, chain)) for chain in bases]
        self.masks = masks
        self.u = []
        for n, chain in enumerate(self.bases):
            top = 0
            for p, basis in enumerate(chain):
                if basis:
                    top = p
            self.u.append(top)
        self._membership: dict = {}
        if check:
            self._validate()

    def _validate(self):
        cx = self.cx
        for n, chain in enumerate(self.bases):
            ops = cx.ops[n]
            if rank_of(ops, chain[0] if chain else []) != cx.dims[n]:
                raise InvariantViolation(f"F^0 does not span degree {n}")
            for p in range(len(chain) - 1):
                ech = ops.echelon()
                for v in chain[p]:
                    ech.add(v)
                before = ech.rank
                for v in chain[p + 1]:
                    if ech.add(v):
                        raise InvariantViolation(
                            f"F^{p + 1} not inside F^{p} at degree {n}")
                assert ech.rank == before
        for n in range(len(self.bases) - 1):
            for p in range(self.u[n] + 1):
                for v in self.space(p, n):
                    if not self.contains(p, n + 1, cx.apply(n, v)):
                        raise InvariantViolation(
                            f"d leaves F^{p} at degree {n}")

    def level_bound(self, n: int) -> int:
        """Regularity bound: F^p vanishes in degree n beyond this."""
        if n < 0 or n >= len(self.u):
            return 0
        return self.u[n]

    def space(self, p: int, n: int):
        if n < 0 or n >= len(self.bases):
            return []
        chain = self.bases[n]
        p = max(p, 0)
        if p >= len(chain):
            return []
        return chain[p]

    def mask_at(self, p: int, n: int):
        """Coordinate support of F^p K^n, or None when not coordinate."""
        if self.masks is None or n < 0 or n >= len(self.masks):
            return None
        chain = self.masks[n]
        p = max(p, 0)
        if p >= len(chain):
            return self.cx.ops[n].mask([])
        return chain[p]

    def contains(self, p: int, n: int, v) -> bool:
        ops = self.cx.ops[n]
        if p <= 0:
            return True
        mask = self.mask_at(p, n)
        if mask is not None:
            return ops.is_zero(ops.outside(v, mask))
        key = (p, n)
        ech = self._membership.get(key)
        if ech is None:
            ech = ops.echelon()
            for b in self.space(p, n):
                ech.add(b)
            self._membership[key] = ech
        res, _ = ech.reduce(v)
        return res is None or ops.is_zero(res)

    @classmethod
    def from_coordinates(cls, cx: FiniteComplex, index_sets,
                         check: bool = True) -> "Filtration":
        """Levels spanned by standard basis vectors; ``index_sets[n][p]``
        lists the coordinates of F^p K^n."""
        bases = []
        masks = []
        for n, chain in enumerate(index_sets):
            ops = cx.ops[n]
            bases.append([[ops.basis_vector(i) for i in idx] for idx in chain])
            masks.append([ops.mask(idx) for idx in chain])
        return cls(cx, bases, masks=masks, check=check)

    @classmethod
    def trivial(cls, cx: FiniteComplex) -> "Filtration":
        """F^0 = everything, F^1 = 0 in every degree."""
        return cls.from_coordinates(
            cx, [[range(d)] for d in cx.dims], check=False)


class PageCell(NamedTuple):
    r: int
    p: int
    q: int
    dim: int
    reps: tuple
    d_columns: tuple  # columns of d_r over the target cell's reps
    d_target_dim: int


class SpectralSequence:
    """Page computations for one filtered complex, with caching. Cells
    are available for p + q <= max_degree - 1; induced differentials
    additionally need p + q <= max_degree - 2."""

    def __init__(self, cx: FiniteComplex, filt: Filtration):
        if filt.cx is not cx:
            raise ValueError("filtration belongs to a different complex")
        self.cx = cx
        self.filt = filt
        self._images: dict = {}
        self._z: dict = {}
        self._b: dict = {}
        self._den: dict = {}
        self._reps: dict = {}
        self._dmat: dict = {}

    # ----------------------------------------------------------- lattice

    def _image_list(self, level: int, n: int):
        key = (level, n)
        if key not in self._images:
            self._images[key] = [self.cx.apply(n, v)
                                 for v in self.filt.space(level, n)]
        return self._images[key]

    def cycles(self, r: int, p: int, q: int):
        """Z_r^{p,q}: vectors of F^p whose differential lies r deeper."""
        n = p + q
        if n < 0 or n > self.cx.max_degree:
            return []
        base = self.filt.space(p, n)
        if r <= 0 or not base:
            return list(base)
        if n == self.cx.max_degree:
            raise ValueError("cycle condition needs the next differential")
        level = min(p + r, self.filt.level_bound(n + 1) + 1)
        key = (p, q, level)
        if key in self._z:
            return self._z[key]
        ops = self.cx.ops[n + 1]
        images = self._image_list(max(p, 0), n)
        mask = self.filt.mask_at(level, n + 1)
        if mask is not None:
            rows = vectors_into_coordspan(ops, images, mask)
        else:
            rows = vectors_into_span(ops, images, self.filt.space(level, n + 1))
        src = self.cx.ops[n]
        got = span_reduce(src, [src.combine(row, base) for row in rows])
        self._z[key] = got
        return got

    def boundaries(self, r: int, p: int, q: int):
        """B_r^{p,q} = F^p meet d(F^{p-r})."""
        n = p + q
        if n <= 0 or n > self.cx.max_degree:
            return []
        level = max(p - r, 0)
        key = (p, q, level)
        if key in self._b:
            return self._b[key]
        ops = self.cx.ops[n]
        images = self._image_list(level, n - 1)
        if p <= 0:
            got = span_reduce(ops, images)
        else:
            mask = self.filt.mask_at(p, n)
            if mask is not None:
                rows = vectors_into_coordspan(ops, images, mask)
            else:
                rows = vectors_into_span(ops, images, self.filt.space(p, n))
            got = span_reduce(ops, [ops.combine(row, images) for row in rows])
        self._b[key] = got
        return got

    def _denominator(self, r: int, p: int, q: int):
        key = (r, p, q)
        if key not in self._den:
            ops = self.cx.ops[p + q]
            self._den[key] = span_reduce(
                ops, self.cycles(r - 1, p + 1, q - 1)
                + self.boundaries(r - 1, p, q))
        return self._den[key]

    def representatives(self, r: int, p: int, q: int):
        key = (r, p, q)
        if key not in self._reps:
            ops = self.cx.ops[p + q]
            self._reps[key] = complement_in(
                ops, self._denominator(r, p, q), self.cycles(r, p, q))
        return self._reps[key]

    def dim(self, r: int, p: int, q: int) -> int:
        n = p + q
        if p < 0 or n < 0 or n > self.cx.max_degree - 1:
            return 0
        return len(self.representatives(r, p, q))

    # ------------------------------------------------------ differentials

    def d_data(self, r: int, p: int, q: int):
        """(columns, target dimension) of d_r out of the cell."""
        n = p + q
        if n > self.cx.max_degree - 2:
            raise ValueError("induced differential needs two more degrees")
        key = (r, p, q)
        if key in self._dmat:
            return self._dmat[key]
        reps = self.representatives(r, p, q)
        tp, tq = p + r, q - r + 1
        ops = self.cx.ops[n + 1]
        if tq < 0:
            tden: list = []
            treps: list = []
        else:
            tden = self._denominator(r, tp, tq)
            treps = self.representatives(r, tp, tq)
        cols = []
        for x in reps:
            y = self.cx.apply(n, x)
            coords = solve_coords(ops, tden + treps, y)
            if coords is None:
                raise InvariantViolation(
                    f"d_{r} escaped its target cell at (p={p}, q={q})")
            cols.append(coords[len(tden):])
        got = (cols, len(treps))
        self._dmat[key] = got
        return got

    def d_rank(self, r: int, p: int, q: int) -> int:
        if p < 0 or q < 0:
            return 0
        cols, height = self.d_data(r, p, q)
        if height == 0 or not cols:
            return 0
        return matrix_rank(self.cx.field, cols, height)

    def consistency_ok(self, r: int, p: int, q: int) -> bool:
        """dim E_{r+1} = dim ker d_r - rank of the incoming d_r."""
        lhs = self.dim(r + 1, p, q)
        out_rank = self.d_rank(r, p, q)
        in_rank = self.d_rank(r, p - r, q + r - 1)
        return lhs == self.dim(r, p, q) - out_rank - in_rank

    def d_squared_ok(self, r: int, p: int, q: int) -> bool:
        cols1, h1 = self.d_data(r, p, q)
        cols2, h2 = self.d_data(r, p + r, q - r + 1)
        if h1 == 0 or not cols1:
            return True
        composed = matmul(self.cx.field, cols2, cols1, h2)
        zero = self.cx.field.zero
        return all(all(x == zero for x in col) for col in composed)

    # -------------------------------------------------------- convergence

    def stable_r(self, p: int, q: int) -> int:
        """Past this page the cell no longer moves: the outgoing
        differential has left the filtration range and the incoming one
        starts below level zero."""
        n = p + q
        return max(self.filt.level_bound(n + 1) - p + 1, p + 1)

    def e_infinity_dim(self, p: int, q: int) -> int:
        return self.dim(self.stable_r(p, q), p, q)


def page(cx: FiniteComplex, filt: Filtration, r: int, p: int, q: int,
         engine: SpectralSequence | None = None) -> PageCell:
    """One cell of one page, with its induced differential."""
    if r < 0 or p < 0 or q < 0:
        raise ValueError("page indices must be non-negative")
    if p + q + 1 > cx.max_degree - 1:
        raise ValueError("cell too close to the top stored degree")
    eng = engine or SpectralSequence(cx, filt)
    reps = eng.representatives(r, p, q)
    cols, tdim = eng.d_data(r, p, q)
    return PageCell(r, p, q, len(reps), tuple(reps),
                    tuple(tuple(c) for c in cols), tdim)


def e_infinity_check(engine: SpectralSequence, n: int) -> dict:
    """Compare the stable page total on an antidiagonal against the
    homology of the underlying complex."""
    cx = engine.cx
    if n < 0 or n > cx.max_degree - 1:
        raise ValueError("degree outside the checkable range")
    cells = []
    total = 0
    for p in range(engine.filt.level_bound(n) + 1):
        d = engine.e_infinity_dim(p, n - p)
        cells.append({"p": p, "dim": d})
        total += d
    hom = cx.homology_dim(n)
    return {"degree": n, "cells": cells, "total": total,
            "homology": hom, "ok": total == hom}


def lemma3_check(engine: SpectralSequence, max_n: int | None = None) -> dict:
    """Conditional low-degree consequences of a vanishing first vertical
    column: E_3^{n,0} = E_2^{n,0}, and E_2^{n,2} surjects onto E_3^{n,2}
    with kernel generated by the incoming d_2. Skipped (not passed) when
    the hypothesis fails in the window."""
    cx = engine.cx
    top = cx.max_degree
    if max_n is None:
        max_n = top - 1
    hyp_cells = []
    for p in range(min(max_n, top - 1 - 1) + 1):
        d = engine.dim(2, p, 1)
        hyp_cells.append({"p": p, "q": 1, "dim": d})
        if d != 0:
            return {"status": "skipped",
                    "reason": "hypothesis not met, skipped",
                    "witness": {"p": p, "q": 1, "dim": d}}
    checks = []
    for n in range(0, min(max_n, top - 1) + 1):
        checks.append({"cell": [n, 0],
                       "claim": "E3 equals E2",
                       "ok": engine.dim(3, n, 0) == engine.dim(2, n, 0)})
    for n in range(0, min(max_n, top - 3) + 1):
        incoming = engine.d_rank(2, n - 2, 3) if n >= 2 else 0
        checks.append({"cell": [n, 2],
                       "claim": "E2 surjects onto E3",
                       "ok": engine.dim(3, n, 2)
                       == engine.dim(2, n, 2) - incoming})
    ok = all(c["ok"] for c in checks)
    return {"status": "checked", "hypothesis": hyp_cells,
            "checks": checks, "ok": ok}


# ---------------------------------------------------------------- builders


def _orbit_key(gamma: FiniteGroup, subgroup, tup):
    return min(tuple(gamma.mul(h, x) for x in tup) for h in subgroup)


def hs_double_complex(ext, field=GF2, max_total: int = 5):
    """Total complex and column filtration of the quotient-by-fiber
    double complex of a finite extension, with trivial one-dimensional
    coefficients.

    Horizontal direction: cochains on the quotient in the fiber-orbit
    module; vertical direction: the omit-one differential on orbit
    functions over tuples of the ambient group. Returns (complex,
    filtration, layout info).
    """
    gamma, pi, g = ext.gamma, ext.pi, ext.g
    for grp in (gamma, pi, g):
        if not isinstance(grp, FiniteGroup):
            raise TypeError("double complex needs finite groups throughout")
    subgroup = tuple(sorted(ext.include(x) for x in g.elements()))
    pi_elts = tuple(sorted(pi.elements()))

    n_orbits_est = [gamma.order ** (q + 1) // g.order
                    for q in range(max_total + 1)]
    dims_est = [sum(len(pi_elts) ** p * n_orbits_est[n - p]
                    for p in range(n + 1)) for n in range(max_total + 1)]
    unit_bits = 1 if field.p == 2 else 128
    est_bits = sum(dims_est[n] * dims_est[n + 1] for n in range(max_total))
    est_mb = est_bits * unit_bits / 8 / 2 ** 20
    budget = memory_budget_mb()
    if est_mb > budget:
        raise BudgetExceeded(
            f"estimated {est_mb:.0f} MB for the double complex exceeds "
            f"QMCOH_BUDGET_MB={budget}")

    # orbit bases of the vertical modules, per tuple length
    orbits = {}
    orb_index = {}
    for t in range(1, max_total + 2):
        seen = set()
        for tup in itertools.product(sorted(gamma.elements()), repeat=t):
            seen.add(_orbit_key(gamma, subgroup, tup))
        orbits[t] = sorted(seen)
        orb_index[t] = {rep: i for i, rep in enumerate(orbits[t])}

    def orbit_of(t, tup):
        return orb_index[t][_orbit_key(gamma, subgroup, tup)]

    # quotient action on orbit bases, one permutation per element
    act = {}
    for q in range(max_total + 1):
        t = q + 1
        table = {}
        for alpha in pi_elts:
            s = ext.section(alpha)
            table[alpha] = [
                orbit_of(t, tuple(gamma.mul(s, x) for x in rep))
                for rep in orbits[t]]
        for a in pi_elts:
            for b in pi_elts:
                ab = pi.mul(a, b)
                composed = [table[a][i] for i in table[b]]
                if composed != table[ab]:
                    raise InvariantViolation(
                        f"quotient action fails to compose at ({a}, {b})")
        act[q] = table

    # vertical differential on orbit functions, as sparse columns
    vert = {}
    for q in range(max_total):
        t = q + 2
        cols = [[] for _ in orbits[q + 1]]
        for tgt, rep in enumerate(orbits[t]):
            for i in range(t):
                src = orbit_of(t - 1, rep[:i] + rep[i + 1:])
                sign = field.one if i % 2 == 0 else field.neg(field.one)
                cols[src].append((tgt, sign))
        vert[q] = cols

    tuples = {p: list(itertools.product(pi_elts, repeat=p))
              for p in range(max_total + 1)}
    tup_index = {p: {tup: i for i, tup in enumerate(tuples[p])}
                 for p in tuples}

    def block_dim(p, q):
        return len(tuples[p]) * len(orbits[q + 1])

    dims = []
    offsets = []
    blocks = {}
    for n in range(max_total + 1):
        offs = {}
        total = 0
        for p in range(n + 1):
            offs[p] = total
            blocks[(p, n - p)] = block_dim(p, n - p)
            total += block_dim(p, n - p)
        offsets.append(offs)
        dims.append(total)

    F = field
    diffs = []
    for n in range(max_total):
        ops_next = vector_ops(field, dims[n + 1])
        cols = []
        for p in range(n + 1):
            q = n - p
            n_orb = len(orbits[q + 1])
            n_orb_up = len(orbits[q + 2])
            horiz_base = offsets[n + 1][p + 1]
            vert_base = offsets[n + 1][p]
            twist = F.one if p % 2 == 0 else F.neg(F.one)
            for a in tuples[p]:
                for o in range(n_orb):
                    col: dict = {}

                    def put(idx, coeff):
                        col[idx] = F.add(col.get(idx, F.zero), coeff)

                    # horizontal: act on the value, prepend a slot
                    for beta in pi_elts:
                        ti = tup_index[p + 1][(beta,) + a]
                        put(horiz_base + ti * n_orb + act[q][beta][o], F.one)
                    # horizontal: split each slot of the argument tuple
                    for i in range(1, p + 1):
                        sign = F.one if i % 2 == 0 else F.neg(F.one)
                        for x in pi_elts:
                            y = pi.mul(pi.inv(x), a[i - 1])
                            merged = a[:i - 1] + (x, y) + a[i:]
                            ti = tup_index[p + 1][merged]
                            put(horiz_base + ti * n_orb + o, sign)
                    # horizontal: drop the trailing slot
                    sign = F.one if (p + 1) % 2 == 0 else F.neg(F.one)
                    for beta in pi_elts:
                        ti = tup_index[p + 1][a + (beta,)]
                        put(horiz_base + ti * n_orb + o, sign)
                    # vertical, twisted by the horizontal degree
                    ti = tup_index[p][a]
                    for tgt, sgn in vert[q][o]:
                        put(vert_base + ti * n_orb_up + tgt, F.mul(twist, sgn))
                    cols.append(ops_next.from_sparse(col))
        diffs.append(cols)

    cx = FiniteComplex(field, dims, diffs, check=True)
    index_sets = [[range(offsets[n][p], dims[n]) for p in range(n + 1)]
                  for n in range(max_total + 1)]
    filt = Filtration.from_coordinates(cx, index_sets, check=True)
    info = {"blocks": blocks, "orbit_counts": {t: len(orbits[t])
                                               for t in orbits},
            "offsets": [dict(offs) for offs in offsets],
            "dims": list(dims)}
    return cx, filt, info


def hs_row_filtration(cx: FiniteComplex, info: dict) -> Filtration:
    """Filtration of the same total complex by the fiber degree. Blocks
    are laid out with the quotient degree increasing, so each level is a
    coordinate prefix."""
    index_sets = []
    for n, offs in enumerate(info["offsets"]):
        chain = []
        for level in range(n + 1):
            cut = n - level + 1
            end = offs[cut] if cut in offs else cx.dims[n]
            chain.append(range(0, end))
        index_sets.append(chain)
    return Filtration.from_coordinates(cx, index_sets, check=True)


def random_filtered_complex(seed: int):
    """Seeded filtered complex with known homology: a normal form with
    prescribed ranks, conjugated degreewise by random invertible maps,
    filtered by levels that the differential never decreases. Returns
    (complex, filtration, homology dims)."""
    rng = random.Random(f"filtered-complex:{seed}")
    field = (GF2, FIELDS["F3"], FIELDS["F5"], FIELDS["Q"])[seed % 4]
    top = 4
    hom = [rng.randint(0, 2) for _ in range(top + 1)]
    bnd = [rng.randint(0, 2) for _ in range(top)] + [0]
    dims = [hom[n] + (bnd[n - 1] if n > 0 else 0) + bnd[n]
            for n in range(top + 1)]

    # levels per normal-form basis vector, ordered [h | image | source]
    levels = []
    src_levels = [[] for _ in range(top + 1)]
    for n in range(top + 1):
        lv = [rng.randint(0, n) for _ in range(hom[n])]
        if n > 0:
            lv += [rng.randint(lo, n) for lo in src_levels[n - 1]]
        src_levels[n] = [rng.randint(0, n) for _ in range(bnd[n])]
        lv += src_levels[n]
        levels.append(lv)

    def random_invertible(dim, ops):
        if dim == 0:
            return []
        while True:
            cols = [ops.from_entries([rng.randrange(field.p or 5)
                                      for _ in range(dim)])
                    for _ in range(dim)]
            if rank_of(ops, cols) == dim:
                return cols

    change = [random_invertible(dims[n], vector_ops(field, dims[n]))
              for n in range(top + 1)]

    diffs = []
    for n in range(top):
        ops_src = vector_ops(field, dims[n])
        src_start = hom[n] + (bnd[n - 1] if n > 0 else 0)
        img_start = hom[n + 1]
        images = [change[n + 1][img_start + j] for j in range(bnd[n])]
        cols = []
        for k in range(dims[n]):
            normal = solve_coords(ops_src, change[n], ops_src.basis_vector(k))
            tgt_ops = vector_ops(field, dims[n + 1])
            acc = tgt_ops.zero_vec
            for j in range(bnd[n]):
                c = normal[src_start + j]
                if c != field.zero:
                    acc = tgt_ops.add(acc, tgt_ops.scale(c, images[j]))
            cols.append(acc)
        diffs.append(cols)

    cx = FiniteComplex(field, dims, diffs, check=True)
    bases = []
    for n in range(top + 1):
        chain = []
        for p in range(max(levels[n], default=0) + 1 if levels[n] else 1):
            chain.append([change[n][k] for k in range(dims[n])
                          if levels[n][k] >= p])
        if not chain:
            chain = [[]]
        bases.append(chain)
    filt = Filtration(cx, bases, check=True)
    return cx, filt, hom


# ----------------------------------------------------------------- reports


def sequence_report(cx: FiniteComplex, filt: Filtration,
                    window: int = DEFAULT_WINDOW,
                    max_r: int = DEFAULT_MAX_R) -> dict:
    """Deterministic summary: page dimension tables, differential ranks,
    page-homology consistency, and the stable-page/homology comparison."""
    engine = SpectralSequence(cx, filt)
    window = min(window, cx.max_degree - 1)
    pages = []
    for r in range(max_r + 1):
        cells = []
        for n in range(window + 1):
            for p in range(n + 1):
                q = n - p
                entry = {"p": p, "q": q, "dim": engine.dim(r, p, q)}
                if n <= cx.max_degree - 2:
                    entry["d_rank"] = engine.d_rank(r, p, q)
                cells.append(entry)
        pages.append({"r": r, "cells": cells})
    consistency = []
    for r in range(max_r):
        for n in range(min(window, cx.max_degree - 2) + 1):
            for p in range(n + 1):
                consistency.append(
                    {"r": r, "p": p, "q": n - p,
                     "ok": engine.consistency_ok(r, p, n - p)})
    einf = [e_infinity_check(engine, n) for n in range(window + 1)]
    return {"field": field_name(cx.field),
            "dims": list(cx.dims),
            "window": window,
            "pages": pages,
            "consistency": consistency,
            "e_infinity": einf,
            "converged": all(row["ok"] for row in einf)
            and all(row["ok"] for row in consistency)}


# ------------------------------------------------------------------- JSON


def _encode_entry(field, x):
    return str(x) if field.p is None else int(x)


def _decode_entry(field, x):
    return field.of(Fraction(x)) if field.p is None else field.of(x)


def complex_to_json(cx: FiniteComplex, filt: Filtration | None = None) -> dict:
    doc = {
        "field": field_name(cx.field),
        "dims": list(cx.dims),
        "differentials": [
            [[_encode_entry(cx.field, e) for e in cx.ops[n + 1].entries(col)]
             for col in cols]
            for n, cols in enumerate(cx.diffs)],
    }
    if filt is not None:
        doc["filtration"] = [
            [[[_encode_entry(cx.field, e) for e in cx.ops[n].entries(v)]
              for v in basis]
             for basis in chain]
            for n, chain in enumerate(filt.bases)]
    return doc


def complex_from_json(doc: dict):
    field = FIELDS[doc["field"]]
    dims = list(doc["dims"])
    all_ops = [vector_ops(field, d) for d in dims]
    diffs = [
        [all_ops[n + 1].from_entries([_decode_entry(field, e) for e in col])
         for col in cols]
        for n, cols in enumerate(doc["differentials"])]
    cx = FiniteComplex(field, dims, diffs, check=True)
    filt = None
    if "filtration" in doc:
        bases = [
            [[all_ops[n].from_entries([_decode_entry(field, e) for e in vec])
              for vec in basis]
             for basis in chain]
            for n, chain in enumerate(doc["filtration"])]
        filt = Filtration(cx, bases, check=True)
    return cx, filt
