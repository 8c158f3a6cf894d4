import pytest

from qmcoh.errors import BudgetExceeded, InvariantViolation
from qmcoh.fixtures import z4_extension
from qmcoh.linalg import FIELDS
from qmcoh.spectral import (FiniteComplex, Filtration, SpectralSequence,
                            complex_from_json, complex_to_json,
                            e_infinity_check, hs_double_complex,
                            hs_row_filtration, lemma3_check, page,
                            random_filtered_complex, sequence_report)

CX, FILT, INFO = hs_double_complex(z4_extension())
ENGINE = SpectralSequence(CX, FILT)

WINDOW_CELLS = [(p, n - p) for n in range(4) for p in range(n + 1)]


def test_block_layout_dimensions():
    assert CX.dims == [2, 12, 56, 240, 992, 4032]
    assert INFO["blocks"][(0, 0)] == 2
    assert INFO["blocks"][(3, 1)] == 64
    # quotient-tuple count times fiber-orbit count per block
    for (p, q), d in INFO["blocks"].items():
        assert d == 2 ** p * 2 * 4 ** q


def test_first_page_counts_fiber_cohomology():
    # E_1^{p,q} should be (quotient cochains) x (fiber cohomology), and
    # the fiber here has one-dimensional cohomology in every degree
    for p, q in WINDOW_CELLS:
        assert ENGINE.dim(1, p, q) == 2 ** p


def test_second_page_all_ones_in_window():
    for p, q in WINDOW_CELLS:
        assert ENGINE.dim(2, p, q) == 1, (p, q)


def test_page_homology_consistency_through_r4():
    for r in range(5):
        for p, q in WINDOW_CELLS:
            assert ENGINE.consistency_ok(r, p, q), (r, p, q)


def test_induced_differential_squares_to_zero():
    for r in range(4):
        for n in range(3):  # both matrices need two degrees of headroom
            for p in range(n + 1):
                assert ENGINE.d_squared_ok(r, p, n - p), (r, p, n)


def test_stable_page_matches_ambient_homology():
    for n in range(4):
        report = e_infinity_check(ENGINE, n)
        assert report["homology"] == 1
        assert report["ok"], report


def test_stationarity_at_predicted_page():
    for p, q in WINDOW_CELLS:
        r0 = ENGINE.stable_r(p, q)
        assert ENGINE.dim(r0, p, q) == ENGINE.dim(r0 + 1, p, q)


def test_nonsplit_extension_has_a_transgression():
    # the order-4 total group is detected by a rank-one d_2 off (0, 1)
    assert ENGINE.d_rank(2, 0, 1) == 1
    assert ENGINE.dim(3, 0, 1) == 0


def test_lemma3_skips_when_middle_column_survives():
    report = lemma3_check(ENGINE, 2)
    assert report["status"] == "skipped"
    assert report["reason"] == "hypothesis not met, skipped"
    assert report["witness"]["q"] == 1


def test_lemma3_checked_on_vanishing_column():
    # filtering every degree at full depth concentrates E_0 in q = 0
    pure = Filtration.from_coordinates(
        CX, [[range(d)] * (n + 1) for n, d in enumerate(CX.dims)])
    engine = SpectralSequence(CX, pure)
    report = lemma3_check(engine, 2)
    assert report["status"] == "checked"
    assert report["ok"]
    assert len(report["checks"]) == 6


def test_row_filtration_degenerates_immediately():
    # filtering by fiber degree kills everything above the bottom row on
    # the first page: the row coefficients are free over the quotient
    row = hs_row_filtration(CX, INFO)
    engine = SpectralSequence(CX, row)
    for p, q in WINDOW_CELLS:
        if q >= 1:
            assert engine.dim(1, p, q) == 0, (p, q)
    for level in range(4):
        assert engine.dim(1, level, 0) == 4 ** level
        assert engine.dim(2, level, 0) == 1  # ambient-group cohomology


def test_trivial_filtration_collapses_to_homology():
    triv = Filtration.trivial(CX)
    engine = SpectralSequence(CX, triv)
    for q in range(4):
        assert engine.dim(0, 0, q) == CX.dims[q]
        assert engine.dim(1, 0, q) == CX.homology_dim(q)
        assert engine.dim(2, 0, q) == CX.homology_dim(q)


def test_page_preconditions():
    with pytest.raises(ValueError):
        page(CX, FILT, 1, -1, 2)
    with pytest.raises(ValueError):
        page(CX, FILT, 1, 0, CX.max_degree - 1)


def test_page_cell_payload():
    cell = page(CX, FILT, 2, 0, 1, engine=ENGINE)
    assert cell.dim == 1
    assert cell.d_target_dim == ENGINE.dim(2, 2, 0)
    assert len(cell.d_columns) == cell.dim


def test_double_complex_over_odd_characteristic():
    # exercises the sign bookkeeping that GF(2) cannot see; the d.d = 0
    # validation inside the constructor is the assertion
    cx3, filt3, _ = hs_double_complex(z4_extension(), field=FIELDS["F3"],
                                      max_total=3)
    assert cx3.dims == [2, 12, 56, 240]
    engine = SpectralSequence(cx3, filt3)
    assert engine.dim(1, 0, 0) == 1


def test_budget_cap_refuses_oversized_builds(monkeypatch):
    monkeypatch.setenv("QMCOH_BUDGET_MB", "0")
    with pytest.raises(BudgetExceeded):
        hs_double_complex(z4_extension())


def test_random_filtered_complexes_converge():
    for seed in range(25):
        cx, filt, hom = random_filtered_complex(seed)
        engine = SpectralSequence(cx, filt)
        for n in range(cx.max_degree):
            report = e_infinity_check(engine, n)
            assert report["homology"] == hom[n], (seed, n)
            assert report["ok"], (seed, n)


def test_random_complexes_page_consistency():
    for seed in (1, 2, 5, 11):
        cx, filt, _ = random_filtered_complex(seed)
        engine = SpectralSequence(cx, filt)
        for r in range(4):
            for n in range(cx.max_degree - 1):
                for p in range(n + 1):
                    assert engine.consistency_ok(r, p, n - p), (seed, r, p, n)


def test_random_generator_is_deterministic():
    a = complex_to_json(*random_filtered_complex(9)[:2])
    b = complex_to_json(*random_filtered_complex(9)[:2])
    assert a == b


def test_json_round_trip_all_fields():
    for seed in range(4):  # seeds rotate through the supported fields
        cx, filt, hom = random_filtered_complex(seed)
        doc = complex_to_json(cx, filt)
        cx2, filt2 = complex_from_json(doc)
        assert cx2.dims == cx.dims
        engine = SpectralSequence(cx2, filt2)
        for n in range(cx2.max_degree):
            assert e_infinity_check(engine, n)["homology"] == hom[n]


def test_complex_validation_rejects_broken_differential():
    f2 = FIELDS["F2"]
    with pytest.raises(InvariantViolation):
        FiniteComplex(f2, [1, 1, 1], [[1], [1]])  # d.d = identity != 0


def test_filtration_validation_rejects_unstable_levels():
    f2 = FIELDS["F2"]
    cx = FiniteComplex(f2, [1, 1], [[1]])  # d = identity
    with pytest.raises(InvariantViolation):
        # level 1 contains degree 0 but nothing in degree 1
        Filtration(cx, [[[1], [1]], [[1]]])


def test_report_is_convergent_and_ordered():
    report = sequence_report(CX, FILT)
    assert report["converged"]
    assert report["dims"] == CX.dims
    rs = [pg["r"] for pg in report["pages"]]
    assert rs == sorted(rs)
    for row in report["e_infinity"]:
        assert row["total"] == row["homology"] == 1
