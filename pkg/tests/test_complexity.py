import pytest

from hbfkit.complexity import FlopModel, complexity_table, flops, reduction_vs_lsaa, scaled_model


def test_proposed_base():
    assert flops(FlopModel("proposed", 8, 1)) == 64


def test_lsaa_fast_base():
    assert flops(FlopModel("lsaa_fast", 8, 1, n_iter=10)) == 640


def test_lsaa_hand_arithmetic():
    assert flops(FlopModel("lsaa", 72, 9)) == 9 * 72**3 + 81 * 72**2 + 9**4 == 3_785_697


def test_scaling_rule():
    m = scaled_model("proposed", 9)
    assert (m.n, m.n_rf) == (72, 9)


@pytest.mark.parametrize("kw", [dict(algorithm="svd", n=8, n_rf=1), dict(algorithm="lsaa", n=0, n_rf=1),
                                dict(algorithm="lsaa_fast", n=8, n_rf=1, n_iter=0)])
def test_invalid_model(kw):
    with pytest.raises(ValueError):
        FlopModel(**kw)


def test_reduction_exact_fraction():
    # L = 9: 1 - 46656 / 3785697
    assert reduction_vs_lsaa("proposed", 9) == pytest.approx(1 - 46656 / 3785697, rel=1e-15)
    assert reduction_vs_lsaa("lsaa", 5) == 0.0


def test_reduction_monotone():
    vals = [reduction_vs_lsaa("proposed", L) for L in range(1, 64)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("L", range(2, 40))
def test_orderings(L):
    assert reduction_vs_lsaa("proposed", L) > reduction_vs_lsaa("lsaa_fast", L)
    # lsaa_fast stays below lsaa while N_iter is smaller than the antenna count
    for n_iter in range(2, 8 * L, max(1, L)):
        p = flops(scaled_model("proposed", L, n_iter))
        f = flops(scaled_model("lsaa_fast", L, n_iter))
        s = flops(scaled_model("lsaa", L, n_iter))
        assert p < f < s


def test_table_shape():
    rows = complexity_table(31)
    assert len(rows) == 93
    assert {r[1] for r in rows} == {"proposed", "lsaa", "lsaa_fast"}
