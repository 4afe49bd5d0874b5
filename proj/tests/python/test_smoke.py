import math

import pytest

import lplab


def test_cantor_components_and_residual():
    s = lplab.cantor_triadic(2)
    assert s.component_count() == 4
    assert s.residual == pytest.approx(4 / 9)
    assert s.components()[0] == pytest.approx((0.0, 1 / 9))
    assert s.contains(0.0) and not s.contains(0.5)


def test_from_gaps_validation_maps_to_value_error():
    with pytest.raises(lplab.ValidationError):
        lplab.GapSet.from_gaps((0.0, 1.0), [(0.2, 0.4), (0.3, 0.5)])
    with pytest.raises(ValueError):
        lplab.cantor_triadic(-1)


def test_neighbourhood_and_box_counting():
    assert lplab.neighborhood_measure(lplab.GapSet.from_points([0.0, 1.0]), 0.1) == pytest.approx(0.4)
    fit = lplab.box_counting(lplab.cantor_triadic(10), [3.0 ** -n for n in range(1, 9)])
    assert fit["counts"] == [2 ** n for n in range(1, 9)]
    assert fit["slope"] == pytest.approx(math.log(2) / math.log(3))
    with pytest.raises(lplab.ReliabilityError):
        lplab.box_counting(lplab.cantor_triadic(2), [0.05, 0.01])


def test_splitting_and_chains():
    nu, subset, _ = lplab.max_splitting_subset(lplab.dyadic_set(0, 3), 0.5, 1.0, 8)
    assert nu == 3
    assert lplab.splits(subset, lplab.dyadic_set(0, 3))
    base, lengths = lplab.find_chain([0, 1, 2, 3], 2)
    assert base == 0 and sorted(lengths) == [1, 2]
    assert lplab.find_chain([0, 1, 2], 2) is None


def test_fourier_probes():
    assert lplab.lp_norm([(0, 1), (1, 1)], 1.0, 1 << 16) == pytest.approx(4 / math.pi, rel=1e-8)
    assert lplab.dirichlet_scaling(2.0, [16, 32, 64, 128])["exponent"] == pytest.approx(0.5)
    c1, c2 = lplab.frame_probe(lplab.dyadic_set(0, 8), 2.0, trials=5, M=512, seed=3)
    assert c1 == pytest.approx(1.0, abs=1e-9) and c2 == pytest.approx(1.0, abs=1e-9)
    assert 0 < lplab.khintchine_ratio([1.0] * 10, 1.0) <= 1
    assert lplab.binomial_norm(2.0) == pytest.approx(math.sqrt(2))
    growth = lplab.lemma4_growth([1, 20], 1.0)
    assert growth[-1] == pytest.approx((math.pi / (2 * math.sqrt(2))) ** 20)


def test_save_load_round_trip(tmp_path):
    s = lplab.cantor_triadic(3)
    path = str(tmp_path / "set.json")
    lplab.save_set(s, path)
    back = lplab.load_set(path)
    assert back.gaps == s.gaps
    assert back.window == s.window
    with pytest.raises(lplab.ValidationError, match="missing.json"):
        lplab.load_set(str(tmp_path / "missing.json"))


def test_run_config():
    report = lplab.run({"family": "cantor", "depth": 2, "analysis": "boxdim"})
    assert report["command"] == "thickness"
    assert report["result"]["slope"] == pytest.approx(0.63, abs=0.01)
    assert "timestamp" in report
    with pytest.raises(lplab.ValidationError, match="depth"):
        lplab.run({"family": "cantor", "depth": -1})
