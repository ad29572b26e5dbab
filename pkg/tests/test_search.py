import math
import random

import numpy as np
import pytest
import sympy

from nawelch.classical import bounds_table, coherence, welch_sum_lhs
from nawelch.errors import InvalidArgs
from nawelch.linalg import inner
from nawelch.scalar import ONE, T, Scalar
from nawelch.search import (
    GeneratorSet,
    SearchParams,
    classical_search,
    na_candidates,
    na_circle_point,
    na_search,
    na_sphere_point,
    random_parameter,
    random_unit_config,
    sic_construct_d2,
)
from nawelch.welch import equiangular_check

from conftest import rand_scalar, sympy_valuation, t_sym, to_sympy


def test_sic_construction():
    sic = sic_construct_d2()
    assert (sic.n, sic.d) == (4, 2)
    assert abs(coherence(sic) ** 2 - 1 / 3) < 1e-12
    assert abs(welch_sum_lhs(sic, 1) - 8) < 1e-9


def test_circle_point_examples():
    assert na_circle_point(Scalar(0)) == (ONE, Scalar(0))
    assert na_circle_point(Scalar.parse("1/2")) == (Scalar.parse("3/5"), Scalar.parse("4/5"))
    v = na_circle_point(T)
    assert to_sympy(v[0]) == sympy.cancel((1 - t_sym**2) / (1 + t_sym**2))
    assert to_sympy(v[1]) == sympy.cancel(2 * t_sym / (1 + t_sym**2))
    assert inner(v, (ONE, Scalar(0))).valuation() == 0


def test_circle_points_exact_unit_norm(rng):
    for _ in range(100):
        s = rand_scalar(rng, -2, 3)
        v = na_circle_point(s)
        assert inner(v, v) == ONE
        # sympy recomputation of the squared norm
        assert sympy.cancel(sum(to_sympy(x) ** 2 for x in v) - 1) == 0


def test_sphere_points_exact_unit_norm(rng):
    for d in range(2, 5):
        for _ in range(10):
            v = na_sphere_point([random_parameter(rng) for _ in range(d - 1)])
            assert len(v) == d
            assert inner(v, v) == ONE


def test_random_unit_config_shapes(rng):
    for d in (1, 2, 3):
        cfg = random_unit_config(rng, 4, d)
        assert cfg.n == 4 and cfg.d == d
        assert all(inner(v, v) == ONE for v in cfg.vectors)


def test_generator_set_validation():
    assert GeneratorSet(("0", "1/2")).scalars == (Scalar(0), Scalar.parse("1/2"))
    with pytest.raises(InvalidArgs):
        GeneratorSet(())
    with pytest.raises(InvalidArgs):
        GeneratorSet(("1/2", Scalar.parse("2/4")))


def test_na_search_pythagorean_pair():
    hits = na_search(2, 2, GeneratorSet(("0", "1/2")), ONE, 0)
    configs = [h.config.vectors for h in hits]
    pair = ((ONE, Scalar(0)), (Scalar.parse("3/5"), Scalar.parse("4/5")))
    assert pair in configs


def test_na_search_single_generator_empty():
    assert na_search(2, 2, GeneratorSet(("0",)), ONE, 0) == []


def test_na_search_d1_base_case():
    hits = na_search(1, 1, GeneratorSet(("1/2", "t")), ONE, 0)
    assert hits
    for h in hits:
        assert h.config.n == 1 and inner(h.config.vectors[0], h.config.vectors[0]) == ONE
        assert h.zauner is not None and h.zauner.satisfied


GEN_CASES = [
    (2, 3, ("0", "1/2", "2", "t", "1+t", "1/3"), "1", 0),
    (2, 3, ("0", "t", "t^2", "1/2", "2*t"), "1", 0),
    (2, 4, ("0", "1", "-1", "1/2", "t", "3"), "1", 2),
    (3, 3, ("0", "1", "-1", "t"), "1", 0),
    (3, 3, ("0", "1", "-1", "t"), "2", 0),
    (1, 2, ("1", "-1", "t"), "1", 0),
]


@pytest.mark.parametrize("d, n_max, gens, a, gamma_v", GEN_CASES)
def test_na_search_results_reverified(d, n_max, gens, a, gamma_v):
    a = Scalar.parse(a)
    hits = na_search(d, n_max, GeneratorSet(gens), a, gamma_v)
    for h in hits:
        cfg = h.config
        assert 1 <= cfg.n <= n_max and cfg.d == d
        assert equiangular_check(cfg, a, gamma_v)
        # independent recheck through sympy
        for v in cfg.vectors:
            assert sympy.cancel(sum(to_sympy(x) ** 2 for x in v) - to_sympy(a)) == 0
        for j in range(cfg.n):
            for k in range(j + 1, cfg.n):
                ip = sum(to_sympy(x) * to_sympy(y) for x, y in zip(cfg.vectors[j], cfg.vectors[k]))
                assert 2 * sympy_valuation(ip) == gamma_v
        assert (h.zauner is not None) == (cfg.n == d * d)


def test_na_search_is_exhaustive_over_pairs():
    gen = GeneratorSet(("0", "1/2", "2", "t", "1/3"))
    cands = na_candidates(2, gen, ONE)
    hits = na_search(2, 2, gen, ONE, 0)
    found = {h.config.vectors for h in hits}
    for i in range(len(cands)):
        for j in range(i + 1, len(cands)):
            pair = (cands[i], cands[j])
            assert (pair in found) == equiangular_check(pair, ONE, 0)


def test_na_search_deterministic():
    gen = GeneratorSet(("0", "1/2", "2", "t", "1+t"))
    a = [h.config for h in na_search(2, 3, gen, ONE, 0)]
    b = [h.config for h in na_search(2, 3, gen, ONE, 0)]
    assert a == b


def test_search_params_validation():
    with pytest.raises(InvalidArgs):
        SearchParams(d=2, n=2)
    with pytest.raises(InvalidArgs):
        SearchParams(d=2, n=3, trials=0)
    with pytest.raises(InvalidArgs):
        SearchParams(d=2, n=3, shrink=1.0)


def test_classical_search_deterministic():
    params = SearchParams(d=2, n=3, trials=4, steps=300, seed=7)
    r1 = classical_search(params, "r")
    r2 = classical_search(params, "r")
    assert r1.coherence == r2.coherence
    assert np.array_equal(r1.best.vectors, r2.best.vectors)


def test_classical_search_workers_do_not_change_result():
    params = SearchParams(d=2, n=3, trials=4, steps=200, seed=3)
    r1 = classical_search(params, "c", workers=1)
    r2 = classical_search(params, "c", workers=2)
    assert np.array_equal(r1.best.vectors, r2.best.vectors)


@pytest.mark.parametrize("d, n, field_tag", [(2, 3, "r"), (2, 4, "c"), (3, 4, "r"), (2, 5, "c"), (3, 7, "c")])
def test_classical_search_respects_bounds(d, n, field_tag):
    res = classical_search(SearchParams(d=d, n=n, trials=3, steps=300, seed=1), field_tag)
    assert res.best_bound == bounds_table(n, d, field_tag).best
    assert res.gap >= -1e-9
    assert abs(res.coherence - coherence(res.best)) < 1e-15
    norms = np.linalg.norm(res.best.vectors, axis=1)
    assert np.allclose(norms, 1, atol=1e-9)
    if field_tag == "r":
        assert not np.any(res.best.vectors.imag)


def test_classical_search_small_optimum():
    res = classical_search(SearchParams(d=2, n=3, trials=8, steps=1500, seed=0), "r")
    assert res.coherence <= 0.5 + 1e-3
