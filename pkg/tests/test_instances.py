import itertools

import pytest

from mbsp import graph as G
from mbsp import instances as I

DENSITIES = (0.25, 0.5, 0.75)
NEG_RATIOS = (0.5, 1.0, 2.0)
PARALLEL_FRACS = (0.25, 0.5, 0.75)


def half_up(x):
    import math

    return math.floor(x + 0.5)


def expected_m(n, d):
    return half_up(d * n * (n - 1) / 2)


def test_spec_validation():
    with pytest.raises(ValueError):
        I.RandomSpec(10, 0.5, seed=0)  # neither group parameter
    with pytest.raises(ValueError):
        I.RandomSpec(10, 0.5, seed=0, neg_ratio=1.0, parallel_frac=0.5)  # both


def test_group_property():
    assert I.RandomSpec(10, 0.5, seed=0, neg_ratio=1.0).group == 1
    assert I.RandomSpec(10, 0.5, seed=0, parallel_frac=0.5).group == 2


def test_group1_counts_on_grid():
    for n in (10, 20, 50):
        for d in DENSITIES:
            for r in NEG_RATIOS:
                g = I.generate(I.RandomSpec(n, d, seed=1, neg_ratio=r))
                m = expected_m(n, d)
                assert g.m == m
                assert len(g.e_minus) == half_up(m * r / (1 + r))
                assert not g.e_parallel


def test_group2_counts_on_grid():
    for n in (10, 20, 50):
        for d in DENSITIES:
            for f in PARALLEL_FRACS:
                g = I.generate(I.RandomSpec(n, d, seed=1, parallel_frac=f))
                m = expected_m(n, d)
                assert len(g.e_plus | g.e_minus) == m  # distinct pairs
                assert len(g.e_parallel) == half_up(m * f)


def test_reference_counts():
    g = I.generate(I.RandomSpec(50, 0.25, seed=1, neg_ratio=1.0))
    assert g.m == 306
    assert len(g.e_minus) == 153
    g = I.generate(I.RandomSpec(4, 1.0, seed=0, neg_ratio=0.5))
    assert g.m == 6
    assert len(g.e_minus) == 2


def test_generate_deterministic_per_seed():
    spec = I.RandomSpec(20, 0.5, seed=7, parallel_frac=0.5)
    assert I.generate(spec) == I.generate(spec)
    other = I.RandomSpec(20, 0.5, seed=8, parallel_frac=0.5)
    assert I.generate(spec) != I.generate(other)


def test_generate_balanced_is_balanced_and_full():
    for seed in range(5):
        g = I.generate_balanced(30, 0.4, seed=seed)
        assert G.is_balanced(g) is not None
        assert g.m == expected_m(30, 0.4)


def test_roundtrip_through_text():
    g = I.generate(I.RandomSpec(12, 0.5, seed=3, parallel_frac=0.5))
    h = I.parse_instance(I.format_instance(g))
    assert h.n == g.n and set(h.edges) == set(g.edges)


def test_roundtrip_through_file(tmp_path):
    g = I.generate(I.RandomSpec(9, 0.6, seed=1, neg_ratio=2.0))
    path = tmp_path / "x.mbsp"
    I.write(g, path)
    h = I.read(path)
    assert h.n == g.n and set(h.edges) == set(g.edges)


def test_parse_accepts_comments_and_blank_lines():
    text = "c a comment\n\np mbsp 3 2\nc another\ne 1 2 +\ne 2 3 -\n"
    g = I.parse_instance(text)
    assert g.n == 3
    assert g.edges == ((0, 1, "+"), (1, 2, "-"))


@pytest.mark.parametrize(
    "text",
    [
        "e 1 2 +\n",  # edge before header
        "p mbsp 3 1\ne 1 4 +\n",  # vertex out of range
        "p mbsp 3 1\ne 1 2 *\n",  # bad sign
        "p mbsp 3 2\ne 1 2 +\n",  # edge count mismatch
        "p mbsp x 1\ne 1 2 +\n",  # bad header
        "p mbsp 3 1\nq 1 2 +\n",  # unknown record
    ],
)
def test_parse_rejects_malformed(text):
    with pytest.raises(I.ParseError):
        I.parse_instance(text)


def test_parse_error_reports_line_number():
    try:
        I.parse_instance("p mbsp 3 1\ne 1 9 +\n")
    except I.ParseError as e:
        assert e.line_no == 2
    else:
        pytest.fail("expected ParseError")


def brute_oracle(g):
    """Independent maximum balanced subset size by direct subset checking."""
    best = 0
    for k in range(g.n, 0, -1):
        for sub in itertools.combinations(range(g.n), k):
            sg, _ = G.induced(g, sub)
            if G.is_balanced(sg) is not None:
                return k
    return best


def test_brute_force_matches_direct_enumeration():
    for seed in range(4):
        for spec in (
            I.RandomSpec(7, 0.6, seed=seed, neg_ratio=1.0),
            I.RandomSpec(7, 0.6, seed=seed, parallel_frac=0.5),
        ):
            g = I.generate(spec)
            opt, p = I.brute_force(g)
            assert opt == brute_oracle(g)
            assert G.is_feasible(g, p)
            assert p.size() == opt


def test_brute_force_cap():
    g = I.generate(I.RandomSpec(21, 0.3, seed=0, neg_ratio=1.0))
    with pytest.raises(ValueError):
        I.brute_force(g)
