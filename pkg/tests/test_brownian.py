import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greenlab.brownian import (
    BrownianPath,
    derive_seed,
    deterministic_path,
    increments,
    linear_path,
    piecewise_linear,
    read_path,
    restrict,
    sample_brownian,
    zero_path,
)
from greenlab.errors import PathError, ResolutionError
from greenlab.grid import make_grid


@given(st.integers(min_value=0, max_value=2**64 - 1))
@settings(max_examples=30)
def test_sampled_path_starts_at_zero(seed):
    assert sample_brownian(make_grid(16), seed).values[0] == 0.0


def test_sampling_is_bit_reproducible():
    g = make_grid(500)
    a, b = sample_brownian(g, 123), sample_brownian(g, 123)
    assert a.values.tobytes() == b.values.tobytes()
    assert sample_brownian(g, 124).values.tobytes() != a.values.tobytes()


def test_endpoint_moments():
    # B(1) ~ N(0, 1): standard errors are 1/sqrt(N) and sqrt(2/N)
    g = make_grid(100)
    b1 = np.array([sample_brownian(g, s).values[-1] for s in range(100_000)])
    assert abs(b1.mean()) <= 0.02
    assert abs((b1**2).mean() - 1.0) <= 0.02


def test_variance_scaling():
    g = make_grid(100)
    paths = np.array([sample_brownian(g, 10_000 + s).values for s in range(10_000)])
    for t in (0.25, 0.5, 1.0):
        var = paths[:, int(round(t * 100))].var(ddof=1)
        assert abs(var - t) <= 0.05 * t


def test_increments_independent_with_variance_step():
    g = make_grid(50)
    inc = np.array([increments(sample_brownian(g, s)) for s in range(4000)])
    np.testing.assert_allclose(inc.var(axis=0, ddof=1).mean(), g.step, rtol=0.02)
    corr = np.corrcoef(inc[:, 10], inc[:, 11])[0, 1]
    assert abs(corr) < 0.06


def test_derived_seeds_distinct_and_stable():
    seeds = [derive_seed(7, i) for i in range(1000)]
    assert len(set(seeds)) == 1000
    assert derive_seed(7, 3) == seeds[3]
    assert derive_seed(8, 3) != seeds[3]


def test_piecewise_linear_matches_at_coarse_nodes():
    p = sample_brownian(make_grid(64), 5)
    q = piecewise_linear(p, 8)
    np.testing.assert_array_equal(q.values[::8], p.values[::8])


def test_piecewise_linear_formula():
    # B_m(x) = m[((j+1)/m - x) B(j/m) + (x - j/m) B((j+1)/m)] on [j/m, (j+1)/m]
    g = make_grid(60)
    p = sample_brownian(g, 9)
    m = 12
    q = piecewise_linear(p, m)
    for i, x in enumerate(g.nodes):
        j = min(int(np.floor(x * m + 1e-12)), m - 1)
        bj, bj1 = p.values[j * 5], p.values[(j + 1) * 5]
        expected = m * (((j + 1) / m - x) * bj + (x - j / m) * bj1)
        assert q.values[i] == pytest.approx(expected, abs=1e-13)


def test_piecewise_linear_identity_and_lines():
    g = make_grid(40)
    p = sample_brownian(g, 1)
    np.testing.assert_array_equal(piecewise_linear(p, 40).values, p.values)
    line = linear_path(g, 2.5)
    for m in (1, 2, 5, 40):
        np.testing.assert_allclose(piecewise_linear(line, m).values, line.values, atol=1e-15)


def test_piecewise_linear_resolution_error():
    with pytest.raises(ResolutionError):
        piecewise_linear(sample_brownian(make_grid(10), 0), 3)


def test_piecewise_linear_converges():
    g = make_grid(1024)
    ms = (16, 32, 64, 128, 256, 512)
    med = []
    for m in ms:
        med.append(np.median([np.max(np.abs(piecewise_linear(sample_brownian(g, s), m).values
                                            - sample_brownian(g, s).values)) for s in range(100)]))
    assert all(a > b for a, b in zip(med, med[1:]))


def test_deterministic_paths():
    g = make_grid(10)
    np.testing.assert_array_equal(deterministic_path(g, "zero").values, 0.0)
    assert linear_path(g, 4.0).values[5] == 2.0
    with pytest.raises(PathError):
        deterministic_path(g, "from_samples", values=[0.1] + [0.0] * 10)
    ok = deterministic_path(g, "from_samples", values=np.linspace(0, 1, 11))
    assert ok.values[-1] == 1.0
    with pytest.raises(PathError):
        deterministic_path(g, "bogus")


def test_increments_examples():
    g = make_grid(20)
    np.testing.assert_array_equal(increments(zero_path(g)), 0.0)
    np.testing.assert_allclose(increments(linear_path(g, 3.0)), 3.0 * g.step, rtol=1e-12)
    p = sample_brownian(g, 4)
    assert increments(p).sum() == pytest.approx(p.values[-1], abs=1e-14)
    assert len(increments(p)) == g.n


def test_restrict_subsamples():
    p = sample_brownian(make_grid(40), 2)
    q = restrict(p, 10)
    assert q.grid.n == 10
    np.testing.assert_array_equal(q.values, p.values[::4])
    with pytest.raises(ResolutionError):
        restrict(p, 7)


def test_path_csv_roundtrip(tmp_path):
    p = sample_brownian(make_grid(33), 77)
    p.to_csv(tmp_path / "p.csv")
    assert (tmp_path / "p.csv").read_text().startswith("x,B\n")
    q = read_path(tmp_path / "p.csv")
    assert q.grid.n == 33
    np.testing.assert_array_equal(q.values, p.values)


def test_path_csv_rejects_nonzero_start(tmp_path):
    f = tmp_path / "bad.csv"
    f.write_text("x,B\n0,0.1\n0.5,0.2\n1,0.3\n")
    with pytest.raises(PathError):
        read_path(f)


def test_path_is_immutable():
    p = sample_brownian(make_grid(4), 0)
    with pytest.raises(ValueError):
        p.values[1] = 3.0
    with pytest.raises(PathError):
        BrownianPath(make_grid(4), [0.0, 1.0])
