"""Smoke test for the pydlasso extension module.

Build and run from the repository root:

    cargo build -p dlasso-python --features extension-module --release
    cp target/release/libpydlasso.so python/pydlasso.so
    python3 python/smoke_test.py
"""

import math
import random

import pydlasso


def make_data(n=50, seed=3):
    rng = random.Random(seed)
    rows, y = [], []
    for _ in range(n):
        x = [rng.gauss(0.0, 1.0) for _ in range(6)]
        rows.append(x)
        y.append(2.0 * x[0] - 1.0 * x[2] + 0.5 * rng.gauss(0.0, 1.0))
    return pydlasso.Dataset(rows, y, feature_names=[f"v{j}" for j in range(6)])


def main():
    assert abs(pydlasso.erf(1.0) - math.erf(1.0)) < 1e-15
    assert pydlasso.penalty(0.0, 0.1) == 0.0
    gap, bound = pydlasso.gap_bound(0.05, 0.1)
    assert 0.0 <= gap <= bound
    assert abs(pydlasso.penalty_hess(0.0, pydlasso.RIDGE_LIKE_S) - 2.0) < 1e-12
    assert abs(pydlasso.threshold(3.0, 1.0, 0.01) - 2.5) < 1e-3

    data = make_data()
    assert (data.n, data.p) == (50, 6)

    res = pydlasso.fit(data, 5.0, s=0.01)
    assert res.converged
    assert "v0" in res.active_set and "v2" in res.active_set
    assert res.df_count == len(res.active_set)

    ols = pydlasso.fit_baseline(data, "ols")
    lam0 = pydlasso.fit(data, 0.0, s=0.5)
    assert max(abs(a - b) for a, b in zip(ols, lam0.beta)) < 1e-8
    assert abs(data.rss(ols) - data.rss(lam0.beta)) < 1e-8

    best_lambda, best_s, rows = pydlasso.tune(data, "bic", lambdas=[0.1, 1.0, 10.0], s_values=[0.01, 1.0])
    assert len(rows) == 6
    assert best_lambda in (0.1, 1.0, 10.0) and best_s in (0.01, 1.0)

    sim = pydlasso.simulate(1, replicates=2, seed=7, methods=["lasso", "ols"], folds=5)
    assert len(sim) == 4 and all(r[-1] for r in sim)

    try:
        pydlasso.fit(data, 1.0, s=-1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative s accepted")

    print("pydlasso smoke test passed:", res)


if __name__ == "__main__":
    main()
