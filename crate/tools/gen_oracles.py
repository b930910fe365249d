"""Regenerates the arbitrary-precision fixtures under crates/core/tests/data.

Inputs are drawn as IEEE doubles; mpmath (60 digits) evaluates the exact
decimal value of each double, and the result is rounded to the nearest double.
"""
import os
import random

import mpmath as mp

mp.mp.dps = 60
OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "tests", "data")


def log_returns():
    rng = random.Random(20181115)
    prices = [rng.uniform(50.0, 150.0) for _ in range(1000)]
    with open(os.path.join(OUT, "log_returns_oracle.csv"), "w") as f:
        f.write("price,expected_return\n")
        f.write(f"{prices[0]!r},\n")
        for a, b in zip(prices, prices[1:]):
            r = mp.log(mp.mpf(b)) - mp.log(mp.mpf(a))
            f.write(f"{b!r},{float(r)!r}\n")


def moments():
    rng = random.Random(1959)
    xs = [rng.gauss(3.0, 2.0) for _ in range(10_000)]
    n = mp.mpf(len(xs))
    mean = mp.fsum(mp.mpf(x) for x in xs) / n
    var = mp.fsum((mp.mpf(x) - mean) ** 2 for x in xs) / n
    m3 = mp.fsum((mp.mpf(x) - mean) ** 3 for x in xs) / n
    m4 = mp.fsum((mp.mpf(x) - mean) ** 4 for x in xs) / n
    with open(os.path.join(OUT, "moments_oracle.csv"), "w") as f:
        f.write(f"# mean={float(mean)!r} variance={float(var)!r} "
                f"skew={float(m3 / var ** mp.mpf(1.5))!r} kurt={float(m4 / var**2 - 3)!r}\n")
        for x in xs:
            f.write(f"{x!r}\n")


def normal_quantiles():
    ps = [1e-300, 1e-100, 1e-20, 1e-10, 1e-6, 0.001, 0.005, 0.01, 0.025, 0.05,
          0.1, 0.2, 0.3, 0.4, 0.425, 0.45, 0.5, 0.55, 0.575, 0.6, 0.75, 0.9,
          0.95, 0.975, 0.99, 0.995, 0.999, 1 - 1e-6, 1 - 1e-10]
    with open(os.path.join(OUT, "normal_quantiles.csv"), "w") as f:
        f.write("p,quantile\n")
        for p in ps:
            pm = mp.mpf(p)
            if pm < 0.5:
                # erfc form keeps the extreme lower tail exact
                q = mp.findroot(lambda x: mp.log(mp.erfc(-x / mp.sqrt(2)) / 2) - mp.log(pm),
                                -mp.sqrt(2) * mp.erfinv(1 - 2 * mp.mpf(max(p, 1e-15))))
            else:
                q = mp.sqrt(2) * mp.erfinv(2 * pm - 1)
            f.write(f"{p!r},{float(q)!r}\n")


if __name__ == "__main__":
    log_returns()
    moments()
    normal_quantiles()
