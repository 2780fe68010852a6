# Copyright 2026 The sempol Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Reference ADF and Granger values from statsmodels for the LCG series used in test_stats.cpp.

Run: python3 stats_reference.py
"""
import numpy as np
from statsmodels.tsa.stattools import adfuller, grangercausalitytests

MASK = (1 << 64) - 1


def lcg_uniform(seed, n):
    x = seed
    out = []
    for _ in range(n):
        x = (6364136223846793005 * x + 1442695040888963407) & MASK
        out.append((x >> 11) * 2.0**-53 - 0.5)
    return np.array(out)


def series(n=132):
    u = lcg_uniform(1, n)
    v = lcg_uniform(2, n)
    ar = np.zeros(n)
    for t in range(n):
        ar[t] = (0.5 * ar[t - 1] if t else 0.0) + u[t]
    walk = np.cumsum(v)
    x = lcg_uniform(3, n)
    e = lcg_uniform(4, n)
    y = np.zeros(n)
    for t in range(n):
        y[t] = (0.6 * x[t - 2] if t >= 2 else 0.0) + 0.5 * e[t]
    w = lcg_uniform(5, n)
    ar2 = np.zeros(n)
    for t in range(n):
        ar2[t] = (1.2 * ar2[t - 1] if t >= 1 else 0.0) - (0.6 * ar2[t - 2] if t >= 2 else 0.0) + w[t]
    return ar, walk, x, y, ar2


def main():
    ar, walk, x, y, ar2 = series()
    for name, s in (("ar", ar), ("walk", walk), ("ar2", ar2)):
        stat, _, lag, nobs, crit, _ = adfuller(s, regression="c", autolag="AIC")
        print(f"{name}: stat={stat:.15g} lag={lag} nobs={nobs} crit={crit['1%']:.15g},{crit['5%']:.15g},{crit['10%']:.15g}")
    data = np.column_stack([y, x])
    res = grangercausalitytests(data, maxlag=4, verbose=False)
    for lag in range(1, 5):
        f, p, dfd, dfn = res[lag][0]["ssr_ftest"]
        print(f"granger lag={lag}: F={f:.15g} p={p:.15g} df=({dfn},{dfd})")


if __name__ == "__main__":
    main()
