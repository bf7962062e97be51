"""Independent reference values frozen into the C++ unit tests.

Run with `python3 tests/oracles/oracles.py`; the printed numbers are pasted
into tests/unit/*.cpp. Uses numpy and statsmodels only.
"""
import numpy as np
import statsmodels.api as sm


def efc_naive(m, iterations):
    m = np.asarray(m, dtype=float)
    f = np.ones(m.shape[0])
    q = np.ones(m.shape[1])
    out = []
    for _ in range(iterations):
        f_new = m @ q
        q_new = 1.0 / (m.T @ (1.0 / f))
        f, q = f_new / f_new.mean(), q_new / q_new.mean()
        out.append((f.copy(), q.copy()))
    return out


def show(name, arr):
    print(name, " ".join(f"{v:.17g}" for v in np.ravel(arr)))


print("# nested 2x2 efc, rows A={p1,p2}, B={p2}")
for n, (f, q) in enumerate(efc_naive([[1, 1], [0, 1]], 5), start=1):
    show(f"iter{n} F", f)
    show(f"iter{n} Q", q)

print("# 3x3 efc after 200 iterations, rows {a,b,c}, {a,b}, {b}... plus c")
m = [[1, 1, 1], [1, 1, 0], [0, 1, 1]]
f, q = efc_naive(m, 200)[-1]
show("F", f)
show("Q", q)

print("# five-point OLS")
x = np.array([1, 2, 3, 4, 5], dtype=float)
y = np.array([2, 2.5, 3.9, 4.1, 5.2])
X = sm.add_constant(x)
classical = sm.OLS(y, X).fit()
hc1 = sm.OLS(y, X).fit(cov_type="HC1")
show("beta", classical.params)
show("se_classical", classical.bse)
show("se_hc1", hc1.bse)
show("p_hc1", hc1.pvalues)
show("r2 adj_r2", [classical.rsquared, classical.rsquared_adj])
show("llf aic bic", [classical.llf, classical.aic, classical.bic])
show("f f_p", [classical.fvalue, classical.f_pvalue])
show("hc1 f f_p", [hc1.fvalue, hc1.f_pvalue])

# Normal equations + sandwich by hand, as a cross-check of statsmodels.
xtx_inv = np.linalg.inv(X.T @ X)
b = xtx_inv @ X.T @ y
e = y - X @ b
n, k = X.shape
meat = (X * e[:, None]).T @ (X * e[:, None])
show("se_hc1_by_hand", np.sqrt(np.diag(xtx_inv @ meat @ xtx_inv) * n / (n - k)))

print("# two clusters")
xc = np.array([0.0, 1.0, 2.0, 3.0, 0.5, 1.5, 2.5, 3.5])
yc = np.array([1.0, 2.9, 5.2, 6.8, 2.1, 3.7, 6.2, 7.9])
g = np.array([0, 0, 0, 0, 1, 1, 1, 1])
Xc = sm.add_constant(xc)
cl = sm.OLS(yc, Xc).fit(cov_type="cluster", cov_kwds={"groups": g})
show("beta", cl.params)
show("se_cluster", cl.bse)
show("cov_cluster", cl.cov_params())
show("p_cluster", cl.pvalues)
xtx_inv = np.linalg.inv(Xc.T @ Xc)
e = yc - Xc @ cl.params
meat = np.zeros((2, 2))
for gid in (0, 1):
    s = Xc[g == gid].T @ e[g == gid]
    meat += np.outer(s, s)
n, k, G = 8, 2, 2
show("cov_by_hand", xtx_inv @ meat @ xtx_inv * G / (G - 1) * (n - 1) / (n - k))

print("# type-7 quantiles")
sample = np.array([7.0, 1.0, 3.0, 3.0, 10.0, -2.0, 4.5])
show("q25 q50 q75 q90", np.quantile(sample, [0.25, 0.5, 0.75, 0.9]))

print("# t-based p-values (df = n - k for HC1, G - 1 for clusters)")
from scipy import stats

t = np.array([1.14, 0.8]) / np.array([0.19595917942265409, 0.048989794855663585])
show("p_hc1_t", 2 * stats.t.sf(np.abs(t), 3))
show("f_hc1 p", [t[1] ** 2, stats.f.sf(t[1] ** 2, 1, 3)])
t = cl.params / cl.bse
show("p_cluster_t", 2 * stats.t.sf(np.abs(t), 1))
