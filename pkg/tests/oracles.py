"""Independent reference computations used by the tests.

Nothing here imports the package's likelihood code: the dense Gaussian
oracle builds the full autocovariance matrix from the ARMA autocovariance
equations and evaluates the multivariate normal density by Cholesky
factorization.
"""
import math

import numpy as np
from scipy.linalg import cho_factor, cho_solve, toeplitz


def arma_autocov(ar, ma, sigma2, nlags):
    """Autocovariances gamma(0..nlags-1) of 1-ar(B) x = (1+ma(B)) e."""
    ar = np.asarray(ar, dtype=float)
    ma = np.asarray(ma, dtype=float)
    p, q = len(ar), len(ma)
    theta = np.r_[1.0, ma]
    # psi weights of the MA(infinity) form, first q + 1 of them
    psi = np.zeros(q + 1)
    for j in range(q + 1):
        psi[j] = theta[j] + sum(ar[i - 1] * psi[j - i] for i in range(1, min(j, p) + 1))
    m = max(p, q)
    # gamma(k) - sum_i ar_i gamma(|k - i|) = sigma2 * sum_{j>=k} theta_j psi_{j-k}
    A = np.zeros((m + 1, m + 1))
    b = np.zeros(m + 1)
    for k in range(m + 1):
        A[k, k] += 1.0
        for i in range(1, p + 1):
            A[k, abs(k - i)] -= ar[i - 1]
        b[k] = sigma2 * sum(theta[j] * psi[j - k] for j in range(k, q + 1))
    g = list(np.linalg.solve(A, b))
    for k in range(m + 1, nlags):
        g.append(sum(ar[i - 1] * g[k - i] for i in range(1, p + 1)))
    return np.array(g[:nlags]) if nlags <= len(g) else np.array(g)


def dense_loglik(z, ar, ma, sigma2):
    z = np.asarray(z, dtype=float)
    n = len(z)
    gamma = arma_autocov(ar, ma, sigma2, max(n, 1))[:n]
    cov = toeplitz(gamma)
    c, low = cho_factor(cov, lower=True)
    logdet = 2.0 * np.sum(np.log(np.diag(c)))
    quad = z @ cho_solve((c, low), z)
    return -0.5 * (n * math.log(2 * math.pi) + logdet + quad)


def random_stationary(rng, k, bound=0.9):
    """Coefficients of a stationary polynomial via random partial autocorrelations.

    Uses its own Durbin-Levinson step so it does not depend on the package.
    """
    pacf = rng.uniform(-bound, bound, k)
    coef = np.zeros(0)
    for a in pacf:
        coef = np.r_[coef - a * coef[::-1], a]
    return coef
