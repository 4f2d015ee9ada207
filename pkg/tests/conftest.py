import numpy as np
import pytest
from scipy.integrate import quad


@pytest.fixture(scope="session")
def stable_exponent_oracle():
    """Independent quadrature of the one-sided stable characteristic
    exponent integral, used to pin the closed forms.

    The oscillatory tail goes through QUADPACK's weighted rules; the head
    and the centering mismatch are plain quadratures.
    """

    def oracle(alpha, theta):
        # the quadratic term of the cosine head is integrated in closed form
        # to keep the numeric part free of the r^(1-alpha) singularity
        hr, _ = quad(lambda r: (np.cos(theta * r) - 1.0 + 0.5 * (theta * r) ** 2)
                     * r ** (-alpha - 1.0), 0, 1, limit=400)
        hr -= 0.5 * theta * theta / (2.0 - alpha)
        hi, _ = quad(lambda r: (np.sin(theta * r) - theta * r) * r ** (-alpha - 1.0),
                     0, 1, limit=400)
        ci, _ = quad(lambda r: theta * r ** (2.0 - alpha) / (1 + r * r),
                     0, 1, limit=400)
        tr, _ = quad(lambda r: r ** (-alpha - 1.0), 1, np.inf,
                     weight="cos", wvar=theta)
        ti, _ = quad(lambda r: r ** (-alpha - 1.0), 1, np.inf,
                     weight="sin", wvar=theta)
        sr = -1.0 / alpha
        si, _ = quad(lambda r: -theta * r ** (-alpha) / (1 + r * r), 1, np.inf)
        return complex(hr + tr + sr, hi + ci + ti + si)

    return oracle


def radial_h(fn_r):
    """Lift a function of the radius to a function of points."""

    def h(x):
        return fn_r(np.sqrt((x * x).sum(axis=1)))

    return h
