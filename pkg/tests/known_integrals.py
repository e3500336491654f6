"""Known-answer integral suite shared by the quadrature and acceptance tests.

Twenty 1-D integrals with closed-form truth values, spanning polynomial,
Gaussian, oscillatory, mildly singular and semi-infinite integrands.
Each entry: (label, integrand, lower, upper, truth, decay_class).
"""

import math

from scipy.special import exp1

INF = math.inf

KNOWN_INTEGRALS = [
    ("poly_2x", lambda x: 2.0 * x, 0.0, 1.0, 1.0, None),
    ("poly_cubic", lambda x: x**3 - x, 0.0, 2.0, 2.0, None),
    ("cosine", math.cos, 0.0, math.pi / 2.0, 1.0, None),
    ("sine_full", math.sin, 0.0, math.pi, 2.0, None),
    ("exp_decay", lambda x: math.exp(-x), 0.0, 1.0, 1.0 - math.exp(-1.0), None),
    ("runge", lambda x: 1.0 / (1.0 + 25.0 * x * x), -1.0, 1.0, 0.4 * math.atan(5.0), None),
    ("log_sing", lambda x: math.log(x) if x > 0 else 0.0, 0.0, 1.0, -1.0, None),
    ("sqrt_sing", lambda x: 1.0 / math.sqrt(x) if x > 0 else 0.0, 0.0, 1.0, 2.0, None),
    ("osc_50", lambda x: math.cos(50.0 * x), 0.0, 1.0, math.sin(50.0) / 50.0, None),
    ("gauss_finite", lambda x: math.exp(-(x**2)), -3.0, 3.0, math.sqrt(math.pi) * math.erf(3.0), None),
    ("lorentz", lambda x: 1.0 / (1.0 + x * x), -5.0, 5.0, 2.0 * math.atan(5.0), None),
    ("abs_kink", abs, -1.0, 2.0, 2.5, None),
    ("exp_sin", lambda x: math.exp(x) * math.sin(x), 0.0, math.pi,
     0.5 * (math.exp(math.pi) + 1.0), None),
    ("gauss_moment1", lambda u: u * math.exp(-(u**2)), 0.0, INF, 0.5, "exponential"),
    ("gauss_moment3", lambda u: u**3 * math.exp(-(u**2)), 0.0, INF, 0.5, "exponential"),
    ("exp_tail", lambda u: math.exp(-2.0 * u), 0.0, INF, 0.5, "exponential"),
    ("alg_tail", lambda u: 1.0 / (1.0 + u) ** 3, 0.0, INF, 0.5, "algebraic"),
    ("alg_tail_sq", lambda u: 1.0 / (1.0 + u * u), 0.0, INF, math.pi / 2.0, "algebraic"),
    ("gauss_shift", lambda u: math.exp(-((u - 3.0) ** 2)), 0.0, INF,
     math.sqrt(math.pi) / 2.0 * (1.0 + math.erf(3.0)), "exponential"),
    # substitute s = u^2: (1/2) int_0^inf s e^{-s}/(s+c^2) ds
    #                   = (1/2)(1 - c^2 e^{c^2} E1(c^2)) with c^2 = 0.01
    ("tadpole_kernel", lambda u: u**3 * math.exp(-(u**2)) / (u * u + 0.01), 0.0, INF,
     0.5 * (1.0 - 0.01 * math.exp(0.01) * exp1(0.01)), "exponential"),
]
