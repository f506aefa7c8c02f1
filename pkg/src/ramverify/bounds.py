"""Real-valued bound functions in binary64.

Every function accepts a float or a numpy array.  ``loglog`` means the
iterated logarithm log(log x), never a base-2 log.  Evaluating outside a
domain raises :class:`DomainError` instead of letting NaN leak into a sweep.

Notation: ``L``/``U`` are Dusart's lower/upper bounds for the k-th prime,
``f = U - L``, ``F(x, n) = U(x) - 2 L(x - n)``, ``alpha(n) = 2n (1 + 1/g(n))``
and ``G(n) = F(alpha(n), n)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import jexpr
from .errors import DomainError, ParameterViolation

LOG2 = math.log(2.0)
COROLLARY_J = "log(log(n)) - log(2) - 0.5"


def _ret(v):
    return float(v) if np.ndim(v) == 0 else v


def log(x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("log needs x > 0")
    return np.log(x)


def loglog(x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 1):
        raise DomainError("log log needs x > 1")
    return np.log(np.log(x))


@dataclass(frozen=True)
class BoundParams:
    """epsilon = epsilon1 + epsilon2, plus the shape function j(n).

    ``preset=True`` is the corollary instance; its j(n) and j'(n) use closed
    forms.  Otherwise ``j_text`` is parsed and differentiated numerically.
    """

    epsilon: float = 0.5
    epsilon1: float = 0.1
    epsilon2: float = 0.4
    j_text: str = COROLLARY_J
    preset: bool = True
    j_expr: jexpr.ExprNode = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("epsilon", "epsilon1", "epsilon2"):
            if not getattr(self, name) > 0:
                raise ParameterViolation(f"{name} must be positive")
        if abs(self.epsilon1 + self.epsilon2 - self.epsilon) > 1e-12:
            raise ParameterViolation("epsilon1 + epsilon2 must equal epsilon")
        object.__setattr__(self, "j_expr", jexpr.parse(self.j_text))

    @classmethod
    def corollary(cls) -> "BoundParams":
        return cls()

    @classmethod
    def custom(cls, epsilon: float, j_text: str, epsilon1: float | None = None) -> "BoundParams":
        """Custom j; epsilon is split 1:4 between epsilon1/epsilon2 unless given."""
        e1 = epsilon / 5 if epsilon1 is None else epsilon1
        return cls(epsilon, e1, epsilon - e1, j_text, preset=False)

    def as_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "epsilon1": self.epsilon1,
            "epsilon2": self.epsilon2,
            "j": self.j_text,
        }

    def j(self, n):
        if self.preset:
            return _ret(loglog(n) - LOG2 - 0.5)
        return _ret(np.asarray(jexpr.evaluate(self.j_expr, np.asarray(n, dtype=float)), float))

    def j_prime(self, n):
        if self.preset:
            n = np.asarray(n, dtype=float)
            return _ret(1.0 / (n * log(n)))
        return jexpr.derivative_est(self.j_expr, np.asarray(n, dtype=float))


def L(k):
    lk, llk = log(k), loglog(k)
    return _ret(k * (lk + llk - 1 + (llk - 2.1) / lk))


def U(k):
    lk, llk = log(k), loglog(k)
    return _ret(k * (lk + llk - 1 + (llk - 2.0) / lk))


def _log_gt1(x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 1):
        raise DomainError("needs x > 1")
    return np.log(x)


def f(x):
    return _ret(0.1 * np.asarray(x, dtype=float) / _log_gt1(x))


def f_prime(x):
    lx = _log_gt1(x)
    return _ret(0.1 * (lx - 1) / lx**2)


def F(x, n):
    return _ret(U(x) - 2 * np.asarray(L(np.asarray(x, dtype=float) - n)))


def U_prime(x):
    lx, llx = log(x), loglog(x)
    return _ret(lx + llx - 1 / lx + 3 / lx**2 - llx / lx**2 + llx / lx)


def L_prime(x):
    lx, llx = log(x), loglog(x)
    return _ret(lx + llx + llx / lx - llx / lx**2 - 1.1 / lx + 3.1 / lx**2)


def g(n, p: BoundParams):
    if np.any(np.asarray(n) < 2):
        raise DomainError("g needs n >= 2")
    jn = np.asarray(p.j(n))
    if np.any(jn <= 0):
        raise ParameterViolation("j(n) must be positive")
    return _ret((log(n) + jn) / (LOG2 + p.epsilon))


def g_prime(n, p: BoundParams):
    n = np.asarray(n, dtype=float)
    return _ret((1 / n + np.asarray(p.j_prime(n))) / (LOG2 + p.epsilon))


def alpha(n, p: BoundParams):
    gn = np.asarray(g(n, p))
    if np.any(gn < 1):
        raise ParameterViolation("g(n) >= 1 is required to form alpha")
    return _ret(2 * np.asarray(n, dtype=float) * (1 + 1 / gn))


def _alpha_minus_n(n, p):
    a = np.asarray(alpha(n, p))
    am = a - np.asarray(n, dtype=float)
    if np.any(am <= 1):
        raise DomainError("alpha(n) - n must exceed 1")
    return a, am


def G(n, p: BoundParams):
    a, am = _alpha_minus_n(n, p)
    return _ret(U(a) - 2 * np.asarray(L(am)))


def A(n, p: BoundParams):
    a, am = _alpha_minus_n(n, p)
    return _ret(np.asarray(U_prime(a)) - U_prime(am))


def n_over_g_prime(n, p: BoundParams):
    """d/dn (n / g(n)) = 1/g - n g'/g^2."""
    gn = np.asarray(g(n, p))
    return _ret(1 / gn - np.asarray(n, dtype=float) * np.asarray(g_prime(n, p)) / gn**2)


def G_prime_formula(n, p: BoundParams):
    """Closed-form G'(n) = 2[A + f'(a-n) + (n/g)' (A - U'(a-n) + 2 f'(a-n))]."""
    a, am = _alpha_minus_n(n, p)
    big_a = np.asarray(U_prime(a)) - U_prime(am)
    fp = np.asarray(f_prime(am))
    q = np.asarray(n_over_g_prime(n, p))
    return _ret(2 * (big_a + fp + q * (big_a - np.asarray(U_prime(am)) + 2 * fp)))


def central_difference(func, x: float, rel_step: float = 1e-5) -> float:
    h = x * rel_step
    return (func(x + h) - func(x - h)) / (2 * h)
