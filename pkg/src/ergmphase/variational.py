"""Mean-field free energies: the scalar constant-density problem, the equal
parts multipartite ansatz, and the order parameter read off the winner.

The scalar problem maximizes beta1*u + beta2*u^k - I(u) over u in (0, 1) with
I(u) = (u ln u + (1-u) ln(1-u))/2. For beta2 < 0 the stationarity condition
has a unique root; a coarse grid brackets it (and flags multiple local maxima
when beta2 > 0) and bisection polishes it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, HypothesisError
from .graphs import Motif, Params, as_params

U_CLIP = 1e-12
GRID_POINTS = 1024


@dataclass(frozen=True)
class ScalarSolution:
    u_star: float
    value: float
    unique: bool


@dataclass(frozen=True)
class AnsatzComparison:
    er_value: float
    mp_value: float
    p_star: float
    winner: str  # "disordered" or "multipartite"
    order_parameter_C: float


def entropy_I(u: float) -> float:
    """(u ln u + (1-u) ln(1-u))/2 with the limit value 0 at the endpoints.
    Nonpositive, minimized at u = 1/2."""
    if not 0.0 <= u <= 1.0:
        raise DomainError(f"u must lie in [0,1], got {u}")
    a = u * math.log(u) if u > 0.0 else 0.0
    b = (1.0 - u) * math.log(1.0 - u) if u < 1.0 else 0.0
    return 0.5 * (a + b)


def logistic(x: float) -> float:
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _objective(u: float, beta1: float, beta2: float, k: int) -> float:
    return beta1 * u + beta2 * u**k - entropy_I(u)


def _stationarity(u: float, beta1: float, beta2: float, k: int) -> float:
    return beta1 + k * beta2 * u ** (k - 1) - 0.5 * math.log(u / (1.0 - u))


def solve_u_star(p, k: int) -> ScalarSolution:
    """Maximize the scalar objective on [0,1]: a 1024-point grid brackets the
    maximum (and counts separated local maxima), then bisection drives the
    stationarity residual below 1e-12 within the bracket."""
    p = as_params(p)
    if k < 2:
        raise DomainError(f"motif edge count k must be >= 2, got {k}")
    b1, b2 = p.beta1, p.beta2
    us = np.linspace(U_CLIP, 1.0 - U_CLIP, GRID_POINTS)
    with np.errstate(all="ignore"):
        f = b1 * us + b2 * us**k - 0.5 * (us * np.log(us) + (1.0 - us) * np.log(1.0 - us))
    interior = (f[1:-1] > f[:-2]) & (f[1:-1] >= f[2:])
    n_max = int(interior.sum())
    if f[0] > f[1]:
        n_max += 1
    if f[-1] > f[-2]:
        n_max += 1
    unique = n_max <= 1
    i = int(np.argmax(f))
    lo = us[max(i - 1, 0)]
    hi = us[min(i + 1, GRID_POINTS - 1)]
    g_lo = _stationarity(lo, b1, b2, k)
    g_hi = _stationarity(hi, b1, b2, k)
    if g_lo > 0.0 > g_hi:
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if _stationarity(mid, b1, b2, k) > 0.0:
                lo = mid
            else:
                hi = mid
        u = 0.5 * (lo + hi)
    else:
        # no stationarity sign change: maximum sits at the clipped boundary
        u = us[i]
    return ScalarSolution(u_star=float(u), value=_objective(float(u), b1, b2, k), unique=unique)


def er_free_energy(p, k: int) -> float:
    """Value of the scalar problem: the disordered-branch free energy."""
    return solve_u_star(p, k).value


def multipartite_free_energy(p, motif: Motif) -> tuple[float, float]:
    """Free energy of the complete (chi-1)-partite ansatz with equal parts and
    uniform intensity on the off-diagonal blocks. The motif does not map into
    chi-1 parts, so its density term vanishes and the objective reduces to
    ((r-1)/r) * (beta1*p - I(p)), maximized in closed form at
    p* = e^{2 beta1} / (1 + e^{2 beta1}). Returns (value, p_star)."""
    p = as_params(p)
    chi = motif.chi
    if chi < 3:
        raise HypothesisError(
            f"multipartite ansatz needs chromatic number >= 3, got chi={chi}"
        )
    r = chi - 1
    p_star = logistic(2.0 * p.beta1)
    value = (r - 1) / r * (p.beta1 * p_star - entropy_I(p_star))
    return value, p_star


def implied_multipartite_densities(p, motif: Motif) -> tuple[float, float]:
    """Edge and motif densities of the optimal multipartite ansatz:
    t1 = p* (r-1)/r and t2 = 0."""
    _value, p_star = multipartite_free_energy(p, motif)
    r = motif.chi - 1
    return p_star * (r - 1) / r, 0.0


def compare_ansatz(p, motif: Motif) -> AnsatzComparison:
    """Evaluate both branches; the larger free energy wins (ties go to the
    disordered branch). The order parameter is 0 on the disordered branch and
    (t1 of the multipartite optimum)^k on the multipartite branch."""
    p = as_params(p)
    er = er_free_energy(p, motif.k)
    mp, p_star = multipartite_free_energy(p, motif)
    if mp > er:
        r = motif.chi - 1
        t1 = p_star * (r - 1) / r
        return AnsatzComparison(
            er_value=er,
            mp_value=mp,
            p_star=p_star,
            winner="multipartite",
            order_parameter_C=t1**motif.k,
        )
    return AnsatzComparison(
        er_value=er, mp_value=mp, p_star=p_star, winner="disordered", order_parameter_C=0.0
    )
