"""吸收逆與基本矩陣之間的恆等式，以數值殘差檢查

殘差一律為 1-norm 相對誤差 ||lhs - rhs||_1 / max(1, ||rhs||_1)。
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd
from scipy.linalg import solve, inv

from src.config.errors import SpectralRadiusTooLarge
from src.config.settings import MAX_WORKERS
from src.graph.digraph import WeightedDigraph, AbsorptionConfig, out_degrees
from src.markov import stationary, regular_fundamental
from src.absinv.inverses import group_inverse, kernel_vector, absorption_inverse, _regular_fundamental_of_walk


logger = logging.getLogger(__name__)


def _norm(X: np.ndarray) -> float:
    return float(np.linalg.norm(X, 1))


def _residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    return _norm(lhs - rhs) / max(1.0, _norm(rhs))


def _rates(delta: np.ndarray | AbsorptionConfig, n: int) -> np.ndarray:
    delta = delta.delta if isinstance(delta, AbsorptionConfig) else delta
    delta = np.broadcast_to(np.asarray(delta, dtype=float), (n,)).copy()
    if np.any(delta <= 0):
        raise ValueError("Node-absorption rates must be strictly positive")
    return delta


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    lhs: np.ndarray
    rhs: np.ndarray

    @property
    def residual(self) -> float:
        return _residual(self.lhs, self.rhs)


@dataclass(frozen=True)
class SMStep:
    """Sherman-Morrison 鏈中的一步: 矩陣與其閉式反矩陣"""
    name: str
    matrix: np.ndarray
    inverse: np.ndarray

    @property
    def residual(self) -> float:
        return _norm(self.matrix @ self.inverse - np.eye(self.matrix.shape[0]))


@dataclass(frozen=True)
class FirstOrderError:
    error: float          # ||L^delta - [(L + D)^-1 - u 1^T / d^]||_1
    epsilon: float        # ||D||_1 / ||L||_1
    decade_ratio: float   # error(delta / 10) / error(delta)


def _projector(u: np.ndarray, d: np.ndarray) -> np.ndarray:
    """U = u 1^T / (d^T u)"""
    return np.outer(u, np.ones(u.size)) / (d @ u)


def fundamental_from_absinv(g: WeightedDigraph, d: np.ndarray) -> np.ndarray:
    """(L + D)^-1 = U + (I + L^d D)^-1 L^d"""
    d = _rates(d, g.n)
    absinv = absorption_inverse(g, d)
    L_d = absinv.matrix
    return _projector(absinv.kernel, d) + solve(np.eye(g.n) + L_d * d[np.newaxis, :], L_d)


def _spectral_radius(g: WeightedDigraph, L_delta: np.ndarray, delta: np.ndarray) -> float:
    return float(np.abs(np.linalg.eigvals(L_delta * delta[np.newaxis, :])).max(initial=0))


def series_fundamental(g: WeightedDigraph, delta: np.ndarray, K: int) -> np.ndarray:
    """U + sum_{k<=K} (-L^delta D)^k L^delta，需要 rho(L^delta D) < 1"""
    delta = _rates(delta, g.n)
    absinv = absorption_inverse(g, delta)
    L_delta = absinv.matrix
    radius = _spectral_radius(g, L_delta, delta)
    if radius >= 1:
        raise SpectralRadiusTooLarge(f"rho(L^delta D) = {radius:.6g} >= 1, the series does not converge")

    step = -L_delta * delta[np.newaxis, :]
    term = L_delta.copy()
    total = _projector(absinv.kernel, delta) + term
    for _ in range(K):
        term = step @ term
        total += term
    return total


def absinv_first_order_error(g: WeightedDigraph, delta: np.ndarray) -> FirstOrderError:
    """L^delta 與 (L + D)^-1 - u 1^T / d^ 的差距，應為 O(||D|| / ||L||)"""
    delta = _rates(delta, g.n)

    def error_at(rates: np.ndarray) -> float:
        absinv = absorption_inverse(g, rates)
        exact = inv(g.laplacian + np.diag(rates))
        approx = exact - np.outer(absinv.kernel, np.ones(g.n)) / (absinv.kernel @ rates)
        return _norm(absinv.matrix - approx)

    L_delta = absorption_inverse(g, delta).matrix
    radius = _spectral_radius(g, L_delta, delta)
    if radius >= 1:
        raise SpectralRadiusTooLarge(f"rho(L^delta D) = {radius:.6g} >= 1")

    error = error_at(delta)
    ratio = error_at(delta / 10) / error if error > 0 else 0.0
    epsilon = _norm(np.diag(delta)) / _norm(g.laplacian)
    return FirstOrderError(error, epsilon, ratio)


def _alpha_terms(g: WeightedDigraph, delta: np.ndarray):
    u = kernel_vector(g).u
    w = out_degrees(g)
    Z0, pi = _regular_fundamental_of_walk(g, u)
    alpha = (delta @ u) / (w @ u + delta @ u)
    return u, w, Z0, pi, alpha


def z1_from_z0(g: WeightedDigraph, delta: np.ndarray) -> np.ndarray:
    """P_1 = (A + D)(W + D)^-1 的基本矩陣，由 Z_0, pi, alpha, u 組合而成

    Z_1 = W^-1 (W + D) [Z_0 + a(1-a) pi 1^T - a (Z_0 D U + W u delta^T / (delta^T u) W^-1 Z_0 (I - a D U))]
    """
    delta = _rates(delta, g.n)
    u, w, Z0, pi, a = _alpha_terms(g, delta)
    n = g.n
    I = np.eye(n)
    DU = delta[:, np.newaxis] * _projector(u, delta)
    ones = np.ones(n)

    spread = np.outer(w * u, delta) / (delta @ u)
    bracket = (Z0 + a * (1 - a) * np.outer(pi, ones)
               - a * (Z0 @ DU + (spread / w[np.newaxis, :]) @ Z0 @ (I - a * DU)))
    return ((w + delta) / w)[:, np.newaxis] * bracket


def z1_direct(g: WeightedDigraph, delta: np.ndarray) -> np.ndarray:
    """(I - P_1 + pi_1 1^T)^-1，直接由 P_1 的穩態分佈計算"""
    delta = _rates(delta, g.n)
    P1 = (g.adjacency + np.diag(delta)) / (out_degrees(g) + delta)[np.newaxis, :]
    return regular_fundamental(P1, stationary(P1))


def sherman_morrison_chain(g: WeightedDigraph, delta: np.ndarray) -> list[SMStep]:
    """F_0 = I - A W^-1 + pi 1^T 經三次秩一更新得到 Z_1 的括號項

    F_1 = F_0 - a pi 1^T
    F_2 = F_1 + a v 1^T,           v = D u / (delta^T u)
    F_3 = F_2 + pi_1 1^T D W^-1,   pi_1 = (1 - a) pi + a v
    """
    delta = _rates(delta, g.n)
    u, w, Z0, pi, a = _alpha_terms(g, delta)
    n = g.n
    I = np.eye(n)
    ones = np.ones(n)
    v = delta * u / (delta @ u)
    pi1 = (1 - a) * pi + a * v
    DU = np.outer(v, ones)

    F0 = I - g.adjacency / w[np.newaxis, :] + np.outer(pi, ones)
    F1 = F0 - a * np.outer(pi, ones)
    F2 = F1 + a * np.outer(v, ones)
    F3 = F2 + np.outer(pi1, delta / w)

    spread = np.outer(w * u, delta) / (delta @ u)
    inverses = [
        Z0,
        Z0 + a / (1 - a) * np.outer(pi, ones),
        Z0 + a * np.outer(pi, ones) - a * Z0 @ DU,
        (Z0 + a * (1 - a) * np.outer(pi, ones)
         - a * (Z0 @ DU + (spread / w[np.newaxis, :]) @ Z0 @ (I - a * DU))),
    ]
    return [SMStep(f"F{k}", F, F_inv) for k, (F, F_inv) in enumerate(zip((F0, F1, F2, F3), inverses))]


def l1_absinv_relation(g: WeightedDigraph, delta: np.ndarray) -> tuple[IdentityCheck, IdentityCheck]:
    """L~_1 = (W - A)(W + D)^-1 為鄰接矩陣 A (W + D)^-1 的拉普拉斯矩陣，d_1 = delta / (omega + delta)

    回傳 L~_1^{d_1} = (W + D) L^delta 與
    (L + D)^-1 = (W + D)^-1 (U_1 + (I + L~_1^{d_1} D_1)^-1 L~_1^{d_1}) 兩個檢查。
    """
    delta = _rates(delta, g.n)
    w = out_degrees(g)
    scale = w + delta
    g1 = WeightedDigraph(g.adjacency / scale[np.newaxis, :])
    d1 = delta / scale

    L1_d1 = absorption_inverse(g1, d1)
    absinv = absorption_inverse(g, delta)
    relation = IdentityCheck('absinv_scaled_laplacian', L1_d1.matrix, scale[:, np.newaxis] * absinv.matrix)

    U1 = scale[:, np.newaxis] * _projector(absinv.kernel, delta)
    inner = U1 + solve(np.eye(g.n) + L1_d1.matrix * d1[np.newaxis, :], L1_d1.matrix)
    factored = IdentityCheck('fundamental_factored', inv(g.laplacian + np.diag(delta)),
                             inner / scale[:, np.newaxis])
    return relation, factored


def dprime_absinv_relation(g: WeightedDigraph, delta: np.ndarray) -> IdentityCheck:
    """d' = w + delta 時
    L^{d'} = a^2 L^delta + a(1-a)(L^delta L Z* + Z* L L^delta) + (1-a)^2 Z*，Z* = W^-1 (Z_0 - pi 1^T)
    """
    delta = _rates(delta, g.n)
    u, w, Z0, pi, a = _alpha_terms(g, delta)
    L = g.laplacian
    L_delta = absorption_inverse(g, delta).matrix
    Z_star = (Z0 - np.outer(pi, np.ones(g.n))) / w[:, np.newaxis]

    lhs = absorption_inverse(g, w + delta).matrix
    rhs = (a ** 2 * L_delta + a * (1 - a) * (L_delta @ L @ Z_star + Z_star @ L @ L_delta)
           + (1 - a) ** 2 * Z_star)
    return IdentityCheck('absinv_shifted_rates', lhs, rhs)


def group_inverse_relation(g: WeightedDigraph, d: np.ndarray) -> IdentityCheck:
    """(L D^-1)^# = D L^d"""
    d = _rates(d, g.n)
    lhs = group_inverse(g.laplacian / d[np.newaxis, :])
    rhs = d[:, np.newaxis] * absorption_inverse(g, d).matrix
    return IdentityCheck('group_inverse', lhs, rhs)


def check_identities(g: WeightedDigraph, delta: np.ndarray) -> dict[str, float]:
    """單一圖形上所有恆等式的殘差"""
    delta = _rates(delta, g.n)
    absinv = absorption_inverse(g, delta)
    on_null, on_range = absinv.defining_residuals()
    relation, factored = l1_absinv_relation(g, delta)
    chain = sherman_morrison_chain(g, delta)
    return {
        'fundamental_z1': _residual(z1_from_z0(g, delta), z1_direct(g, delta)),
        'group_inverse': group_inverse_relation(g, delta).residual,
        'fundamental_absinv': _residual(fundamental_from_absinv(g, delta), inv(g.laplacian + np.diag(delta))),
        'absinv_scaled_laplacian': relation.residual,
        'fundamental_factored': factored.residual,
        'absinv_null_space': on_null,
        'absinv_range': on_range,
        'absinv_shifted_rates': dprime_absinv_relation(g, delta).residual,
        'sherman_morrison': max(step.residual for step in chain),
    }


def identity_suite(graphs: Sequence[WeightedDigraph],
                   deltas: Sequence[np.ndarray],
                   max_workers: int = MAX_WORKERS) -> pd.DataFrame:
    """每個 (graph, delta) 一列殘差，依輸入順序排列"""
    if len(graphs) != len(deltas):
        raise ValueError(f"{len(graphs)} graphs but {len(deltas)} rate vectors")

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        rows = list(executor.map(check_identities, graphs, deltas))

    frame = pd.DataFrame(rows)
    frame.insert(0, 'n', [g.n for g in graphs])
    frame.insert(0, 'trial', np.arange(len(graphs)))
    logger.info(f"恆等式檢查完成: {len(graphs)} 個圖形, 最大殘差 {frame.iloc[:, 2:].to_numpy().max():.3g}")
    return frame
