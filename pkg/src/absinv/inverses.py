"""群逆、拉普拉斯核向量與吸收逆 (absorption inverse)"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space, solve, svd, LinAlgError

from src.config.errors import NotStronglyConnected, RankDeficiencyMismatch, NotRegular, NonPositiveKernel
from src.config.settings import KERNEL_TOL
from src.graph.digraph import WeightedDigraph, _frozen, out_degrees, is_strongly_connected


logger = logging.getLogger(__name__)


def rank(X: np.ndarray, tol: float | None = None) -> int:
    """奇異值大於 tol 的個數，預設 tol = max(s) max(shape) 1e-13"""
    s = svd(np.asarray(X, dtype=float), compute_uv=False)
    if s.size == 0 or s.max() == 0:
        return 0
    tol = s.max() * max(X.shape) * 1e-13 if tol is None else tol
    return int(np.sum(s > tol))


def group_inverse(X: np.ndarray) -> np.ndarray:
    """X^# = C (F C)^-2 F，X = C F 為 SVD 得到的滿秩分解

    X^# 存在的條件為 rank(X) = rank(X^2)。
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"Group inverse needs a square matrix, got shape {X.shape}")

    r = rank(X)
    r2 = rank(X @ X)
    if r != r2:
        raise RankDeficiencyMismatch(f"rank(X) = {r} but rank(X^2) = {r2}; the group inverse does not exist")
    if r == 0:
        return np.zeros_like(X)

    U, s, Vt = svd(X)
    C = U[:, :r] * s[:r]
    F = Vt[:r, :]
    FC = F @ C
    try:
        return C @ solve(FC @ FC, F)
    except LinAlgError as e:
        raise RankDeficiencyMismatch(f"F C is singular: {e}") from e


@dataclass(frozen=True)
class KernelVector:
    """(W - A) u = 0 的正向量，sum u_i = 1"""
    u: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        if np.any(u <= 0):
            raise ValueError("Kernel vector must be strictly positive")
        object.__setattr__(self, 'u', _frozen(u / u.sum()))


def kernel_vector(g: WeightedDigraph) -> KernelVector:
    """Ker(W - A) 的正規化基底向量 (強連通圖的核為一維且可取正)"""
    if not is_strongly_connected(g):
        raise NotStronglyConnected("The Laplacian kernel is one-dimensional only for strongly connected graphs")

    basis = null_space(g.laplacian)
    if basis.shape[1] != 1:
        raise NotStronglyConnected(f"Laplacian kernel has dimension {basis.shape[1]}, expected 1")
    u = basis[:, 0] / basis[:, 0].sum()

    residual = np.abs(g.laplacian @ u).sum()
    if residual > KERNEL_TOL * max(1.0, np.linalg.norm(g.laplacian, 1)) or np.any(u <= 0):
        raise NonPositiveKernel(f"Kernel vector is not positive (residual {residual:.3g}, min {u.min():.3g})")
    return KernelVector(u)


@dataclass(frozen=True)
class AbsorptionInverse:
    """L^d: 對 d^T y = 0 的 y 有 L^d L y = y，且 L^d (D u) = 0"""
    matrix: np.ndarray
    rate_vector: np.ndarray
    laplacian: np.ndarray
    kernel: np.ndarray

    def defining_residuals(self) -> tuple[float, float]:
        """在 N = {y : d^T y = 0} 與 R = span{D u} 的基底上檢查兩個定義性質"""
        d = self.rate_vector
        basis_n = null_space(d[np.newaxis, :])
        on_n = self.matrix @ self.laplacian @ basis_n - basis_n
        du = d * self.kernel
        on_r = self.matrix @ (du / np.linalg.norm(du))
        return float(np.abs(on_n).sum(axis=0).max(initial=0)), float(np.abs(on_r).sum())


def _regular_fundamental_of_walk(g: WeightedDigraph, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Z_0 = (I - A W^-1 + pi 1^T)^-1，pi = W u / (w^T u)"""
    w = out_degrees(g)
    pi = w * u / (w @ u)
    n = g.n
    try:
        Z0 = solve(np.eye(n) - g.adjacency / w[np.newaxis, :] + np.outer(pi, np.ones(n)), np.eye(n))
    except LinAlgError as e:
        raise NotRegular(f"I - A W^-1 + pi 1^T is singular: {e}") from e
    return Z0, pi


def absorption_inverse(g: WeightedDigraph, d: np.ndarray) -> AbsorptionInverse:
    """L^d = (I - U D) Z (I - D U)

    U = u 1^T / (d^T u)，Z = W^-1 Z_0，D = diag{d}。
    """
    d = np.broadcast_to(np.asarray(d, dtype=float), (g.n,)).copy()
    if np.any(d <= 0):
        raise ValueError("Rate vector d must be strictly positive")

    u = kernel_vector(g).u
    Z0, _ = _regular_fundamental_of_walk(g, u)
    Z = Z0 / out_degrees(g)[:, np.newaxis]
    n = g.n
    U = np.outer(u, np.ones(n)) / (d @ u)
    D = np.diag(d)
    L_d = (np.eye(n) - U @ D) @ Z @ (np.eye(n) - D @ U)
    return AbsorptionInverse(_frozen(L_d), _frozen(d), _frozen(g.laplacian), _frozen(u))
