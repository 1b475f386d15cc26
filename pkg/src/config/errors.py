"""領域例外"""


class AbsorbMapError(Exception):
    """所有領域錯誤的基底類別"""


class GraphFormatError(AbsorbMapError, ValueError):
    """輸入圖形或檔案格式不符"""


class NotStronglyConnected(AbsorbMapError, ValueError):
    """圖形不是強連通"""


class InfeasibleMarkovTime(AbsorbMapError, ValueError):
    """Markov time 超出線性化的可行上界"""

    def __init__(self, t: float, bound: float):
        self.t = t
        self.bound = bound
        super().__init__(f"Markov time t={t:.6g} exceeds the feasibility bound {bound:.6g} of the linear input")


class NotRegular(AbsorbMapError, ArithmeticError):
    """轉移矩陣沒有唯一的穩態分佈"""


class NonConvergent(AbsorbMapError, ArithmeticError):
    """I - Q 在數值上為奇異"""


class RankDeficiencyMismatch(AbsorbMapError, ArithmeticError):
    """rank(X) != rank(X^2)，群逆不存在"""


class SpectralRadiusTooLarge(AbsorbMapError, ArithmeticError):
    """級數展開需要的譜半徑 < 1 不成立"""


class ExhaustedBridges(AbsorbMapError, RuntimeError):
    """可用的社群橋已用盡"""


class NegativeTransition(AbsorbMapError, ArithmeticError):
    """轉移矩陣出現超出容許誤差的負值"""


class NonPositiveKernel(AbsorbMapError, ArithmeticError):
    """Laplacian 的零空間向量不是正的"""
