"""Strategies for applying (M^-1 K)^-beta."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import DEFAULTS, METHODS
from .errors import FracOpValidationError


@dataclass(frozen=True)
class EigOracle:
    """Dense generalized eigendecomposition."""

    @property
    def name(self) -> str:
        return "eig"


@dataclass(frozen=True)
class Contour:
    """Keyhole contour: Gauss-Legendre on log t over [r, R] plus two circles.

    ``r`` and ``R`` default to half the smallest and twice the largest
    eigenvalue of the pencil.
    """

    r: float | None = None
    R: float | None = None
    n_line: int = DEFAULTS["CONTOUR"]["n_line"]
    n_circle: int = DEFAULTS["CONTOUR"]["n_circle"]

    def __post_init__(self) -> None:
        if self.n_line < 1:
            raise FracOpValidationError("n_line must be >= 1", field="n_line", value=self.n_line)
        if self.n_circle < 2:
            raise FracOpValidationError("n_circle must be >= 2", field="n_circle", value=self.n_circle)
        for name in ("r", "R"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise FracOpValidationError(f"{name} must be > 0", field=name, value=value)
        if self.r is not None and self.R is not None and self.r >= self.R:
            raise FracOpValidationError("r must be smaller than R", field="r", value=(self.r, self.R))

    @property
    def name(self) -> str:
        return "contour"


@dataclass(frozen=True)
class Sinc:
    """Sinc quadrature with step ``k``.

    The rule integrates t^-f ((t + L)^-1 - reference) in the variable
    y = log(1/t), where the reference is x / (1 + t) for f < 1/2 and
    L^-1 x / (1 + t) otherwise, so both tails decay at a rate of at least
    one half whatever the fractional part f. Without ``N`` the node range
    is balanced so each tail matches the discretization error of order
    exp(-pi^2 / (2k)). An explicit ``N`` uses the symmetric range -N..N.
    """

    k: float = DEFAULTS["SINC"]["k"]
    N: int | None = None

    def __post_init__(self) -> None:
        if not self.k > 0:
            raise FracOpValidationError("sinc step k must be > 0", field="k", value=self.k)
        if self.N is not None and self.N < 1:
            raise FracOpValidationError("sinc N must be >= 1", field="N", value=self.N)

    @property
    def name(self) -> str:
        return "sinc"

    def node_range(self, beta: float, lambda_max: float = 1.0) -> tuple[int, int]:
        """Inclusive index range for fractional order ``beta`` in (0, 1).

        ``lambda_max`` bounds the spectrum from above; it widens the lower
        tail of the identity-referenced rule, whose error there grows with
        the eigenvalue.
        """
        if self.N is not None:
            lower, upper = -self.N, self.N
        else:
            lower_rate, upper_rate = sinc_tail_rates(beta)
            target = math.pi**2 / (2.0 * self.k)
            shift = math.log(max(lambda_max, 1.0)) if beta < 0.5 else 0.0
            lower = -math.ceil((target + shift) / (2.0 * self.k * lower_rate))
            upper = math.ceil(target / (2.0 * self.k * upper_rate))
        limit = DEFAULTS["SINC"]["max_nodes"]
        if upper - lower + 1 > limit:
            raise FracOpValidationError(
                f"sinc rule with k={self.k:g} needs {upper - lower + 1} nodes, more than {limit}",
                field="k",
                value=self.k,
            )
        return lower, upper

    def error_estimate(self) -> float:
        return math.exp(-math.pi**2 / (2.0 * self.k))


def sinc_tail_rates(beta: float) -> tuple[float, float]:
    """Exponential decay rates of the sinc terms as y -> -inf and y -> +inf."""
    if beta < 0.5:
        return 1.0 + beta, 1.0 - beta
    return beta, 2.0 - beta


FracMethod = EigOracle | Contour | Sinc


def parse_method(name: str, **params: float | int | None) -> FracMethod:
    key = name.strip().lower()
    if key not in METHODS:
        raise FracOpValidationError(
            f"Unknown method '{name}'. Options: {', '.join(sorted(METHODS))}", field="method", value=name
        )
    given = {k: v for k, v in params.items() if v is not None}
    if key == "eig":
        return EigOracle()
    if key == "contour":
        allowed = {"r", "R", "n_line", "n_circle"}
        return Contour(**{k: v for k, v in given.items() if k in allowed})
    allowed = {"k", "N"}
    return Sinc(**{k: v for k, v in given.items() if k in allowed})


def describe_method(method: FracMethod) -> str:
    if isinstance(method, Contour):
        return f"contour(n_line={method.n_line}, n_circle={method.n_circle})"
    if isinstance(method, Sinc):
        return f"sinc(k={method.k:g}{'' if method.N is None else f', N={method.N}'})"
    return "eig"
