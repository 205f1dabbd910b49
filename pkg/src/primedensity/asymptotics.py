"""Main-term predictions for prime counts and prime sums.

All predictions share one scheme: a density d in (0, 1] multiplies a
logarithmic-integral main term,

    pi(f, x)  ~  d * int_2^x dt/ln t,
    sum_{p <= x, p in f} g(p)  ~  d * int_2^x g(t) dt/ln t,

with three interchangeable remainder classes attached for reporting:
an unconditional exponential saving, the weaker x/ln^2 x bound that comes
from integrating by parts (whose main term is x g(x)/ln x minus a weighted
integral of g'), and a square-root bound conditional on the Riemann
hypothesis. Remainders are order tags only; they are never evaluated,
since their constants are not specified.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import fsum, log

import numpy as np
from scipy.integrate import quad
from scipy.special import expi

from .errors import RangeLimitError

_QUAD_RTOL = 1e-10

# exp(LOG_FLOAT_MAX) is the largest representable double
_LOG_FLOAT_MAX = 709.78


class RemainderModel(enum.Enum):
    """Which error-term class a prediction is reported under."""

    PNT_EXP = "pnt"
    PARTS = "parts"
    RH = "rh"

    @classmethod
    def parse(cls, token: str) -> "RemainderModel":
        for m in cls:
            if m.value == token:
                return m
        raise ValueError(
            f"unknown remainder model {token!r}; expected one of "
            + ", ".join(m.value for m in cls)
        )

    @property
    def order(self) -> str:
        return {
            RemainderModel.PNT_EXP: "O(x exp(-c sqrt(ln x)))",
            RemainderModel.PARTS: "O(x / ln^2 x)",
            RemainderModel.RH: "O(sqrt(x) ln x), assuming the Riemann hypothesis",
        }[self]


CONST = "const"
POWLOG = "powlog"
EXP = "exp"


@dataclass(frozen=True)
class FunctionSpec:
    """A weight function g with a closed-form derivative.

    Forms: ``powlog`` is g(t) = t^alpha (ln t)^beta, ``exp`` is g(t) = b^t
    with b > 1, and ``const`` is g = 1. powlog(0, 0) canonicalizes to const.
    All forms are smooth on [2, oo).
    """

    form: str
    alpha: float = 0.0
    beta: float = 0.0
    base: float = 0.0

    def __post_init__(self):
        if self.form not in (CONST, POWLOG, EXP):
            raise ValueError(f"unknown function form {self.form!r}")
        if self.form == POWLOG and self.alpha == 0.0 and self.beta == 0.0:
            object.__setattr__(self, "form", CONST)
        if self.form == CONST:
            object.__setattr__(self, "alpha", 0.0)
            object.__setattr__(self, "beta", 0.0)
            object.__setattr__(self, "base", 0.0)
        if self.form == EXP and not self.base > 1.0:
            raise ValueError(f"exponential base must exceed 1, got {self.base}")

    # -- constructors ---------------------------------------------------

    @classmethod
    def const(cls) -> "FunctionSpec":
        return cls(CONST)

    @classmethod
    def power_log(cls, alpha: float, beta: float = 0.0) -> "FunctionSpec":
        return cls(POWLOG, alpha=float(alpha), beta=float(beta))

    @classmethod
    def exponential(cls, base: float) -> "FunctionSpec":
        return cls(EXP, base=float(base))

    @classmethod
    def parse(cls, text: str) -> "FunctionSpec":
        """Parse the canonical text form: one | log | invp | logoverp |
        pow:a | powlog:a,b | exp:b."""
        if text == "one":
            return cls.const()
        if text == "log":
            return cls.power_log(0.0, 1.0)
        if text == "invp":
            return cls.power_log(-1.0, 0.0)
        if text == "logoverp":
            return cls.power_log(-1.0, 1.0)
        if text.startswith("pow:"):
            return cls.power_log(float(text[4:]), 0.0)
        if text.startswith("powlog:"):
            parts = text[7:].split(",")
            if len(parts) != 2:
                raise ValueError(f"powlog form is powlog:alpha,beta, got {text!r}")
            return cls.power_log(float(parts[0]), float(parts[1]))
        if text.startswith("exp:"):
            return cls.exponential(float(text[4:]))
        raise ValueError(f"unrecognized function spec {text!r}")

    def canonical(self) -> str:
        if self.form == CONST:
            return "one"
        if self.form == EXP:
            return f"exp:{self.base:g}"
        if (self.alpha, self.beta) == (0.0, 1.0):
            return "log"
        if (self.alpha, self.beta) == (-1.0, 0.0):
            return "invp"
        if (self.alpha, self.beta) == (-1.0, 1.0):
            return "logoverp"
        if self.beta == 0.0:
            return f"pow:{self.alpha:g}"
        return f"powlog:{self.alpha:g},{self.beta:g}"

    def __str__(self) -> str:
        return self.canonical()

    def describe(self) -> str:
        if self.form == CONST:
            return "g(t) = 1"
        if self.form == EXP:
            return f"g(t) = {self.base:g}^t"
        return f"g(t) = t^{self.alpha:g} (ln t)^{self.beta:g}"

    # -- evaluation -----------------------------------------------------

    def value(self, t):
        """g(t); accepts scalars or numpy arrays (t >= 2)."""
        t = np.asarray(t, dtype=np.float64)
        if self.form == CONST:
            out = np.ones_like(t)
        elif self.form == EXP:
            out = np.power(self.base, t)
        else:
            out = np.power(t, self.alpha) * np.power(np.log(t), self.beta)
        return out if out.ndim else float(out)

    def derivative(self, t):
        """g'(t) in closed form; accepts scalars or numpy arrays (t >= 2)."""
        t = np.asarray(t, dtype=np.float64)
        if self.form == CONST:
            out = np.zeros_like(t)
        elif self.form == EXP:
            out = np.power(self.base, t) * log(self.base)
        else:
            lt = np.log(t)
            out = (
                np.power(t, self.alpha - 1.0)
                * np.power(lt, self.beta - 1.0)
                * (self.alpha * lt + self.beta)
            )
        return out if out.ndim else float(out)

    def turning_point(self) -> float | None:
        """The unique zero of g' when one exists: t = exp(-beta/alpha)."""
        if self.form == POWLOG and self.alpha != 0.0 and self.beta != 0.0:
            point = float(np.exp(-self.beta / self.alpha))
            if point > 1.0:
                return point
        return None

    def is_monotone_on(self, lo: float, hi: float) -> bool:
        """Check monotonicity by the sign of g' at 64 log-spaced samples.

        The admitted forms have at most one interior turning point, which is
        added to the sample set so it cannot slip between samples.
        """
        if hi <= lo:
            raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
        samples = np.geomspace(lo, hi, 64)
        tp = self.turning_point()
        if tp is not None and lo < tp < hi:
            samples = np.append(samples, tp)
        signs = np.sign(self.derivative(samples))
        return bool(np.all(signs >= 0) or np.all(signs <= 0))

    def max_finite_argument(self) -> float:
        """Largest t where g(t) stays inside float range (inf if unbounded)."""
        if self.form == EXP:
            return _LOG_FLOAT_MAX / log(self.base)
        if self.form == POWLOG and self.alpha > 0:
            # t^alpha dominates; ln-power corrections are negligible here
            return float(np.exp((_LOG_FLOAT_MAX - 10.0) / self.alpha))
        return float("inf")


@dataclass(frozen=True)
class AsymptoticPrediction:
    """A main-term value with its remainder class recorded, not added."""

    main_term: float
    remainder_model: RemainderModel
    density_used: float
    x: int

    @property
    def remainder_order(self) -> str:
        return self.remainder_model.order


def log_integral(x: float) -> float:
    """int_2^x dt/ln t, evaluated as Ei(ln x) - Ei(ln 2)."""
    if x < 2:
        raise ValueError(f"log_integral needs x >= 2, got {x}")
    return float(expi(np.log(x)) - expi(np.log(2.0)))


def _quad_pieces(f, lo: float, hi: float) -> float:
    """Adaptive quadrature of f over [lo, hi], split at powers of ten.

    The decade split keeps each QUADPACK call well-scaled when hi runs to
    10^8 and beyond; pieces are summed with compensated summation.
    """
    if hi <= lo:
        return 0.0
    cuts = [lo]
    scale = 10.0
    while scale <= lo:
        scale *= 10.0
    while scale < hi:
        cuts.append(scale)
        scale *= 10.0
    cuts.append(hi)
    parts = []
    for a, b in zip(cuts, cuts[1:]):
        val, _err = quad(f, a, b, epsabs=0.0, epsrel=_QUAD_RTOL, limit=200)
        parts.append(val)
    return fsum(parts)


def _check_density(density: float) -> None:
    if not 0.0 < density <= 1.0:
        raise ValueError(
            f"density must lie in (0, 1] (a nonzero limiting ratio), got {density}"
        )


def predict_pi(density: float, x: int, model: RemainderModel) -> AsymptoticPrediction:
    """Main term for the subset prime count pi(f, x) = density * pi-ish(x).

    PNT_EXP and RH share the logarithmic-integral main term; PARTS uses the
    x/ln x form that integration by parts produces.
    """
    _check_density(density)
    if x < 3:
        raise ValueError(f"x must be >= 3, got {x}")
    if model is RemainderModel.PARTS:
        main = density * x / log(x)
    else:
        main = density * log_integral(x)
    return AsymptoticPrediction(main, model, density, int(x))


def predict_sum(
    g: FunctionSpec, density: float, x: int, model: RemainderModel
) -> AsymptoticPrediction:
    """Main term for sum_{p <= x, p in f} g(p).

    PNT_EXP/RH: density * int_2^x g(t)/ln t dt.
    PARTS:      density * (x g(x)/ln x - int_2^x t g'(t)/ln t dt).

    g must be monotonic on [2, x]; the asymptotics assume a monotonic weight
    with a continuous derivative, and a sign-changing g' breaks the
    by-parts bound.
    """
    _check_density(density)
    if x < 3:
        raise ValueError(f"x must be >= 3, got {x}")
    if x > g.max_finite_argument():
        raise RangeLimitError(
            f"{g} overflows double precision beyond t = {g.max_finite_argument():.6g}; "
            f"got x = {x}"
        )
    if not g.is_monotone_on(2.0, float(x)):
        tp = g.turning_point()
        raise ValueError(
            f"{g} is not monotonic on [2, {x}] (derivative changes sign near "
            f"t = {tp:.6g}); the sum asymptotics require a monotonic weight"
        )
    if model is RemainderModel.PARTS:
        integral = _quad_pieces(
            lambda t: t * g.derivative(t) / np.log(t), 2.0, float(x)
        )
        main = density * (x * g.value(float(x)) / log(x) - integral)
    else:
        main = density * _quad_pieces(
            lambda t: g.value(t) / np.log(t), 2.0, float(x)
        )
    return AsymptoticPrediction(float(main), model, density, int(x))


def main_terms_agree(g: FunctionSpec, density: float, x: int) -> float:
    """Relative gap between the by-parts and logarithmic-integral main terms.

    The two differ by a lower-order weighted integral of g/ln^2, so the
    returned ratio shrinks as x grows for the admitted weights.
    """
    parts = predict_sum(g, density, x, RemainderModel.PARTS).main_term
    direct = predict_sum(g, density, x, RemainderModel.PNT_EXP).main_term
    if direct == 0.0:
        raise ValueError("logarithmic-integral main term is zero; no relative gap")
    return abs(parts - direct) / abs(direct)
