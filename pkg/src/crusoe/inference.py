"""Inverse mode: recover parametric signal forms and model parameters from data.

Both single-rate families are fit by separable least squares. For a fixed
rate the amplitudes are linear and solved exactly, which leaves a 1-D search
over the rate: a log-spaced scan to bracket the minimum, then golden-section
refinement in log(rate).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .core import Trajectory
from .errors import (
    ConstantSignal,
    GridMismatch,
    NonMonotoneTime,
    UnconvergedFit,
)

LAMBDA_MIN = 1e-6
SCAN_POINTS = 241
BRACKET_RTOL = 1e-10
COLLINEAR_R2 = 0.999

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Saturation:
    """Q(t) = j (1 - exp(-lambda t))."""

    j: float
    lam: float

    def __call__(self, t):
        return self.j * (1.0 - np.exp(-self.lam * np.asarray(t, dtype=float)))


@dataclass(frozen=True)
class ExponentialAffine:
    """N(t) = a + b exp(-lambda t)."""

    a: float
    b: float
    lam: float

    def __call__(self, t):
        return self.a + self.b * np.exp(-self.lam * np.asarray(t, dtype=float))


@dataclass(frozen=True)
class FitResult:
    form: Union[Saturation, ExponentialAffine]
    rss: float
    iterations: int
    converged: bool

    def as_dict(self) -> dict:
        params = {k: v for k, v in vars(self.form).items()}
        params["lambda"] = params.pop("lam")
        return {
            "form": type(self.form).__name__,
            "params": params,
            "rss": self.rss,
            "iterations": self.iterations,
            "converged": self.converged,
        }


Signal = Union[Trajectory, tuple]


def _as_signal(signal: Signal, good: Optional[str] = None) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(signal, Trajectory):
        if good is None:
            if len(signal.signals) != 1:
                raise GridMismatch(f"trajectory has signals {signal.names}; name one with good=")
            good = signal.names[0]
        return signal.times, signal[good]
    t, y = signal
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.shape != y.shape or t.ndim != 1:
        raise GridMismatch(f"times {t.shape} and values {y.shape} differ")
    return t, y


def _check_fit_input(t: np.ndarray, y: np.ndarray, min_samples: int = 4) -> None:
    if t.size < min_samples:
        raise ConstantSignal(f"need at least {min_samples} samples, got {t.size}")
    if not np.all(np.diff(t) > 0):
        raise NonMonotoneTime("sample times must be strictly increasing")
    if np.ptp(y) <= 1e-14 * max(1.0, float(np.max(np.abs(y)))):
        raise ConstantSignal("signal does not vary")


def _lambda_upper(t: np.ndarray) -> float:
    # fast enough to saturate within a couple of samples, and never below
    # ten e-folds over the window
    return max(10.0 / (t[-1] - t[0]), 2.0 / float(np.min(np.diff(t))))


def _golden_log(rss: Callable[[float], float], lo: float, hi: float) -> tuple[float, int, bool]:
    """Minimize rss(exp(x)) on [log lo, log hi]; returns (lambda, iterations, bracket_ok)."""
    a, b = math.log(lo), math.log(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = rss(math.exp(c)), rss(math.exp(d))
    it = 0
    # relative bracket on lambda == absolute bracket on log(lambda)
    while b - a > BRACKET_RTOL and it < 500:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = rss(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = rss(math.exp(d))
        it += 1
    return math.exp(0.5 * (a + b)), it, b - a <= BRACKET_RTOL


def _separable_fit(t: np.ndarray, y: np.ndarray, basis: Callable[[float], np.ndarray]):
    """Scan + golden-section over lambda; amplitudes by linear least squares."""

    def solve(lam: float) -> tuple[np.ndarray, float]:
        A = basis(lam)
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        resid = y - A @ coef
        return coef, float(resid @ resid)

    lo, hi = LAMBDA_MIN, _lambda_upper(t)
    grid = np.geomspace(lo, hi, SCAN_POINTS)
    scan = np.array([solve(lam)[1] for lam in grid])
    i = int(np.argmin(scan))
    interior = 0 < i < SCAN_POINTS - 1
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, SCAN_POINTS - 1)]
    lam, iters, bracket_ok = _golden_log(lambda x: solve(x)[1], a, b)
    coef, rss = solve(lam)
    # a minimum pinned to the search boundary means the family does not fit
    return lam, coef, rss, SCAN_POINTS + iters, bracket_ok and interior


def fit_saturation(signal: Signal, good: Optional[str] = None) -> FitResult:
    t, y = _as_signal(signal, good)
    _check_fit_input(t, y)

    def basis(lam: float) -> np.ndarray:
        return (1.0 - np.exp(-lam * t))[:, None]

    lam, coef, rss, iters, ok = _separable_fit(t, y, basis)
    return FitResult(Saturation(float(coef[0]), lam), rss, iters, ok)


def fit_exponential_affine(signal: Signal, good: Optional[str] = None) -> FitResult:
    t, y = _as_signal(signal, good)
    _check_fit_input(t, y)
    ones = np.ones_like(t)

    def basis(lam: float) -> np.ndarray:
        return np.column_stack([ones, np.exp(-lam * t)])

    lam, coef, rss, iters, ok = _separable_fit(t, y, basis)
    return FitResult(ExponentialAffine(float(coef[0]), float(coef[1]), lam), rss, iters, ok)


@dataclass(frozen=True)
class CollinearityReport:
    alpha: float
    r_squared: float
    collinear: bool


def _common_grid(sig_a: Signal, sig_b: Signal, good_a, good_b, min_samples: int):
    ta, ya = _as_signal(sig_a, good_a)
    tb, yb = _as_signal(sig_b, good_b)
    if ta.shape != tb.shape or not np.array_equal(ta, tb):
        raise GridMismatch("signals are not sampled on the same time grid")
    if ta.size < min_samples:
        raise GridMismatch(f"need at least {min_samples} samples, got {ta.size}")
    if not np.all(np.diff(ta) > 0):
        raise NonMonotoneTime("sample times must be strictly increasing")
    return ta, ya, yb


def detect_collinearity(sig_a: Signal, sig_b: Signal, good_a: Optional[str] = None,
                        good_b: Optional[str] = None, threshold: float = COLLINEAR_R2) -> CollinearityReport:
    """Regress d(sig_b)/dt on d(sig_a)/dt through the origin.

    ``r_squared`` is the uncentered coefficient of determination, which stays
    in [0, 1] for a regression without intercept.
    """
    t, a, b = _common_grid(sig_a, sig_b, good_a, good_b, 5)
    da = np.gradient(a, t)
    db = np.gradient(b, t)
    saa, sbb, sab = float(da @ da), float(db @ db), float(da @ db)
    if saa == 0.0:
        return CollinearityReport(alpha=0.0, r_squared=1.0 if sbb == 0.0 else 0.0, collinear=sbb == 0.0)
    alpha = sab / saa
    if sbb == 0.0:
        r2 = 1.0
    else:
        r2 = min(1.0, max(0.0, sab * sab / (saa * sbb)))
    return CollinearityReport(alpha=alpha, r_squared=r2, collinear=r2 > threshold)


@dataclass(frozen=True)
class ConstraintEstimate:
    """Unit-norm weights with w_B Q_B + w_C Q_C + w_0 ~ 0 over the window."""

    weights: tuple[float, float, float]
    residual: float


def _sign_convention(w: np.ndarray) -> np.ndarray:
    for x in w:
        if x != 0.0:
            return w if x > 0 else -w
    return w


def reconstruct_constraint(sig_a: Signal, sig_b: Signal, good_a: Optional[str] = None,
                           good_b: Optional[str] = None) -> ConstraintEstimate:
    """Smallest right-singular vector of the sample matrix [Q_B, Q_C, 1]."""
    _, a, b = _common_grid(sig_a, sig_b, good_a, good_b, 3)
    if not (np.any(a) or np.any(b)):
        # any (w_B, w_C, 0) is exact here; pick the first axis
        return ConstraintEstimate((1.0, 0.0, 0.0), 0.0)
    M = np.column_stack([a, b, np.ones_like(a)])
    _, _, vt = np.linalg.svd(M)
    w = _sign_convention(vt[-1] / np.linalg.norm(vt[-1]))
    residual = float(np.max(np.abs(M @ w)))
    return ConstraintEstimate((float(w[0]), float(w[1]), float(w[2])), residual)


@dataclass(frozen=True)
class ParameterEstimates:
    E_from_B: float
    E_from_C: float
    k_over_m_B: float
    k_over_m_C: float

    @property
    def E(self) -> float:
        return 0.5 * (self.E_from_B + self.E_from_C)

    @property
    def consistency_gap(self) -> float:
        """|E_B - E_C| / max(E_B, E_C); zero when both goods tell the same budget."""
        return abs(self.E_from_B - self.E_from_C) / max(self.E_from_B, self.E_from_C)

    def as_dict(self) -> dict:
        return {
            "E_from_B": self.E_from_B,
            "E_from_C": self.E_from_C,
            "E": self.E,
            "k_over_m_B": self.k_over_m_B,
            "k_over_m_C": self.k_over_m_C,
            "consistency_gap": self.consistency_gap,
        }


def recover_model_params(fit_B: FitResult, fit_C: FitResult, p_B: float, p_C: float) -> ParameterEstimates:
    """Invert Q* = E/(2p) and lambda = 2 (k/m) (p_own/p_other) for each good."""
    for name, fit in (("B", fit_B), ("C", fit_C)):
        if not isinstance(fit.form, Saturation):
            raise UnconvergedFit(f"fit for {name} is {type(fit.form).__name__}, need Saturation")
        if not fit.converged:
            raise UnconvergedFit(f"fit for {name} did not converge")
    return ParameterEstimates(
        E_from_B=2.0 * p_B * fit_B.form.j,
        E_from_C=2.0 * p_C * fit_C.form.j,
        k_over_m_B=fit_B.form.lam * p_C / (2.0 * p_B),
        k_over_m_C=fit_C.form.lam * p_B / (2.0 * p_C),
    )
