"""Threshold functions f, the T_c(p) threshold and the f-admissibility check.

T_c(p) = min{q in [2, p] : q >= 2c * f(2p/q)}.  For non-decreasing f the
left side grows and the right side shrinks in q, so the admissible q form an
interval [T_c(p), p] and T_c(p) can be located by bisection.  Every decision
is certified: rational arithmetic for powers and for exact powers of two
under log2, outward-rounded interval arithmetic otherwise.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from .errors import InvalidInput

LOG2E = 1 / math.log(2)


@dataclass(frozen=True)
class ThresholdFn:
    """f(x) = a*log2(x)**k + b  (kind "log")  or  f(x) = x**m  (kind "poly")."""

    kind: str
    a: Fraction = Fraction(1)
    k: int = 1
    b: Fraction = Fraction(0)
    m: int = 1
    c: Fraction = Fraction(100)

    def __post_init__(self):
        if self.kind not in ("log", "poly"):
            raise InvalidInput(f"unsupported threshold form {self.kind!r}")
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.c <= 0:
            raise InvalidInput("c must be positive")
        if self.kind == "log" and (self.a < 0 or self.k < 0):
            raise InvalidInput("log form needs a >= 0 and k >= 0 (f must be non-decreasing)")
        if self.kind == "poly" and self.m < 0:
            raise InvalidInput("poly form needs m >= 0")

    @classmethod
    def log2(cls, k=1, a=1, b=0, c=100):
        return cls("log", a=Fraction(a), k=int(k), b=Fraction(b), c=Fraction(c))

    @classmethod
    def power(cls, m, c=100):
        return cls("poly", m=int(m), c=Fraction(c))

    @classmethod
    def const(cls, value=1, c=100):
        return cls("log", a=Fraction(0), k=0, b=Fraction(value), c=Fraction(c))

    @classmethod
    def parse(cls, text: str, c=100):
        """Parse "log2", "log2^2", "3*log2^2+1", "x^5" or a bare number."""
        s = text.replace(" ", "").lower()
        if re.fullmatch(r"-?\d+(/\d+)?", s):
            return cls.const(Fraction(s), c)
        mt = re.fullmatch(r"x\^(\d+)", s)
        if mt:
            return cls.power(int(mt.group(1)), c)
        mt = re.fullmatch(r"(?:(\d+(?:/\d+)?)\*)?log2(?:\^(\d+))?(?:\+(\d+(?:/\d+)?))?", s)
        if mt:
            a, k, b = mt.groups()
            return cls.log2(int(k or 1), Fraction(a or 1), Fraction(b or 0), c)
        raise InvalidInput(f"cannot parse threshold function {text!r}")

    def with_c(self, c):
        return ThresholdFn(self.kind, self.a, self.k, self.b, self.m, Fraction(c))

    def __call__(self, x) -> float:
        x = float(x)
        if self.kind == "poly":
            return x ** self.m
        return float(self.a) * math.log2(x) ** self.k + float(self.b)

    def x_deriv(self, x) -> float:
        """x * f'(x), in closed form."""
        x = float(x)
        if self.kind == "poly":
            return self.m * x ** self.m
        if self.k == 0:
            return 0.0
        return float(self.a) * self.k * math.log2(x) ** (self.k - 1) * LOG2E

    def __str__(self):
        if self.kind == "poly":
            return f"x^{self.m}"
        if self.a == 0:
            return str(self.b)
        s = "log2" if self.k == 1 else f"log2^{self.k}"
        if self.a != 1:
            s = f"{self.a}*{s}"
        return s + (f"+{self.b}" if self.b else "")


def _log2_exact(x: Fraction) -> Optional[int]:
    n, d = x.numerator, x.denominator
    if n & (n - 1) == 0 and d & (d - 1) == 0:
        return n.bit_length() - d.bit_length()
    return None


def _float_log2(x: Fraction) -> float:
    return math.log2(x.numerator) - math.log2(x.denominator)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def threshold_sign(tf: ThresholdFn, p, q: int) -> int:
    """Sign of q - 2c*f(2p/q), decided exactly."""
    x = Fraction(2) * Fraction(p) / q
    rhs_scale = 2 * tf.c
    if tf.kind == "poly":
        return _sign(q - rhs_scale * x ** tf.m)
    if tf.a == 0 or tf.k == 0:
        return _sign(q - rhs_scale * (tf.a + tf.b))
    e = _log2_exact(x)
    if e is not None:
        return _sign(q - rhs_scale * (tf.a * Fraction(e) ** tf.k + tf.b))
    # log2 of a rational that is not a power of two is irrational, so the
    # sign is never 0 and refining the interval eventually separates it.
    L = _float_log2(x)
    val = float(rhs_scale) * (float(tf.a) * L ** tf.k + float(tf.b))
    if abs(q - val) > 1e-9 * max(1.0, abs(val)):
        return _sign(q - val)
    iv = mpmath.iv
    old = iv.prec
    try:
        prec = 128
        while True:
            iv.prec = prec
            Li = (iv.log(iv.mpf(x.numerator)) - iv.log(iv.mpf(x.denominator))) / iv.log(iv.mpf(2))
            vi = iv.mpf(rhs_scale.numerator) / rhs_scale.denominator * (
                iv.mpf(tf.a.numerator) / tf.a.denominator * Li ** tf.k
                + iv.mpf(tf.b.numerator) / tf.b.denominator
            )
            if vi.b < q:
                return 1
            if vi.a > q:
                return -1
            prec *= 2
    finally:
        iv.prec = old


def compute_Tc(tf: ThresholdFn, p) -> Optional[int]:
    """Smallest integer q in [2, p] with q >= 2c*f(2p/q); None if there is none.

    ``p`` may be rational (the engine's recursion needs T_c at 0.99p).
    """
    p = Fraction(p)
    if p < 2:
        raise InvalidInput(f"compute_Tc needs p >= 2, got {p}")
    top = math.floor(p)
    if threshold_sign(tf, p, top) < 0:
        return None
    a, b = 2, top
    while a < b:
        mid = (a + b) // 2
        if threshold_sign(tf, p, mid) >= 0:
            b = mid
        else:
            a = mid + 1
    return a


def compute_Tc_table(tf: ThresholdFn, pmax: int) -> np.ndarray:
    """T_c(p) for every integer p in 0..pmax (0 where undefined or None).

    Vectorised bisection in floating point, then each boundary is certified
    with :func:`threshold_sign` wherever the float margin is too thin.
    """
    ps = np.arange(pmax + 1, dtype=np.float64)
    c2 = float(2 * tf.c)

    def g(q):
        x = 2 * ps / q
        if tf.kind == "poly":
            f = x ** tf.m
        else:
            f = float(tf.a) * np.log2(x) ** tf.k + float(tf.b)
        return q - c2 * f, c2 * f

    with np.errstate(divide="ignore", invalid="ignore"):
        lo = np.full(pmax + 1, 2.0)
        hi = ps.copy()
        for _ in range(int(pmax).bit_length() + 1):
            mid = np.floor((lo + hi) / 2)
            ok = g(mid)[0] >= 0
            hi = np.where(ok, mid, hi)
            lo = np.where(ok, lo, mid + 1)
        out = lo.astype(np.int64)
        gq, vq = g(lo)
        gp, vp = g(lo - 1)
        gtop, vtop = g(ps)
    tol = lambda v: 1e-9 * np.maximum(1.0, np.abs(v))
    # sure: boundary decided cleanly in float
    sure = (gq > tol(vq)) & ((lo == 2) | (gp < -tol(vp))) & (gtop > tol(vtop))
    none = gtop < -tol(vtop)
    out[none] = 0
    out[:2] = 0
    for p in np.flatnonzero(~sure & ~none):
        if p >= 2:
            t = compute_Tc(tf, int(p))
            out[p] = 0 if t is None else t
    return out


@dataclass
class AdmissibilityReport:
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


def check_f_admissible(tf: ThresholdFn, lo=2.0, hi=1e6, samples=2000, rtol=1e-12) -> AdmissibilityReport:
    """Check f >= 1, x f'(x) >= log2(e) and x f'(x) <= 5 f(x) on a log grid.

    Closed-form derivatives are used; ``rtol`` absorbs rounding at the
    boundary cases (log2 meets the first condition with equality, x^5 the
    second).
    """
    if lo < 2 or hi <= lo:
        raise InvalidInput("admissibility grid must satisfy 2 <= lo < hi")
    viol = []
    for x in np.geomspace(lo, hi, samples):
        fx, xd = tf(x), tf.x_deriv(x)
        if fx < 1 - rtol:
            viol.append((float(x), "f(x) >= 1"))
        if xd < LOG2E * (1 - rtol):
            viol.append((float(x), "f'(x) >= log2(e)/x"))
        if xd > 5 * fx * (1 + rtol):
            viol.append((float(x), "f'(x)/f(x) <= 5/x"))
    return AdmissibilityReport(not viol, viol)
