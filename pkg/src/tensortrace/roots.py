"""Real roots of polynomials of degree at most four.

Real roots are isolated between consecutive critical points (the real roots
of the derivative, found recursively), where the polynomial is monotone, and
refined there by bracketed Newton iteration.  Closed-form estimates
(quadratic formula, Cardano, Ferrari) seed the Newton steps.  The closed forms
alone are not trusted: with a tiny leading coefficient they lose accuracy or
drop roots entirely, while a sign change inside a monotone bracket cannot be
missed.
"""

from __future__ import annotations

import cmath
import math
from typing import List, Sequence

from .tensor import DegenerateInputError

__all__ = ["real_roots", "polyval", "residual_bound"]

_MERGE_TOL = 1e-8
_LOG_CLAMP = 700.0
_MAX_STEPS = 400
_ULP = 2.0**-52
_ZERO_TOL = 64 * _ULP


def polyval(coeffs: Sequence[float], t: float) -> float:
    """Horner evaluation; ``coeffs`` in descending powers."""
    acc = 0.0
    for a in coeffs:
        acc = acc * t + a
    return acc


def _polyder_val(coeffs: Sequence[float], t: float):
    p = 0.0
    dp = 0.0
    for a in coeffs:
        dp = dp * t + p
        p = p * t + a
    return p, dp


def residual_bound(coeffs: Sequence[float], t: float) -> float:
    """Acceptance threshold ``1e-10 (1 + max|a| (1 + |t|)^deg)`` (``inf`` on overflow)."""
    grow = 1.0
    for _ in range(len(coeffs) - 1):
        grow *= 1.0 + abs(t)
    return 1e-10 * (1.0 + max(abs(a) for a in coeffs) * grow)


def _trim(coeffs: Sequence[float]) -> List[float]:
    coeffs = [float(a) for a in coeffs]
    scale = max((abs(a) for a in coeffs), default=0.0)
    if scale == 0.0:
        raise DegenerateInputError("zero polynomial has no isolated roots")
    while coeffs and coeffs[0] == 0.0:
        coeffs.pop(0)
    return coeffs


def _quadratic(a: complex, b: complex, c: complex) -> List[complex]:
    disc = cmath.sqrt(b * b - 4 * a * c)
    # pick the sign avoiding cancellation
    if (b.conjugate() * disc).real >= 0:
        q = -(b + disc) / 2
    else:
        q = -(b - disc) / 2
    if q == 0:
        return [0j, 0j]
    return [q / a, c / q]


def _cubic(a: float, b: float, c: float) -> List[complex]:
    """Roots of ``x^3 + a x^2 + b x + c``."""
    p = b - a * a / 3.0
    q = 2.0 * a**3 / 27.0 - a * b / 3.0 + c
    shift = -a / 3.0
    if p == 0.0 and q == 0.0:
        return [complex(shift)] * 3
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    m = 2.0 * math.sqrt(-p / 3.0) if p < 0.0 else 0.0
    if disc <= 0.0 and p * m != 0.0:
        # three real roots, trigonometric form
        arg = 3.0 * q / (p * m)
        theta = math.acos(max(-1.0, min(1.0, arg))) / 3.0
        return [complex(m * math.cos(theta - 2.0 * math.pi * k / 3.0) + shift) for k in range(3)]
    sq = math.sqrt(max(disc, 0.0))
    u = math.copysign(abs(-q / 2.0 - math.copysign(sq, q)) ** (1.0 / 3.0), -q / 2.0 - math.copysign(sq, q))
    v = -p / (3.0 * u) if u != 0.0 else 0.0
    y1 = u + v
    re = -y1 / 2.0
    im = math.sqrt(3.0) / 2.0 * (u - v)
    return [complex(y1 + shift), complex(re + shift, im), complex(re + shift, -im)]


def _quartic(a: float, b: float, c: float, d: float) -> List[complex]:
    """Roots of ``x^4 + a x^3 + b x^2 + c x + d`` (Ferrari)."""
    shift = -a / 4.0
    p = b - 3.0 * a * a / 8.0
    q = c - a * b / 2.0 + a**3 / 8.0
    r = d - a * c / 4.0 + a * a * b / 16.0 - 3.0 * a**4 / 256.0
    scale = max(abs(p), abs(q) ** (2.0 / 3.0), abs(r) ** 0.5, 1e-300)
    if abs(q) <= 1e-14 * scale ** 1.5:
        ys = []
        for z in _quadratic(1 + 0j, complex(p), complex(r)):
            w = cmath.sqrt(z)
            ys += [w, -w]
        return [y + shift for y in ys]
    # resolvent cubic 8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2 = 0 has a positive root
    cands = _cubic(p, (p * p / 4.0 - r), -q * q / 8.0)
    m = max(z.real for z in cands)
    for _ in range(3):
        f = 8 * m**3 + 8 * p * m * m + (2 * p * p - 8 * r) * m - q * q
        df = 24 * m * m + 16 * p * m + (2 * p * p - 8 * r)
        if df == 0.0:
            break
        step = f / df
        if m - step <= 0.0:
            break
        m -= step
    if m <= 0.0:
        m = abs(m) + 1e-300
    s = math.sqrt(2.0 * m)
    ys = _quadratic(1 + 0j, complex(-s), complex(p / 2.0 + m + q / (2.0 * s)))
    ys += _quadratic(1 + 0j, complex(s), complex(p / 2.0 + m - q / (2.0 * s)))
    return [y + shift for y in ys]


def _balanced_monic(poly: List[float]):
    """``(sigma, b)`` with ``p(sigma x) / (a_0 sigma^deg) = x^deg + b_1 x^(deg-1) + ...`` and ``|b_k| <= 1``.

    ``sigma`` is the largest ``|a_k / a_0|^(1/k)``, a bound on the root
    magnitudes, so the closed forms never see huge coefficients.
    """
    log_lead = math.log(abs(poly[0]))
    logs = [(k, math.log(abs(a)) - log_lead) for k, a in enumerate(poly[1:], start=1) if a != 0.0]
    log_sigma = max((l / k for k, l in logs), default=0.0)
    log_sigma = min(max(log_sigma, -_LOG_CLAMP), _LOG_CLAMP)
    mon = []
    for k, a in enumerate(poly[1:], start=1):
        if a == 0.0:
            mon.append(0.0)
            continue
        mag = math.exp(min(math.log(abs(a)) - log_lead - k * log_sigma, _LOG_CLAMP))
        mon.append(math.copysign(mag, a * poly[0]))
    return math.exp(log_sigma), mon


def _closed_form_seeds(poly: List[float]) -> List[float]:
    deg = len(poly) - 1
    try:
        sigma, mon = _balanced_monic(poly)
        if deg == 2:
            zs = _quadratic(1 + 0j, complex(mon[0]), complex(mon[1]))
        elif deg == 3:
            zs = _cubic(*mon)
        elif deg == 4:
            zs = _quartic(*mon)
        else:
            return []
    except (ArithmeticError, ValueError):
        return []
    return [sigma * z.real for z in zs if math.isfinite(sigma * z.real)]


def _root_bound(poly: List[float]) -> float:
    """Twice the Cauchy bound ``1 + max |a_k / a_0|``, computed in logs and capped below overflow.

    The factor two keeps the bracket end strictly outside the largest root
    even when ``1 + x`` rounds to ``x``.
    """
    log_lead = math.log(abs(poly[0]))
    logs = [math.log(abs(a)) - log_lead for a in poly[1:] if a != 0.0]
    if not logs:
        return 2.0
    return 2.0 * (1.0 + math.exp(min(max(logs), _LOG_CLAMP)))


def _bracketed_root(poly: List[float], a: float, b: float, fa: float, seeds: List[float]) -> float:
    """Root of ``poly`` in ``(a, b)`` given a sign change; Newton with bisection fallback."""
    inside = [t for t in seeds if a < t < b]
    t = inside[0] if inside else (a + b) / 2.0
    lo, hi = a, b
    for _ in range(_MAX_STEPS):
        f, df = _polyder_val(poly, t)
        if f == 0.0:
            return t
        if (f < 0.0) == (fa < 0.0):
            lo = t
        else:
            hi = t
        step_ok = df != 0.0 and math.isfinite(df)
        t_new = t - f / df if step_ok else lo
        if not (lo < t_new < hi):
            t_new = lo + (hi - lo) / 2.0
        if t_new == t or hi - lo <= 4.0 * _ULP * max(abs(lo), abs(hi)):
            return t_new
        t = t_new
    return t


def _isolate(poly: List[float], seeds: List[float]) -> List[float]:
    deg = len(poly) - 1
    if deg == 1:
        return [-poly[1] / poly[0]]
    dpoly = [a * (deg - k) for k, a in enumerate(poly[:-1])]
    crit = _isolate(dpoly, _closed_form_seeds(dpoly))
    bound = max([_root_bound(poly)] + [abs(c) * 2.0 + 1.0 for c in crit])
    points = [-bound] + crit + [bound]
    vals = [polyval(poly, x) for x in points]
    roots = []
    # double roots sit on a critical point without a sign change; accept one
    # only when its value is within the rounding error of Horner evaluation
    for c, fc in zip(crit, vals[1:-1]):
        if abs(fc) <= _ZERO_TOL * polyval([abs(a) for a in poly], abs(c)):
            roots.append(c)
    for (a, b), (fa, fb) in zip(zip(points, points[1:]), zip(vals, vals[1:])):
        if fa == 0.0 or fb == 0.0 or (fa < 0.0) == (fb < 0.0) or not a < b:
            continue
        roots.append(_bracketed_root(poly, a, b, fa, seeds))
    return _merge(sorted(roots))


def _merge(roots: List[float]) -> List[float]:
    out: List[float] = []
    for t in roots:
        if not out or abs(t - out[-1]) > _MERGE_TOL * max(1.0, abs(out[-1])):
            out.append(t)
    return out


def real_roots(coeffs: Sequence[float]) -> List[float]:
    """All real roots of the polynomial with ``coeffs`` in descending powers.

    Leading zeros lower the degree.  A nonzero constant has no roots; the
    zero polynomial raises :class:`DegenerateInputError`.  Roots closer than
    ``1e-8`` (relative) are merged; the result is sorted ascending and every
    root satisfies ``|p(t)| <= residual_bound(coeffs, t)``.
    """
    poly = _trim(coeffs)
    deg = len(poly) - 1
    if deg > 4:
        raise ValueError(f"degree {deg} > 4 not supported")
    if deg == 0:
        return []
    roots = _isolate(poly, _closed_form_seeds(poly))
    return [t for t in roots if math.isfinite(t) and abs(polyval(poly, t)) <= residual_bound(poly, t)]
