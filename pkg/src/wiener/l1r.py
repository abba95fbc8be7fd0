"""The convolution algebra of integrable functions on the line.

Elements are compactly supported complex piecewise-linear functions plus
an L1 slack: a :class:`PLFunction` stands for every true integrable
function within ``l1_slack`` of it in the one-norm.  Convolution,
Fourier evaluation, the Fejer and De la Vallee Poussin kernels, and the
Tauberian division algorithm all maintain that certified reading.

Convolution strategy: both inputs are resampled onto a common uniform
grid (certified resampling error), the exact node values of the
convolution of the resampled pair are computed by a discrete convolution
smoothed with the hat-times-hat stencil ``[1/6, 2/3, 1/6]``, and the
piecewise-linear interpolation error of the exact (piecewise-cubic)
convolution is certified through total-variation bounds.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from .certs import (
    CU_ZERO,
    ULP,
    CertUpper,
    cu,
    cu_add,
    cu_from_float_sum,
    cu_mul,
    _up,
)
from .errors import (
    CertificationFailure,
    HypothesisFailure,
    InvalidInput,
    ToleranceUnreachable,
)

_NODE_CAP = 2 ** 23
_NORM_PANELS = 64
_SEG_CHUNK = 1 << 16


@dataclass(frozen=True)
class PLFunction:
    """Compactly supported piecewise-linear function plus an L1 budget."""

    breakpoints: np.ndarray
    values: np.ndarray
    l1_slack: CertUpper = field(default=CU_ZERO)

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=complex)
        if bp.ndim != 1 or bp.size < 2 or vals.shape != bp.shape:
            raise InvalidInput("need matching 1-d breakpoints and values, m >= 1")
        if not np.all(np.isfinite(bp)) or not np.all(np.isfinite(vals)):
            raise InvalidInput("non-finite breakpoint or value")
        if not np.all(np.diff(bp) > 0):
            raise InvalidInput("breakpoints must be strictly increasing")
        if vals[0] != 0 or vals[-1] != 0:
            raise InvalidInput("boundary values must vanish")
        bp.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    def span(self) -> Tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    def __eq__(self, other):
        if not isinstance(other, PLFunction):
            return NotImplemented
        return (
            np.array_equal(self.breakpoints, other.breakpoints)
            and np.array_equal(self.values, other.values)
            and self.l1_slack == other.l1_slack
        )


def zero_fn() -> PLFunction:
    return PLFunction(np.array([0.0, 1.0]), np.zeros(2, dtype=complex))


def triangle(center: float = 0.0, halfwidth: float = 1.0, height: complex = 1.0) -> PLFunction:
    if not halfwidth > 0:
        raise InvalidInput("halfwidth must be positive")
    bp = np.array([center - halfwidth, center, center + halfwidth])
    vals = np.array([0.0, height, 0.0], dtype=complex)
    return PLFunction(bp, vals)


def evaluate(f: PLFunction, xs) -> np.ndarray:
    """Pointwise values (zero outside the support)."""
    xs = np.asarray(xs, dtype=float)
    re = np.interp(xs, f.breakpoints, f.values.real, left=0.0, right=0.0)
    im = np.interp(xs, f.breakpoints, f.values.imag, left=0.0, right=0.0)
    return re + 1j * im


# ---------------------------------------------------------------------------
# norms and variation bounds


def _segment_abs_masses(f: PLFunction) -> np.ndarray:
    """Per-segment upper bounds on the integral of |f|.

    The modulus of a complex-linear segment is convex, so the composite
    trapezoid rule overestimates the true integral on every panel.
    """
    t = np.linspace(0.0, 1.0, _NORM_PANELS + 1)
    w = np.full(_NORM_PANELS + 1, 1.0 / _NORM_PANELS)
    w[0] = w[-1] = 0.5 / _NORM_PANELS
    dx = np.diff(f.breakpoints)
    out = np.empty(dx.size)
    for lo in range(0, dx.size, _SEG_CHUNK):
        hi = min(lo + _SEG_CHUNK, dx.size)
        seg = (
            f.values[lo:hi, None] * (1.0 - t)[None, :]
            + f.values[lo + 1 : hi + 1, None] * t[None, :]
        )
        out[lo:hi] = np.abs(seg) @ w * dx[lo:hi]
    return out


def norm_l1(f: PLFunction) -> CertUpper:
    """Certified one-norm: convexity-tight trapezoid panels plus slack."""
    masses = _segment_abs_masses(f)
    body = cu_from_float_sum(float(np.sum(masses)), masses.size * (_NORM_PANELS + 2))
    return cu_add(body, f.l1_slack)


def _value_variation(f: PLFunction) -> float:
    """Upper bound on the total variation of f (zero outside the support)."""
    tv = float(np.sum(np.abs(np.diff(f.values))))
    return _up(tv * (1.0 + f.values.size * ULP))


def _slope_variation(f: PLFunction) -> float:
    """Upper bound on the variation of f' as a measure (kink jump mass)."""
    slopes = np.diff(f.values) / np.diff(f.breakpoints)
    jumps = np.abs(np.diff(slopes))
    total = abs(slopes[0]) + float(np.sum(jumps)) + abs(slopes[-1])
    return _up(total * (1.0 + (slopes.size + 2) * ULP))


# ---------------------------------------------------------------------------
# linear structure


def translate(f: PLFunction, x: float) -> PLFunction:
    """Shift of the argument: the result at y is the input at x + y."""
    return PLFunction(f.breakpoints - x, f.values, f.l1_slack)


def scale_fn(c: complex, f: PLFunction) -> PLFunction:
    c = complex(c)
    return PLFunction(
        f.breakpoints,
        c * f.values,
        cu_mul(cu(_up(abs(c))), f.l1_slack),
    )


def add_fn(f: PLFunction, g: PLFunction) -> PLFunction:
    """Pointwise sum on the union grid (exact up to evaluation roundoff)."""
    bp = np.union1d(f.breakpoints, g.breakpoints)
    vals = evaluate(f, bp) + evaluate(g, bp)
    vals[0] = 0.0
    vals[-1] = 0.0
    # interpolation roundoff, spread over the local spacing
    spacing = float(np.max(np.diff(bp)))
    rnd = 16.0 * ULP * float(np.sum(np.abs(vals))) * spacing
    slack = cu_add(cu_add(f.l1_slack, g.l1_slack), cu(_up(rnd)))
    return PLFunction(bp, vals, slack)


def sub_fn(f: PLFunction, g: PLFunction) -> PLFunction:
    return add_fn(f, scale_fn(-1.0, g))


# ---------------------------------------------------------------------------
# convolution


def _resample_uniform(f: PLFunction, h: float) -> Tuple[PLFunction, float]:
    """Uniform-grid re-interpolation and a certified L1 error for it."""
    lo, hi = f.span()
    # the extra node guarantees the grid covers the support even after
    # rounding inside ceil
    n = int(math.ceil((hi - lo) / h)) + 1
    if n < 2:
        n = 2
    bp = lo + h * np.arange(n + 1)
    vals = evaluate(f, bp)
    vals[0] = 0.0
    vals[-1] = 0.0
    err = _up(0.25 * h * h * _slope_variation(f))
    rnd = 16.0 * ULP * float(np.sum(np.abs(vals))) * h
    out = PLFunction(bp, vals, cu_add(f.l1_slack, cu(_up(err + rnd))))
    return out, err


def _fast_conv(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, float]:
    """Full discrete convolution and a per-node roundoff envelope."""
    n_out = a.size + b.size - 1
    if a.size * b.size <= 1 << 21:
        out = np.convolve(a, b)
        eta = (min(a.size, b.size) + 4.0) * 2.0 * ULP
    else:
        nfft = 1
        while nfft < n_out:
            nfft *= 2
        fa = np.fft.fft(a, nfft)
        fb = np.fft.fft(b, nfft)
        out = np.fft.ifft(fa * fb)[:n_out]
        eta = 8.0 * ULP * (math.log2(nfft) + 2.0)
    node_err = eta * float(np.linalg.norm(a) * np.linalg.norm(b))
    return out, _up(node_err)


def convolve(f: PLFunction, g: PLFunction, tol: float) -> PLFunction:
    """Convolution with certified L1 error at most ``tol`` plus slack terms."""
    if not tol > 0.0:
        raise InvalidInput("tol must be positive")
    if not np.any(f.values) or not np.any(g.values):
        slack = cu_add(
            cu_add(cu_mul(f.l1_slack, norm_l1(g)), cu_mul(g.l1_slack, norm_l1(f))),
            cu_mul(f.l1_slack, g.l1_slack),
        )
        return PLFunction(np.array([0.0, 1.0]), np.zeros(2, dtype=complex), slack)

    tv_f, tv_g = _value_variation(f), _value_variation(g)
    sv_f, sv_g = _slope_variation(f), _slope_variation(g)
    nf, ng = norm_l1(f), norm_l1(g)
    denom = _up(1.01 * (tv_f * tv_g + sv_f * ng.value + sv_g * (nf.value + 1e-30)))
    h = math.sqrt(2.0 * tol / denom)
    span = (f.span()[1] - f.span()[0]) + (g.span()[1] - g.span()[0])
    if span / h > _NODE_CAP:
        raise ToleranceUnreachable("tolerance unreachable")

    fh, _ = _resample_uniform(f, h)
    gh, _ = _resample_uniform(g, h)
    w, node_err = _fast_conv(fh.values, gh.values)
    stencil = np.array([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0])
    nodes = h * np.convolve(w, stencil)
    nodes[0] = 0.0
    nodes[-1] = 0.0
    # the stencil convolution prepends one node at base - h (exactly zero
    # there since boundary values vanish)
    base = fh.breakpoints[0] + gh.breakpoints[0]
    bp = (base - h) + h * np.arange(nodes.size)

    # interpolation error of the exact piecewise-cubic convolution
    interp = _up(0.25 * h * h * _up(1.01 * tv_f * tv_g))
    fft_l1 = _up(nodes.size * h * h * node_err)
    nfh, ngh = norm_l1(fh), norm_l1(gh)
    cross = cu_add(
        cu_add(cu_mul(fh.l1_slack, ngh), cu_mul(gh.l1_slack, nfh)),
        cu_mul(fh.l1_slack, gh.l1_slack),
    )
    slack = cu_add(cross, cu(_up(interp + fft_l1)))
    return PLFunction(bp, nodes, slack)


# ---------------------------------------------------------------------------
# Fourier transform evaluation


def _transform_chunk(xi, Lseg, vi, si, ps) -> np.ndarray:
    """Closed-form segment transforms for a block of frequencies.

    Per segment of length L starting at x0 with value v and slope s the
    contribution is ``exp(-i p x0) * (v * I0 + s * I1)`` where I0, I1
    are the moments of ``exp(-i p u)`` on [0, L]; a short power series
    takes over when ``|p| L`` is tiny.
    """
    I0, I1 = _segment_moments(Lseg, ps)
    phase = np.exp(-1j * ps[:, None] * xi[None, :])
    return (phase * (vi[None, :] * I0 + si[None, :] * I1)).sum(axis=1)


def _czt(a: np.ndarray, k: int, theta: float) -> np.ndarray:
    """Chirp-Z sums ``A_j = sum_i a_i exp(-1j theta i j)`` via Bluestein."""
    n = a.size
    idx_n = np.arange(n)
    idx_k = np.arange(k)
    y = a * np.exp(-0.5j * theta * idx_n.astype(float) ** 2)
    ls = np.arange(-(n - 1), k)
    v = np.exp(0.5j * theta * ls.astype(float) ** 2)
    L = 1
    while L < n + k - 1 + n - 1:
        L *= 2
    conv = np.fft.ifft(np.fft.fft(y, L) * np.fft.fft(v, L))[: n + k - 1]
    core = conv[n - 1 : n - 1 + k]
    return np.exp(-0.5j * theta * idx_k.astype(float) ** 2) * core


def _uniform_spacing(xs: np.ndarray) -> float | None:
    """Spacing if the grid is uniform to within a relative 1e-9, else None."""
    if xs.size < 3:
        return float(xs[1] - xs[0]) if xs.size == 2 else None
    h = (float(xs[-1]) - float(xs[0])) / (xs.size - 1)
    if h <= 0:
        return None
    ideal = float(xs[0]) + h * np.arange(xs.size)
    if float(np.max(np.abs(xs - ideal))) <= 1e-9 * h:
        return h
    return None


def fourier_eval_many(f: PLFunction, ps) -> Tuple[np.ndarray, CertUpper]:
    """Transform values at many frequencies, plus a shared error bound.

    Uniform breakpoint and frequency grids take a chirp-Z fast path;
    anything else falls back to chunked closed-form segment sums.
    """
    ps = np.asarray(ps, dtype=float)
    xi = f.breakpoints[:-1]
    Lseg = np.diff(f.breakpoints)
    vi = f.values[:-1]
    si = np.diff(f.values) / Lseg
    body = float(np.sum((np.abs(f.values[:-1]) + np.abs(f.values[1:])) * 0.5 * Lseg))
    out = None
    grid_err = 0.0
    if ps.size * xi.size > 1 << 22 and ps.size >= 2:
        h = _uniform_spacing(f.breakpoints)
        dp = _uniform_spacing(ps)
        if h is not None and dp is not None:
            # f_hat(p) = I0(p) E_v(p) + I1(p) E_s(p) with the node sums
            # E_a(p_j) = exp(-i p_j x0) sum_i a'_i exp(-i dp h i j)
            x0 = float(f.breakpoints[0])
            base = np.exp(-1j * ps[0] * (x0 + h * np.arange(xi.size)))
            ev = _czt(vi * base, ps.size, dp * h)
            es = _czt(si * base, ps.size, dp * h)
            I0, I1 = _segment_moments(np.full(1, h), ps)
            out = np.exp(-1j * (ps - ps[0]) * x0) * (
                I0[:, 0] * ev + I1[:, 0] * es
            )
            # positions were treated as exactly uniform; account the drift
            ideal = x0 + h * np.arange(f.breakpoints.size)
            dev = float(np.max(np.abs(f.breakpoints - ideal)))
            grid_err = 2.0 * float(np.max(np.abs(ps))) * dev * (body + 1.0)
    if out is None:
        out = np.zeros(ps.size, dtype=complex)
        pchunk = max(1, (1 << 21) // max(1, xi.size))
        for lo in range(0, ps.size, pchunk):
            hi = min(lo + pchunk, ps.size)
            for slo in range(0, xi.size, _SEG_CHUNK):
                shi = min(slo + _SEG_CHUNK, xi.size)
                out[lo:hi] += _transform_chunk(
                    xi[slo:shi], Lseg[slo:shi], vi[slo:shi], si[slo:shi], ps[lo:hi]
                )
    rnd = 64.0 * ULP * (xi.size + 8.0) * (body + 1e-300) + grid_err
    err = cu_add(f.l1_slack, cu(_up(rnd)))
    return out, err


def _segment_moments(Lseg: np.ndarray, ps: np.ndarray):
    """Moments I0, I1 of ``exp(-i p u)`` over [0, L] per (p, segment)."""
    L = Lseg[None, :]
    q = -1j * ps[:, None]
    qL = q * L
    small = np.abs(qL) < 1e-4
    qL_safe = np.where(small, 1.0, qL)
    eqL = np.exp(qL)
    I0 = np.where(
        small,
        L * (1.0 + qL / 2.0 + qL * qL / 6.0 + qL * qL * qL / 24.0),
        (eqL - 1.0) / qL_safe * L,
    )
    I1 = np.where(
        small,
        L * L * (0.5 + qL / 3.0 + qL * qL / 8.0 + qL * qL * qL / 30.0),
        L * L * (eqL * (qL - 1.0) + 1.0) / (qL_safe * qL_safe),
    )
    return I0, I1


def fourier_eval(f: PLFunction, p: float) -> Tuple[complex, CertUpper]:
    """Transform value at one frequency with its certified error."""
    vals, err = fourier_eval_many(f, np.array([float(p)]))
    return complex(vals[0]), err


def transform_lipschitz_upper(f: PLFunction) -> CertUpper:
    """Certified bound on the derivative of the transform of the PL part.

    The transform's derivative is bounded by the x-weighted mass, itself
    bounded segmentwise by max|x| times the segment mass.
    """
    masses = _segment_abs_masses(f)
    xmax = np.maximum(np.abs(f.breakpoints[:-1]), np.abs(f.breakpoints[1:]))
    total = float(np.sum(masses * xmax))
    return cu_from_float_sum(total, masses.size * (_NORM_PANELS + 4))


# ---------------------------------------------------------------------------
# kernels


def _fejer_values(lam: float, xs: np.ndarray) -> np.ndarray:
    y = lam * xs
    small = np.abs(y) < 1e-4
    ys = np.where(small, 1.0, y)
    out = np.where(
        small,
        (1.0 - y * y / 12.0) / (2.0 * math.pi),
        (np.sin(ys / 2.0) / (ys / 2.0)) ** 2 / (2.0 * math.pi),
    )
    return lam * out


def _fejer_curvature(lam: float, x_lo: np.ndarray) -> np.ndarray:
    """Upper bound on |second derivative| of the scaled kernel past |x| >= x_lo."""
    y = lam * x_lo
    near = np.abs(y) < 1.0
    ys = np.where(near, 1.0, np.abs(y))
    far = (1.0 / ys ** 2 + 4.0 / ys ** 3 + 12.0 / ys ** 4) / math.pi
    return lam ** 3 * np.where(near, 0.05, far)


def fejer_kernel(lam: float, support_tol: float) -> PLFunction:
    """Truncated, discretized Fejer kernel with certified L1 slack.

    The discarded tail mass is bounded through the envelope
    ``2 / (pi * lam * x**2)`` and the discretization error through a
    curvature bound, both folded into ``l1_slack``.
    """
    if not (lam > 0.0 and support_tol > 0.0):
        raise InvalidInput("lam and support_tol must be positive")
    X = 4.0 / (math.pi * lam * support_tol)
    X = max(X, 4.0 / lam)
    tail = _up(4.0 / (math.pi * lam * X))

    budget = support_tol
    Y = lam * X
    J = 0.05 + (Y - 1.0 + 4.0 * math.log(Y) + 12.0 * (1.0 - 1.0 / Y)) / math.pi
    theta = math.sqrt(2.0 * budget / J)
    while True:
        pos = [0.0]
        x = 0.0
        while x < X:
            x = x + theta * max(x, 1.0 / lam)
            pos.append(min(x, X))
        pos = np.array(pos)
        bp = np.concatenate([-pos[::-1][:-1], pos])
        vals = _fejer_values(lam, bp).astype(complex)
        edge = _up(float(abs(vals[0])) * float(bp[1] - bp[0]))
        vals[0] = 0.0
        vals[-1] = 0.0
        h_seg = np.diff(bp)
        x_lo = np.minimum(np.abs(bp[:-1]), np.abs(bp[1:]))
        disc_terms = 0.25 * h_seg ** 3 * _fejer_curvature(lam, x_lo)
        disc = float(np.sum(disc_terms))
        if disc <= 1.5 * budget or theta < 1e-6:
            break
        theta /= 2.0
    disc_cu = cu_from_float_sum(disc, disc_terms.size + 4)
    slack = cu_add(cu_add(cu(tail), disc_cu), cu(_up(edge + 1e-12)))
    return PLFunction(bp, vals, slack)


def dlvp_kernel(lam: float, support_tol: float) -> PLFunction:
    """De la Vallee Poussin kernel: twice the double-rate Fejer kernel
    minus the base one.  Its transform is one on ``[-lam, lam]`` and
    supported in ``[-2 lam, 2 lam]``, within the combined slack."""
    k2 = fejer_kernel(2.0 * lam, support_tol / 4.0)
    k1 = fejer_kernel(lam, support_tol / 4.0)
    return add_fn(scale_fn(2.0, k2), scale_fn(-1.0, k1))


def dlvp_hat(lam: float, ps) -> np.ndarray:
    """The ideal transform of the De la Vallee Poussin kernel."""
    a = np.abs(np.asarray(ps, dtype=float))
    return np.clip(np.minimum(1.0, 2.0 - a / lam), 0.0, 1.0)


def spectrum_compactify(g: PLFunction, lam: float, tol: float) -> PLFunction:
    """Smooth ``g`` with the Fejer kernel: hat-damped, band-limited transform."""
    if not (lam > 0.0 and tol > 0.0):
        raise InvalidInput("lam and tol must be positive")
    ng = norm_l1(g).value
    kf = fejer_kernel(lam, tol / (4.0 * (ng + 1.0)))
    return convolve(kf, g, tol / 2.0)


# ---------------------------------------------------------------------------
# Tauberian division


def certify_transform_lower(
    f: PLFunction, band: float, eps: float, max_points: int = 1 << 21
) -> Dict[str, object]:
    """Prove ``|f_hat| >= eps`` on ``[-band, band]`` by grid plus Lipschitz.

    Pointwise the transform of any represented element differs from the
    PL transform by at most the slack, and between grid points by at
    most the Lipschitz bound times half the spacing.  Raises
    HypothesisFailure when the bound cannot be certified.
    """
    lip = transform_lipschitz_upper(f).value
    npts = 257
    report: Dict[str, object] = {}
    while True:
        ps = np.linspace(-band, band, npts)
        spacing = 2.0 * band / (npts - 1)
        vals, err = fourier_eval_many(f, ps)
        mods = np.abs(vals)
        fill = _up(lip * spacing / 2.0)
        lower = mods - err.value - fill
        worst = int(np.argmin(lower))
        report = {
            "points": npts,
            "min_certified_lower": float(lower[worst]),
            "worst_p": float(ps[worst]),
            "lipschitz": lip,
            "fill_slack": fill,
            "transform_err": err.value,
        }
        if lower[worst] >= eps:
            report["ok"] = True
            return report
        if float(np.min(mods + err.value)) < eps:
            raise HypothesisFailure("hypothesis not certified", report=report)
        if npts >= max_points:
            raise HypothesisFailure("hypothesis not certified", report=report)
        npts = 2 * npts - 1


def tauberian_divide(
    f: PLFunction,
    g: PLFunction,
    band: float,
    eps: float,
    tol: float,
    max_rounds: int = 4,
) -> Tuple[PLFunction, CertUpper]:
    """Divide ``g`` by ``f`` given a transform bounded below on the band.

    Builds a witness in frequency domain (band-limited by the De la
    Vallee Poussin hat, synthesized by the inversion formula on a
    trapezoid grid, windowed to compact support) and certifies the
    residual ``||f * k - g||`` directly, refining grids on failure.
    Expected to fail, with an honest report, when ``g`` carries spectral
    mass outside the band.
    """
    if not (band > 0.0 and eps > 0.0 and tol > 0.0):
        raise InvalidInput("band, eps and tol must be positive")
    certify_transform_lower(f, band, eps)

    if not np.any(g.values) and g.l1_slack.value == 0.0:
        return zero_fn(), CU_ZERO

    sf0, sf1 = f.span()
    sg0, sg1 = g.span()
    half_f = max(abs(sf0), sf1)
    half_g = max(abs(sg0), sg1)
    Xk = max(half_g - half_f, half_g / 4.0, 4.0 / band)
    hx = min(math.pi / (8.0 * band), Xk / 64.0)

    best = math.inf
    best_k = None
    for _ in range(max_rounds):
        dp = math.pi / (4.0 * Xk)
        nneg = int(math.ceil(2.0 * band / dp))
        ps = np.linspace(-2.0 * band, 2.0 * band, 2 * nneg + 1)
        dp = ps[1] - ps[0]
        fh, _ = fourier_eval_many(f, ps)
        gh, _ = fourier_eval_many(g, ps)
        khat = gh * dlvp_hat(band, ps) / fh
        weights = np.full(ps.size, dp / (2.0 * math.pi))
        weights[0] *= 0.5
        weights[-1] *= 0.5

        nx = int(math.ceil(Xk / hx))
        xs = hx * np.arange(-nx, nx + 1)
        kv = np.zeros(xs.size, dtype=complex)
        chunk = max(1, (1 << 21) // ps.size)
        for lo in range(0, xs.size, chunk):
            hi = min(lo + chunk, xs.size)
            kv[lo:hi] = np.exp(1j * xs[lo:hi, None] * ps[None, :]) @ (weights * khat)
        kv[0] = 0.0
        kv[-1] = 0.0
        k = PLFunction(xs, kv)

        fk = convolve(f, k, tol / 8.0)
        residual = norm_l1(sub_fn(fk, g))
        if residual.value <= tol:
            return k, residual
        if residual.value < best:
            best = residual.value
            best_k = k
        Xk *= 1.5
        hx /= 2.0
    raise CertificationFailure(
        "division not certified",
        report={"best_residual": best, "tol": tol, "witness": best_k},
    )


# ---------------------------------------------------------------------------
# JSON / CSV


def to_jsonable(f: PLFunction) -> dict:
    return {
        "breakpoints": [float(x) for x in f.breakpoints],
        "values": [{"re": v.real, "im": v.imag} for v in f.values],
        "l1_slack": f.l1_slack.value,
    }


def from_jsonable(obj: dict) -> PLFunction:
    try:
        bp = np.array([float(x) for x in obj["breakpoints"]])
        vals = np.array(
            [complex(float(v["re"]), float(v["im"])) for v in obj["values"]]
        )
        slack = CertUpper(float(obj.get("l1_slack", 0.0)))
        return PLFunction(bp, vals, slack)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput("malformed function JSON: %s" % exc) from exc


def dumps(f: PLFunction) -> str:
    return json.dumps(to_jsonable(f))


def loads(text: str) -> PLFunction:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput("invalid JSON: %s" % exc) from exc
    if not isinstance(obj, dict):
        raise InvalidInput("expected a JSON object")
    return from_jsonable(obj)


def to_csv(f: PLFunction) -> str:
    lines = ["x,re,im"]
    for x, v in zip(f.breakpoints, f.values):
        lines.append("%r,%r,%r" % (float(x), v.real, v.imag))
    return "\n".join(lines) + "\n"
