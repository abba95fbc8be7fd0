"""Invertibility machinery for the sequence algebra.

Contains the geometric-series inverse, the perturbation bound for
inverses, quadratic residual refinement, grid certification of a minimum
modulus on the unit circle, the full inversion pipeline (reciprocal
sampling + refinement + certificate), and quotient-norm witnesses.

A returned :class:`InversionCertificate` is self-checking: its residual
is recomputable from the input and the witness alone, and a residual
below one *is* the proof of invertibility via the geometric series.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from . import l1z
from .certs import CU_ZERO, ULP, CertUpper, cu, cu_add, cu_div, cu_mul, _up
from .errors import CertificationFailure, HypothesisFailure, InvalidInput
from .l1z import L1ZSeq, convolve, delta, norm_upper, sub

_DEFAULT_GRID_CAP = 2 ** 20
_DEGREE_CAP = 2 ** 20


def _grid_cap() -> int:
    raw = os.environ.get("WIENER_MAX_GRID")
    if raw is None:
        return _DEFAULT_GRID_CAP
    try:
        return max(8, int(raw))
    except ValueError:
        return _DEFAULT_GRID_CAP


@dataclass(frozen=True)
class InversionCertificate:
    """Witness plus certified residual one-norm and the parameters used."""

    witness: L1ZSeq
    residual: CertUpper
    params: Dict[str, object] = field(default_factory=dict)

    def to_jsonable(self) -> dict:
        return {
            "witness": l1z.to_jsonable(self.witness),
            "residual": self.residual.value,
            "params": dict(self.params),
        }


def _conv_roundoff(a: L1ZSeq, b: L1ZSeq) -> CertUpper:
    """Envelope for the deviation of floating convolution from the true one.

    Each output coefficient is a sum of at most ``min(m_a, m_b)``
    products; summed over all outputs the error stays below this bound.
    """
    m = min(len(a.coeffs), len(b.coeffs)) + 4
    return cu_mul(cu(4.0 * ULP * m), cu_mul(norm_upper(a), norm_upper(b)))


def residual_norm(f: L1ZSeq, witness: L1ZSeq) -> CertUpper:
    """Certified ``||unit - f * witness||_1``; the certificate's content."""
    base = norm_upper(sub(delta(0), convolve(f, witness)))
    return cu_add(base, _conv_roundoff(f, witness))


def neumann_invert(x: L1ZSeq, target: float) -> Tuple[L1ZSeq, InversionCertificate]:
    """Inverse by the geometric series in ``1 - x``.

    Requires a certified ``||1 - x|| < 1``; the series is cut once its
    certified remainder drops below ``target`` and the remainder goes
    into the tail of the returned inverse.
    """
    if not target > 0.0:
        raise InvalidInput("target must be positive")
    y = sub(delta(0), x)
    rho = norm_upper(y)
    if rho.value >= 1.0:
        raise HypothesisFailure(
            "Neumann hypothesis fails: ||1 - x|| >= 1",
            report={"rho": rho.value},
        )
    r = rho.value
    one_minus = 1.0 - r  # lower bound: both operands are upper-rounded
    # smallest K with r^(K+1)/(1-r) <= target, computed with upward slack
    K = 0
    pw = _up(r)
    while _up(pw / one_minus) > target:
        K += 1
        pw = _up(pw * r)
        if K > 10_000:
            raise CertificationFailure(
                "geometric remainder does not reach target",
                report={"rho": r, "target": target},
            )
    acc = delta(0)
    term = delta(0)
    for _ in range(K):
        term = convolve(term, y)
        acc = l1z.add(acc, term)
    remainder = cu(_up(pw / one_minus))
    inverse = L1ZSeq(acc.coeffs, cu_add(acc.tail, remainder))
    cert = InversionCertificate(
        witness=inverse,
        residual=residual_norm(x, inverse),
        params={"method": "neumann", "terms": K + 1, "target": target},
    )
    return inverse, cert


def perturb_invert_bound(M: CertUpper, u_norm: CertUpper, c: float) -> CertUpper:
    """Inverse bound ``M / (1 - c)`` for a perturbation ``||u|| <= c / M``.

    Valid whenever ``a`` has an inverse bounded by ``M``: then ``a - u``
    is invertible and its inverse is bounded by the returned value.
    """
    if not (0.0 < c < 1.0):
        raise InvalidInput("c must lie in (0, 1)")
    if M.value <= 0.0:
        raise InvalidInput("inverse bound must be positive")
    if u_norm.value * M.value > c:
        raise HypothesisFailure(
            "perturbation too large",
            report={"u_norm": u_norm.value, "allowed": c / M.value},
        )
    return cu_div(M, 1.0 - c)


def newton_refine(
    f: L1ZSeq,
    x0: L1ZSeq,
    target: float,
    max_iter: int = 40,
) -> Tuple[L1ZSeq, InversionCertificate]:
    """Quadratic refinement ``x <- x * (2 - f*x)`` with certified residual.

    The iterate is a concrete finite element: each step truncates it to
    keep the support bounded and discards the dropped mass (any witness
    is admissible; the certificate is the recomputed residual of the
    finite witness itself).  The truncation budget is scaled by the norm
    of ``f`` and shrinks per step so it never floors the residual above
    ``target``.
    """
    if not target > 0.0:
        raise InvalidInput("target must be positive")
    x0 = L1ZSeq(dict(x0.coeffs))
    rho = residual_norm(f, x0)
    if rho.value >= 1.0:
        raise HypothesisFailure(
            "seed not contracting", report={"rho": rho.value}
        )
    nf = norm_upper(f).value
    x = x0
    for k in range(max_iter):
        if rho.value <= target:
            break
        two = delta(0, 2.0)
        x = convolve(x, sub(two, convolve(f, x)))
        budget = target / (8.0 * (1.0 + nf) * (2.0 ** min(k, 60)))
        x = L1ZSeq(dict(l1z.truncate(x, budget).coeffs))
        rho = residual_norm(f, x)
    else:
        raise CertificationFailure(
            "did not converge", report={"rho": rho.value, "target": target}
        )
    cert = InversionCertificate(
        witness=x,
        residual=rho,
        params={"method": "newton", "target": target, "max_iter": max_iter},
    )
    return x, cert


def circle_min_modulus_certify(
    f: L1ZSeq, eps: float, N: int
) -> Tuple[bool, Dict[str, object]]:
    """Try to prove ``|f(lam)| >= eps`` on the whole unit circle.

    Evaluates the finite part on the N-th roots of unity and subtracts
    the tail, the evaluation roundoff envelope and the Lipschitz arc
    slack ``L * pi / N``.  ``True`` is a proof; ``False`` only reports
    the failing grid point (callers may retry with a bigger N).  The
    report flags ``definitely_fails`` when some grid point's certified
    *upper* bound already sits below ``eps``: no grid can then succeed.
    """
    if N < 8:
        raise InvalidInput("grid size must be at least 8")
    if not eps > 0.0:
        raise InvalidInput("eps must be positive")
    finite = L1ZSeq(dict(f.coeffs))
    tail = f.tail.value
    L = l1z.circle_lipschitz_upper(finite).value
    arc_slack = _up(L * (math.pi / N))
    rnd = l1z.eval_roundoff_bound(finite)
    # phase roundoff of the grid points themselves, folded via L
    rnd += L * 64.0 * 2.0 ** -52

    ks = np.arange(N)
    vals = np.zeros(N, dtype=complex)
    for n, c in sorted(finite.coeffs.items()):
        vals += c * np.exp((2j * math.pi * n / N) * ks)
    mods = np.abs(vals)
    lower = mods - tail - rnd - arc_slack
    upper = mods + tail + rnd
    worst = int(np.argmin(lower))
    ok = bool(lower[worst] >= eps)
    report = {
        "N": N,
        "eps": eps,
        "min_certified_lower": float(lower[worst]),
        "worst_index": worst,
        "worst_lambda": complex(np.exp(2j * math.pi * worst / N)),
        "lipschitz": L,
        "arc_slack": arc_slack,
        "tail": tail,
        "definitely_fails": bool(np.min(upper) < eps),
    }
    return ok, report


def wiener_invert(
    f: L1ZSeq,
    eps: float,
    target: float,
    grid: int | None = None,
) -> Tuple[L1ZSeq, InversionCertificate]:
    """Certified inverse of a series bounded away from zero on the circle.

    Pipeline: certify the minimum modulus on a doubling grid, sample the
    reciprocal of the truncated symbol at roots of unity, read a
    candidate off the inverse transform, certify a contracting residual,
    then refine quadratically down to ``target``.
    """
    if not target > 0.0:
        raise InvalidInput("target must be positive")
    cap = _grid_cap()
    N = grid if grid is not None else 64
    report = None
    while True:
        ok, report = circle_min_modulus_certify(f, eps, N)
        if ok:
            break
        if report["definitely_fails"] or N >= cap:
            raise HypothesisFailure(
                "hypothesis fails: no certified minimum modulus on the circle",
                report=report,
            )
        N *= 2

    g = l1z.truncate(f, eps / 8.0) if len(f.coeffs) > 2048 else f
    lo, hi = g.support()
    deg = max(abs(lo), abs(hi), 1)

    M = 64
    while M < 2 * deg + 1:
        M *= 2
    best_rho = math.inf
    while True:
        samples = np.zeros(M, dtype=complex)
        ks = np.arange(M)
        for n, c in sorted(g.coeffs.items()):
            samples += c * np.exp((2j * math.pi * n / M) * ks)
        recip = 1.0 / samples
        coeff = np.fft.fft(recip) / M
        h_coeffs: Dict[int, complex] = {}
        for j in range(M):
            n = j if j <= M // 2 else j - M
            c = complex(coeff[j])
            if abs(c) > 1e-300:
                h_coeffs[n] = c
        h = l1z.truncate(L1ZSeq(h_coeffs), target / 8.0)
        rho = residual_norm(f, h)
        if rho.value < 1.0:
            break
        best_rho = min(best_rho, rho.value)
        M *= 2
        if M > _DEGREE_CAP:
            raise CertificationFailure(
                "inversion not certified",
                report={"best_rho": best_rho, "grid": N},
            )
    inverse, cert = newton_refine(f, h, target)
    params = dict(cert.params)
    params.update({"grid": N, "degree": M, "target": target, "eps": eps})
    return inverse, InversionCertificate(inverse, cert.residual, params)


def quotient_norm_upper(a: L1ZSeq, g: L1ZSeq, k: L1ZSeq) -> CertUpper:
    """Certified quotient-norm bound for ``a`` modulo the ideal of ``g``.

    The witness is the explicit ideal element ``g * k``.
    """
    base = norm_upper(sub(a, convolve(g, k)))
    return cu_add(base, _conv_roundoff(g, k))
