"""The convolution algebra of two-sided absolutely summable sequences.

Elements are represented by a finite-support coefficient map plus a
certified tail bound: an :class:`L1ZSeq` stands for the set of all true
sequence-space elements within ``tail`` of the finite part in the
one-norm.  All operations keep that reading sound.
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
    cu_abs,
    cu_add,
    cu_mul,
    cu_sum_abs,
)
from .errors import InvalidInput

# dense numpy convolution pays off once the double loop gets this big
_DENSE_CONV_THRESHOLD = 10_000

_CIRCLE_TOL = 1e-12


@dataclass(frozen=True)
class L1ZSeq:
    """Finite-support coefficient map ``n -> a_n`` plus a tail bound."""

    coeffs: Dict[int, complex]
    tail: CertUpper = field(default=CU_ZERO)

    def __post_init__(self):
        clean = {}
        for n, c in self.coeffs.items():
            c = complex(c)
            if math.isnan(c.real) or math.isnan(c.imag):
                raise InvalidInput("NaN coefficient")
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise InvalidInput("non-finite coefficient")
            if c != 0:
                clean[int(n)] = c
        object.__setattr__(self, "coeffs", clean)

    def support(self) -> Tuple[int, int]:
        """(min index, max index); (0, 0) for the zero element."""
        if not self.coeffs:
            return (0, 0)
        ks = self.coeffs.keys()
        return (min(ks), max(ks))

    def __eq__(self, other):
        if not isinstance(other, L1ZSeq):
            return NotImplemented
        return self.coeffs == other.coeffs and self.tail == other.tail


def zero() -> L1ZSeq:
    return L1ZSeq({})


def delta(n: int, c: complex = 1.0) -> L1ZSeq:
    """Single coefficient ``c`` at index ``n``; ``delta(0)`` is the unit."""
    return L1ZSeq({n: complex(c)})


def add(a: L1ZSeq, b: L1ZSeq) -> L1ZSeq:
    out = dict(a.coeffs)
    for n, c in b.coeffs.items():
        out[n] = out.get(n, 0j) + c
    return L1ZSeq(out, cu_add(a.tail, b.tail))


def neg(a: L1ZSeq) -> L1ZSeq:
    return L1ZSeq({n: -c for n, c in a.coeffs.items()}, a.tail)


def sub(a: L1ZSeq, b: L1ZSeq) -> L1ZSeq:
    return add(a, neg(b))


def scale(c: complex, a: L1ZSeq) -> L1ZSeq:
    c = complex(c)
    return L1ZSeq(
        {n: c * v for n, v in a.coeffs.items()},
        cu_mul(cu_abs(c), a.tail),
    )


def shift(a: L1ZSeq, k: int) -> L1ZSeq:
    """Multiply by the degree-``k`` monomial: indices move by ``k``."""
    return L1ZSeq({n + k: c for n, c in a.coeffs.items()}, a.tail)


def convolve(a: L1ZSeq, b: L1ZSeq) -> L1ZSeq:
    """Convolution product; tails combine by the subadditive cross bound."""
    tail = CU_ZERO
    if a.tail.value != 0.0 or b.tail.value != 0.0:
        na, nb = norm_upper(a), norm_upper(b)
        tail = cu_add(
            cu_add(cu_mul(a.tail, nb), cu_mul(b.tail, na)),
            cu_mul(a.tail, b.tail),
        )
    if not a.coeffs or not b.coeffs:
        return L1ZSeq({}, tail)
    if len(a.coeffs) * len(b.coeffs) <= _DENSE_CONV_THRESHOLD:
        out: Dict[int, complex] = {}
        for i, ca in sorted(a.coeffs.items()):
            for j, cb in sorted(b.coeffs.items()):
                out[i + j] = out.get(i + j, 0j) + ca * cb
        return L1ZSeq(out, tail)
    lo_a, hi_a = a.support()
    lo_b, hi_b = b.support()
    va = np.zeros(hi_a - lo_a + 1, dtype=complex)
    vb = np.zeros(hi_b - lo_b + 1, dtype=complex)
    for n, c in a.coeffs.items():
        va[n - lo_a] = c
    for n, c in b.coeffs.items():
        vb[n - lo_b] = c
    vc = np.convolve(va, vb)
    base = lo_a + lo_b
    out = {base + k: complex(v) for k, v in enumerate(vc) if v != 0}
    return L1ZSeq(out, tail)


def norm_upper(a: L1ZSeq) -> CertUpper:
    """Certified one-norm bound: coefficient mass plus tail."""
    body = cu_sum_abs(c for _, c in sorted(a.coeffs.items()))
    return cu_add(body, a.tail)


def eval_circle(a: L1ZSeq, lam: complex) -> Tuple[complex, CertUpper]:
    """Evaluate the series at a point of the unit circle.

    Returns the finite-part value and an error bound covering the
    unrepresented tail (``|r(lam)| <= ||r||_1``).
    """
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > _CIRCLE_TOL:
        raise InvalidInput("not on circle")
    v = 0j
    for n, c in sorted(a.coeffs.items()):
        v += c * lam ** n
    return v, a.tail


def eval_roundoff_bound(a: L1ZSeq) -> float:
    """Floating-point error envelope for `eval_circle` on the unit circle.

    Power-by-squaring of a unit complex number after ``|n|`` effective
    multiplies plus the accumulation sum stay well inside
    ``8 * (max|n| + m + 2) * ulp * sum|a_n|``; generous by design.
    """
    if not a.coeffs:
        return 0.0
    lo, hi = a.support()
    radius = max(abs(lo), abs(hi))
    mass = sum(abs(c) for c in a.coeffs.values())
    return 8.0 * ULP * (radius + len(a.coeffs) + 2) * mass


def circle_lipschitz_upper(a: L1ZSeq) -> CertUpper:
    """Bound L with ``|a(lam) - a(mu)| <= L |lam - mu|`` on the circle.

    Needs finite support: a nonzero tail has no known index radius, so
    no Lipschitz constant can be certified for it.
    """
    if a.tail.value != 0.0:
        raise InvalidInput("lipschitz unavailable for infinite tail")
    return cu_sum_abs(abs(n) * c for n, c in sorted(a.coeffs.items()) if n != 0)


def truncate(a: L1ZSeq, budget: float) -> L1ZSeq:
    """Drop smallest-modulus coefficients within an l1 budget.

    Dropped mass (certified) is added to the tail, so the result still
    represents everything the input did.  Ties break toward smaller
    ``|index|``, then the positive index.
    """
    if not budget > 0.0:
        raise InvalidInput("truncation budget must be positive")
    order = sorted(
        a.coeffs.items(),
        key=lambda item: (abs(item[1]), abs(item[0]), -item[0]),
    )
    kept = dict(a.coeffs)
    dropped = CU_ZERO
    for n, c in order:
        step = cu_add(dropped, cu_abs(c))
        if step.value > budget:
            break
        dropped = step
        del kept[n]
    return L1ZSeq(kept, cu_add(a.tail, dropped))


# ---------------------------------------------------------------------------
# JSON element format


def to_jsonable(a: L1ZSeq) -> dict:
    return {
        "coeffs": [
            {"n": n, "re": c.real, "im": c.imag}
            for n, c in sorted(a.coeffs.items())
        ],
        "tail": a.tail.value,
    }


def from_jsonable(obj: dict) -> L1ZSeq:
    try:
        coeffs = {}
        for entry in obj["coeffs"]:
            n = int(entry["n"])
            if n in coeffs:
                raise InvalidInput("duplicate index %d" % n)
            coeffs[n] = complex(float(entry["re"]), float(entry["im"]))
        tail = CertUpper(float(obj.get("tail", 0.0)))
        return L1ZSeq(coeffs, tail)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput("malformed sequence JSON: %s" % exc) from exc


def dumps(a: L1ZSeq) -> str:
    return json.dumps(to_jsonable(a))


def loads(text: str) -> L1ZSeq:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput("invalid JSON: %s" % exc) from exc
    if not isinstance(obj, dict):
        raise InvalidInput("expected a JSON object")
    return from_jsonable(obj)
