"""
Almost Periodic Polynomials
===========================

Finite exponential sums f(u) = sum_k c_k exp(i beta_k u) with complex
coefficients and real frequencies.

Connection coefficients, the spectral density kappa and the kernel
integrand are all values of this type, so the algebra here is exact up to
floating point canonicalization.

Features:
- Canonical sorted storage with frequency merging and coefficient pruning
- Addition, multiplication, conjugation and modulus squared
- Vectorized and compensated scalar evaluation
- Cosine-basis view of Hermitian (real-valued) polynomials
- JSON debug serialization
"""

import json
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np

from varband.config import settings
from varband.errors import NumericalError

Number = Union[int, float, complex]


@dataclass(frozen=True)
class CosineView:
    """
    Read-only view c0 + sum_j c_j cos(lambda_j u) of a real-valued polynomial.

    Attributes:
        c0: Constant term
        terms: Pairs (c_j, lambda_j) with lambda_j > 0, sorted by lambda_j
    """

    c0: float
    terms: Tuple[Tuple[float, float], ...]

    def __call__(self, u: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        u = np.asarray(u, dtype=float)
        out = np.full(u.shape, self.c0)
        for c, lam in self.terms:
            out = out + c * np.cos(lam * u)
        return float(out) if out.ndim == 0 else out

    def to_dict(self) -> Dict[str, Any]:
        return {"c0": self.c0, "terms": [{"c": c, "lambda": lam} for c, lam in self.terms]}


class APPoly:
    """
    Almost periodic trigonometric polynomial in canonical form.

    Frequencies are stored sorted and pairwise separated by more than the
    merge tolerance; no stored coefficient is below the pruning threshold.
    Instances are immutable.
    """

    __slots__ = ("_freqs", "_coefs")

    def __init__(
        self,
        freqs: Iterable[float] = (),
        coefs: Iterable[Number] = (),
        scale: Optional[float] = None,
    ) -> None:
        """
        Build a polynomial from raw terms.

        Args:
            freqs: Real frequencies, repeats allowed
            coefs: Complex coefficients, same length as freqs
            scale: Magnitude reference for pruning; defaults to max |coef|
        """
        f = np.asarray(list(freqs) if not isinstance(freqs, np.ndarray) else freqs, dtype=float).ravel()
        c = np.asarray(list(coefs) if not isinstance(coefs, np.ndarray) else coefs, dtype=complex).ravel()
        if f.shape != c.shape:
            raise ValueError(f"{f.size} frequencies but {c.size} coefficients")
        f, c = _canonicalize(f, c, scale)
        f.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "_freqs", f)
        object.__setattr__(self, "_coefs", c)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("APPoly is immutable")

    @classmethod
    def constant(cls, c: Number) -> "APPoly":
        return cls([0.0], [c])

    @classmethod
    def exp(cls, beta: float, c: Number = 1.0) -> "APPoly":
        """The single term c exp(i beta u)."""
        return cls([beta], [c])

    @classmethod
    def zero(cls) -> "APPoly":
        return cls()

    @property
    def freqs(self) -> np.ndarray:
        return self._freqs

    @property
    def coefs(self) -> np.ndarray:
        return self._coefs

    @property
    def max_frequency(self) -> float:
        return float(np.max(np.abs(self._freqs))) if self._freqs.size else 0.0

    @property
    def magnitude(self) -> float:
        return float(np.max(np.abs(self._coefs))) if self._coefs.size else 0.0

    def __len__(self) -> int:
        return int(self._freqs.size)

    def is_zero(self) -> bool:
        return self._freqs.size == 0

    def is_constant(self) -> bool:
        return self._freqs.size == 0 or (self._freqs.size == 1 and self._freqs[0] == 0.0)

    def constant_term(self) -> complex:
        hit = np.nonzero(self._freqs == 0.0)[0]
        return complex(self._coefs[hit[0]]) if hit.size else 0j

    def terms(self) -> List[Tuple[float, complex]]:
        return [(float(b), complex(c)) for b, c in zip(self._freqs, self._coefs)]

    def __call__(self, u: Union[float, np.ndarray]) -> Union[complex, np.ndarray]:
        """Evaluate at a point or an array of points."""
        u = np.asarray(u, dtype=float)
        if self._freqs.size == 0:
            out = np.zeros(u.shape, dtype=complex)
        else:
            out = np.exp(1j * np.multiply.outer(u, self._freqs)) @ self._coefs
        return complex(out) if out.ndim == 0 else out

    def __add__(self, other: Union["APPoly", Number]) -> "APPoly":
        return ap_add(self, _lift(other))

    __radd__ = __add__

    def __neg__(self) -> "APPoly":
        return APPoly(self._freqs, -self._coefs)

    def __sub__(self, other: Union["APPoly", Number]) -> "APPoly":
        return ap_add(self, -_lift(other))

    def __rsub__(self, other: Union["APPoly", Number]) -> "APPoly":
        return ap_add(_lift(other), -self)

    def __mul__(self, other: Union["APPoly", Number]) -> "APPoly":
        if isinstance(other, APPoly):
            return ap_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c: Number) -> "APPoly":
        return APPoly(self._freqs, self._coefs * c, scale=self.magnitude * abs(c))

    def conj(self) -> "APPoly":
        return ap_conj(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, APPoly):
            return NotImplemented
        return self.allclose(other, atol=0.0, rtol=0.0)

    __hash__ = None  # type: ignore[assignment]

    def allclose(self, other: "APPoly", atol: float = 1e-12, rtol: float = 1e-12) -> bool:
        """Term-wise comparison after subtraction."""
        diff = ap_add(self, -other)
        ref = max(self.magnitude, other.magnitude, 1.0)
        return diff.magnitude <= atol + rtol * ref

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        """True when the coefficient at -beta is the conjugate of the one at beta."""
        return ap_add(self, -ap_conj(self)).magnitude <= tol * max(self.magnitude, 1.0)

    def cosine_view(self, tol: float = 1e-12) -> CosineView:
        """
        Project a Hermitian, real-coefficient polynomial onto the cosine basis.

        Raises:
            NumericalError: If the polynomial is not real-valued or carries sine terms
        """
        if not self.is_hermitian(tol):
            raise NumericalError("cosine view requested for a non-Hermitian polynomial")
        ref = max(self.magnitude, 1.0)
        c0 = self.constant_term()
        terms = []
        for beta, c in zip(self._freqs, self._coefs):
            if beta <= 0.0:
                continue
            if abs(c.imag) > tol * ref:
                raise NumericalError(f"sine component {c.imag:.3e} at frequency {beta}")
            terms.append((2.0 * float(c.real), float(beta)))
        return CosineView(float(c0.real), tuple(terms))

    def to_list(self) -> List[Dict[str, float]]:
        return [{"freq": float(b), "re": float(c.real), "im": float(c.imag)} for b, c in zip(self._freqs, self._coefs)]

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    def __repr__(self) -> str:
        body = " + ".join(f"({c:.6g})e^(i{b:.6g}u)" for b, c in zip(self._freqs, self._coefs))
        return f"APPoly({body or '0'})"


def ap_add(f: APPoly, g: APPoly) -> APPoly:
    """Pointwise sum."""
    scale = max(f.magnitude, g.magnitude)
    return APPoly(np.concatenate((f.freqs, g.freqs)), np.concatenate((f.coefs, g.coefs)), scale=scale)


def ap_mul(f: APPoly, g: APPoly) -> APPoly:
    """Product: frequencies add, coefficients multiply."""
    if f.is_zero() or g.is_zero():
        return APPoly()
    freqs = np.add.outer(f.freqs, g.freqs).ravel()
    coefs = np.multiply.outer(f.coefs, g.coefs).ravel()
    return APPoly(freqs, coefs, scale=f.magnitude * g.magnitude)


def ap_conj(f: APPoly) -> APPoly:
    """Complex conjugate on the real line: conjugated coefficients, negated frequencies."""
    return APPoly(-f.freqs, np.conj(f.coefs), scale=f.magnitude)


def ap_modulus_squared(f: APPoly) -> APPoly:
    """|f|^2 as a Hermitian polynomial."""
    return ap_mul(f, ap_conj(f))


def ap_eval(f: APPoly, u: float) -> complex:
    """
    Evaluate at a single point with compensated summation.

    Args:
        f: Polynomial
        u: Finite real point

    Returns:
        sum_k c_k exp(i beta_k u)
    """
    if not math.isfinite(u):
        raise ValueError(f"evaluation point must be finite, got {u}")
    vals = f.coefs * np.exp(1j * f.freqs * u)
    return complex(math.fsum(vals.real.tolist()), math.fsum(vals.imag.tolist()))


def _lift(x: Union[APPoly, Number]) -> APPoly:
    return x if isinstance(x, APPoly) else APPoly.constant(x)


def _canonicalize(freqs: np.ndarray, coefs: np.ndarray, scale: Optional[float]) -> Tuple[np.ndarray, np.ndarray]:
    if freqs.size == 0:
        return freqs.astype(float), coefs.astype(complex)
    order = np.argsort(freqs, kind="stable")
    freqs, coefs = freqs[order], coefs[order]

    merge_tol = settings.merge_tolerance * (1.0 + float(np.max(np.abs(freqs))))
    # A new group starts wherever the gap to the previous frequency exceeds the tolerance.
    starts = np.concatenate(([True], np.diff(freqs) > merge_tol))
    group = np.cumsum(starts) - 1
    n_groups = int(group[-1]) + 1
    merged_c = np.zeros(n_groups, dtype=complex)
    np.add.at(merged_c, group, coefs)
    # Representative frequency: the group mean, snapped to 0 when within merge_tol of it.
    # Gaps chain, so a group may span more than merge_tol in total.
    merged_f = np.bincount(group, weights=freqs) / np.bincount(group)
    merged_f[np.abs(merged_f) <= merge_tol] = 0.0

    if scale is None:
        scale = float(np.max(np.abs(merged_c)))
    keep = np.abs(merged_c) > settings.prune_tolerance * scale
    return merged_f[keep], merged_c[keep]
