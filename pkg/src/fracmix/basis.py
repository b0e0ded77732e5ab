"""Bi-orthogonal trigonometric system on [0, 1].

The spatial problem X'' + mu X = 0 with X(0) = X(1), X'(0) = 0 is not
self-adjoint: its root family {1, cos(2k pi x), x sin(2k pi x)} needs the
adjoint family {2(1-x), 4(1-x) cos(2k pi x), 4 sin(2k pi x)} to project.
This module evaluates both families, computes projections (exactly for
trig-polynomial data, by composite Gauss-Legendre otherwise), synthesizes
truncated expansions, and exposes the Gram matrix as a diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .errors import QuadratureError

KIND_CONSTANT = "constant"
KIND_COSINE = "cosine"
KIND_XSINE = "x-sine"
_KINDS = (KIND_CONSTANT, KIND_COSINE, KIND_XSINE)


@dataclass(frozen=True)
class ModeIndex:
    k: int
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if (self.kind == KIND_CONSTANT) != (self.k == 0):
            raise ValueError("constant kind requires k = 0 and vice versa")


@dataclass
class CoefficientSet:
    """Expansion coefficients (c0; c1_k cosine; c2_k x-sine) up to K modes."""

    c0: float
    c1: np.ndarray
    c2: np.ndarray

    def __post_init__(self) -> None:
        self.c1 = np.asarray(self.c1, dtype=float)
        self.c2 = np.asarray(self.c2, dtype=float)
        if self.c1.shape != self.c2.shape or self.c1.ndim != 1:
            raise ValueError("c1 and c2 must be one-dimensional, same length")
        if self.c1.size < 1:
            raise ValueError("truncation K must be >= 1")

    @property
    def K(self) -> int:
        return int(self.c1.size)

    @classmethod
    def zeros(cls, K: int) -> "CoefficientSet":
        return cls(0.0, np.zeros(K), np.zeros(K))

    def scaled(self, s: float) -> "CoefficientSet":
        return CoefficientSet(s * self.c0, s * self.c1, s * self.c2)

    def max_abs_diff(self, other: "CoefficientSet") -> float:
        return max(abs(self.c0 - other.c0),
                   float(np.max(np.abs(self.c1 - other.c1))),
                   float(np.max(np.abs(self.c2 - other.c2))))


Atom = tuple[str, int, float]


@dataclass(frozen=True)
class TrigPolynomial:
    """Finite combination of root-function atoms (kind, k, amplitude)."""

    atoms: tuple[Atom, ...]

    def __post_init__(self) -> None:
        for kind, k, _amp in self.atoms:
            ModeIndex(k, kind)  # reuse its validation

    @classmethod
    def from_atoms(cls, atoms: Iterable[Sequence]) -> "TrigPolynomial":
        return cls(tuple((str(kind), int(k), float(amp))
                         for kind, k, amp in atoms))

    @classmethod
    def constant(cls, value: float) -> "TrigPolynomial":
        return cls(((KIND_CONSTANT, 0, float(value)),))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for kind, k, amp in self.atoms:
            out = out + amp * root_function(ModeIndex(k, kind), x)
        return out

    def deriv(self, x, order: int = 1):
        """Derivative of the given order (0..4), termwise closed forms."""
        if not 0 <= order <= 4:
            raise ValueError("derivative order must be in 0..4")
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for kind, k, amp in self.atoms:
            w = 2.0 * math.pi * k
            if kind == KIND_CONSTANT:
                term = np.ones_like(x) if order == 0 else np.zeros_like(x)
            elif kind == KIND_COSINE:
                cycle = [np.cos(w * x), -np.sin(w * x),
                         -np.cos(w * x), np.sin(w * x)]
                term = w**order * cycle[order % 4]
            else:
                sin, cos = np.sin(w * x), np.cos(w * x)
                if order == 0:
                    term = x * sin
                elif order == 1:
                    term = sin + w * x * cos
                elif order == 2:
                    term = 2 * w * cos - w**2 * x * sin
                elif order == 3:
                    term = -3 * w**2 * sin - w**3 * x * cos
                else:
                    term = -4 * w**3 * cos + w**4 * x * sin
            out = out + amp * term
        return out


def _phase(x, k):
    """2 pi (k x mod 1): exact periodicity at integer k x (notably x = 1)."""
    return 2.0 * math.pi * np.mod(np.multiply.outer(x, k), 1.0)


def root_function(m: ModeIndex, x):
    """1, cos(2k pi x), or x sin(2k pi x)."""
    x = np.asarray(x, dtype=float)
    if m.kind == KIND_CONSTANT:
        return np.ones_like(x)
    ph = _phase(x, m.k)
    if m.kind == KIND_COSINE:
        return np.cos(ph)
    return x * np.sin(ph)


def adjoint_function(m: ModeIndex, x):
    """2(1-x), 4(1-x) cos(2k pi x), or 4 sin(2k pi x)."""
    x = np.asarray(x, dtype=float)
    if m.kind == KIND_CONSTANT:
        return 2.0 * (1.0 - x)
    ph = _phase(x, m.k)
    if m.kind == KIND_COSINE:
        return 4.0 * (1.0 - x) * np.cos(ph)
    return 4.0 * np.sin(ph)


_PANEL_NODES, _PANEL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _gl_nodes(panels: int) -> tuple[np.ndarray, np.ndarray]:
    edges = np.linspace(0.0, 1.0, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
    half = 0.5 * np.diff(edges)[:, None]
    x = (mid + half * _PANEL_NODES[None, :]).ravel()
    w = (half * _PANEL_WEIGHTS[None, :]).ravel()
    return x, w


FunctionLike = Union[TrigPolynomial, Callable, tuple]


def _as_callable(f: FunctionLike) -> Callable:
    if isinstance(f, TrigPolynomial):
        return f
    if callable(f):
        return f
    if isinstance(f, tuple) and len(f) == 2:
        xs = np.asarray(f[0], dtype=float)
        vs = np.asarray(f[1], dtype=float)
        if xs.ndim != 1 or xs.shape != vs.shape or xs.size < 2:
            raise ValueError("sampled data must be two equal-length 1-d arrays")
        return lambda x: np.interp(x, xs, vs)
    raise TypeError(f"cannot project object of type {type(f)!r}")


def project(f: FunctionLike, K: int, panels: int | None = None) -> CoefficientSet:
    """Coefficients of f against the adjoint family up to K modes.

    Trig-polynomial input projects exactly (the families are bi-orthonormal,
    so amplitudes read off; atoms beyond K are truncated).  Callables and
    sampled (x, values) pairs go through composite 16-point Gauss-Legendre
    panels.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if isinstance(f, TrigPolynomial):
        c = CoefficientSet.zeros(K)
        for kind, k, amp in f.atoms:
            if kind == KIND_CONSTANT:
                c.c0 += amp
            elif k <= K:
                if kind == KIND_COSINE:
                    c.c1[k - 1] += amp
                else:
                    c.c2[k - 1] += amp
        return c
    fn = _as_callable(f)
    if panels is None:
        panels = max(32, 4 * K)
    x, w = _gl_nodes(panels)
    vals = np.asarray(fn(x), dtype=float)
    if vals.shape != x.shape or not np.all(np.isfinite(vals)):
        raise QuadratureError("projection integrand is not finite on [0, 1]")
    ks = np.arange(1, K + 1)[:, None]
    cos_kx = np.cos(2.0 * math.pi * ks * x[None, :])
    sin_kx = np.sin(2.0 * math.pi * ks * x[None, :])
    c0 = 2.0 * float(np.sum(w * vals * (1.0 - x)))
    c1 = 4.0 * (cos_kx * (w * vals * (1.0 - x))[None, :]).sum(axis=1)
    c2 = 4.0 * (sin_kx * (w * vals)[None, :]).sum(axis=1)
    return CoefficientSet(c0, c1, c2)


def synthesize(c: CoefficientSet, x):
    """Evaluate c0 + sum c1_k cos(2k pi x) + sum c2_k x sin(2k pi x)."""
    x = np.asarray(x, dtype=float)
    ks = np.arange(1, c.K + 1)
    phase = _phase(x, ks)
    out = (c.c0 + np.cos(phase) @ c.c1
           + (np.sin(phase) @ c.c2) * x)
    return out if out.shape else float(out)


def synthesize_second_deriv(c: CoefficientSet, x):
    """Termwise second spatial derivative of the truncated expansion.

    cos(2k pi x) maps to -(2k pi)^2 cos(2k pi x); the associate x sin(2k pi x)
    maps to 4 k pi cos(2k pi x) - (2k pi)^2 x sin(2k pi x)."""
    x = np.asarray(x, dtype=float)
    ks = np.arange(1, c.K + 1)
    lam = 2.0 * math.pi * ks
    phase = _phase(x, ks)
    cos_part = np.cos(phase) @ (-(lam**2) * c.c1 + 2.0 * lam * c.c2)
    sin_part = (np.sin(phase) @ (-(lam**2) * c.c2)) * x
    out = cos_part + sin_part
    return out if out.shape else float(out)


def mode_list(K: int) -> list[ModeIndex]:
    """Ordering used by the Gram matrix: constant, then (cos, x-sin) pairs."""
    modes = [ModeIndex(0, KIND_CONSTANT)]
    for k in range(1, K + 1):
        modes.append(ModeIndex(k, KIND_COSINE))
        modes.append(ModeIndex(k, KIND_XSINE))
    return modes


def biorth_gram(K: int, panels: int | None = None) -> np.ndarray:
    """Matrix of integrals of root x adjoint pairs; identity when the
    quadrature resolves the highest mode."""
    if K < 1:
        raise ValueError("K must be >= 1")
    if panels is None:
        panels = max(32, 6 * K)
    x, w = _gl_nodes(panels)
    modes = mode_list(K)
    X = np.stack([root_function(m, x) for m in modes])
    Y = np.stack([adjoint_function(m, x) for m in modes])
    return (X * w[None, :]) @ Y.T
