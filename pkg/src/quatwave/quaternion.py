"""Real quaternions in the symplectic form ``q = z1 + j z2``.

Both parts are complex numbers (or numpy arrays of them, for fields sampled
on a grid).  The imaginary units obey ``i j = k`` and the swap rule
``c j = j conj(c)`` for any complex ``c``.  With that convention
``k = i j = j (-i)``, so ``a + b i + c j + d k`` has ``z1 = a + b i`` and
``z2 = c - d i``.

Examples
--------
>>> i, j = Quaternion(1j, 0), Quaternion(0, 1)
>>> i * j == Quaternion.from_components(0, 0, 0, 1)
True
>>> q = Quaternion.from_components(1, 2, 3, 4)
>>> (q * q.conj()).z1
(30+0j)
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

__all__ = [
    "Quaternion",
    "mul",
    "norm_sq",
    "complex_left_mul",
    "complex_right_mul",
    "ONE",
    "I",
    "J",
    "K",
]


@dataclass(frozen=True, eq=False)
class Quaternion:
    """Quaternion ``z1 + j z2``; ``z1``, ``z2`` may be scalars or arrays."""

    z1: Any = 0j
    z2: Any = 0j

    def __post_init__(self):
        object.__setattr__(self, "z1", _as_complex(self.z1))
        object.__setattr__(self, "z2", _as_complex(self.z2))

    @classmethod
    def from_components(cls, a, b=0.0, c=0.0, d=0.0) -> "Quaternion":
        """Build ``a + b i + c j + d k`` from four real components."""
        return cls(a + 1j * b, c - 1j * d)

    def components(self):
        """Return the four real components ``(a, b, c, d)``."""
        return (np.real(self.z1), np.imag(self.z1),
                np.real(self.z2), -np.imag(self.z2))

    def conj(self) -> "Quaternion":
        return Quaternion(np.conj(self.z1), -self.z2)

    def norm_sq(self):
        return norm_sq(self)

    def __abs__(self):
        return np.sqrt(norm_sq(self))

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, other)
        return complex_right_mul(self, other)

    def __rmul__(self, other):
        return complex_left_mul(other, self)

    def __add__(self, other):
        other = _coerce(other)
        return Quaternion(self.z1 + other.z1, self.z2 + other.z2)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Quaternion(self.z1 - other.z1, self.z2 - other.z2)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return Quaternion(-self.z1, -self.z2)

    def __eq__(self, other):
        if not isinstance(other, (Quaternion, int, float, complex)):
            return NotImplemented
        return bool(self.isclose(_coerce(other)))

    def isclose(self, other, rtol=1e-12, atol=1e-12):
        """Componentwise tolerance comparison (absolute plus relative)."""
        other = _coerce(other)
        return np.all(np.isclose(self.z1, other.z1, rtol=rtol, atol=atol)) and np.all(
            np.isclose(self.z2, other.z2, rtol=rtol, atol=atol)
        )

    def __repr__(self):
        return f"Quaternion(z1={self.z1!r}, z2={self.z2!r})"


def _as_complex(z):
    if np.ndim(z) == 0:
        return complex(z)
    return np.asarray(z, dtype=complex)


def _coerce(x) -> Quaternion:
    if isinstance(x, Quaternion):
        return x
    return Quaternion(x, 0j)


def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``.

    For ``p = z1 + j z2`` and ``q = w1 + j w2`` this is
    ``(z1 w1 - conj(z2) w2) + j (conj(z1) w2 + z2 w1)``.
    """
    z1, z2 = p.z1, p.z2
    w1, w2 = q.z1, q.z2
    return Quaternion(z1 * w1 - np.conj(z2) * w2, np.conj(z1) * w2 + z2 * w1)


def norm_sq(q: Quaternion):
    """``|z1|^2 + |z2|^2``, computed without cancellation."""
    return np.abs(q.z1) ** 2 + np.abs(q.z2) ** 2


def complex_left_mul(c, q: Quaternion) -> Quaternion:
    """``c q`` for complex ``c``: ``c z1 + j conj(c) z2``."""
    return Quaternion(c * q.z1, np.conj(c) * q.z2)


def complex_right_mul(q: Quaternion, c) -> Quaternion:
    """``q c`` for complex ``c``: ``z1 c + j z2 c``."""
    return Quaternion(q.z1 * c, q.z2 * c)


ONE = Quaternion(1, 0)
I = Quaternion(1j, 0)
J = Quaternion(0, 1)
K = Quaternion(0, -1j)
