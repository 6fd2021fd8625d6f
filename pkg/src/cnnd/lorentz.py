"""Linear algebra of Minkowski space R^{3,1} and its bivector space.

Vectors are length-4 float arrays in the canonical basis e1..e4 with metric
diag(+1, +1, +1, -1).  Bivectors are length-6 float arrays in the basis

    e1^e2, e1^e3, e1^e4, e2^e3, e2^e4, e3^e4

which is the order used for every six-component input and output.
"""

from __future__ import annotations

import enum
from itertools import combinations

import numpy as np

TOL_NULL = 1e-9
TOL_ZERO = 1e-12

METRIC = np.diag([1.0, 1.0, 1.0, -1.0])
BIVECTOR_PAIRS: tuple[tuple[int, int], ...] = tuple(combinations(range(4), 2))
BIVECTOR_LABELS = tuple(f"e{i + 1}{j + 1}" for i, j in BIVECTOR_PAIRS)

_SIG = np.diag(METRIC)
# <e_i^e_j, e_i^e_j> = g_ii g_jj for i < j; the induced metric is diagonal here.
BIVECTOR_WEIGHTS = np.array([_SIG[i] * _SIG[j] for i, j in BIVECTOR_PAIRS])


class CausalClass(enum.Enum):
    SPACELIKE = "Spacelike"
    TIMELIKE = "Timelike"
    LIGHTLIKE = "Lightlike"
    ZERO = "Zero"


def vec4(*components: float) -> np.ndarray:
    if len(components) == 1:
        components = tuple(components[0])
    if len(components) != 4:
        raise ValueError(f"a Vec4 needs 4 components, got {len(components)}")
    return np.array(components, dtype=float)


def basis(i: int) -> np.ndarray:
    """Canonical basis vector e_i, 1-based."""
    v = np.zeros(4)
    v[i - 1] = 1.0
    return v


def mink_dot(u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return float(u[0] * v[0] + u[1] * v[1] + u[2] * v[2] - u[3] * v[3])


def mink_norm2(v) -> float:
    return mink_dot(v, v)


def causal_class(v, tol_null: float = TOL_NULL, tol_zero: float = TOL_ZERO) -> CausalClass:
    if tol_null <= 0 or tol_zero <= 0:
        raise ValueError("tolerances must be positive")
    v = np.asarray(v, dtype=float)
    if np.linalg.norm(v) <= tol_zero:
        return CausalClass.ZERO
    q = mink_norm2(v)
    if abs(q) <= tol_null:
        return CausalClass.LIGHTLIKE
    return CausalClass.SPACELIKE if q > 0 else CausalClass.TIMELIKE


def wedge(u, v) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.array([u[i] * v[j] - u[j] * v[i] for i, j in BIVECTOR_PAIRS])


def biv_basis(label: str) -> np.ndarray:
    """Basis bivector by label, e.g. ``"e12"``; ``"e21"`` gives ``-e12``."""
    i, j = int(label[1]) - 1, int(label[2]) - 1
    sign = 1.0
    if i > j:
        i, j, sign = j, i, -1.0
    out = np.zeros(6)
    out[BIVECTOR_PAIRS.index((i, j))] = sign
    return out


def biv_dot(eta, eta2) -> float:
    return float(np.dot(BIVECTOR_WEIGHTS * np.asarray(eta, dtype=float), np.asarray(eta2, dtype=float)))


def _volume_pairing() -> np.ndarray:
    # Omega[k, l] = coefficient of e1^e2^e3^e4 in (basis k) ^ (basis l).
    omega = np.zeros((6, 6))
    for k, (i, j) in enumerate(BIVECTOR_PAIRS):
        for l, (p, q) in enumerate(BIVECTOR_PAIRS):
            idx = (i, j, p, q)
            if len(set(idx)) < 4:
                continue
            perm = list(idx)
            sign = 1
            for a in range(4):
                for b in range(a + 1, 4):
                    if perm[a] > perm[b]:
                        sign = -sign
            omega[k, l] = sign
    return omega


VOLUME_PAIRING = _volume_pairing()
# <hodge(eta), eta'> = eta ^ eta' for every eta' fixes hodge = W^{-1} Omega.
HODGE_MATRIX = np.diag(1.0 / BIVECTOR_WEIGHTS) @ VOLUME_PAIRING.T


def wedge4(eta, eta2) -> float:
    """Coefficient of the volume element e1^e2^e3^e4 in eta ^ eta2."""
    return float(np.asarray(eta, dtype=float) @ VOLUME_PAIRING @ np.asarray(eta2, dtype=float))


def hodge(eta) -> np.ndarray:
    return HODGE_MATRIX @ np.asarray(eta, dtype=float)


def complex_mul(z: complex, eta) -> np.ndarray:
    """Multiply a bivector by a complex scalar using the complex structure i = -hodge."""
    eta = np.asarray(eta, dtype=float)
    return z.real * eta - z.imag * hodge(eta)


def h_form(eta, eta2) -> complex:
    """H(eta, eta') = <eta, eta'> + i eta ^ eta'."""
    return complex(biv_dot(eta, eta2), wedge4(eta, eta2))


def in_grassmannian(eta, tol: float = TOL_NULL) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return abs(biv_dot(eta, eta) - 1.0) <= tol and abs(wedge4(eta, eta)) <= tol


def det4(a, b, c, d) -> float:
    return float(np.linalg.det(np.array([a, b, c, d], dtype=float)))
