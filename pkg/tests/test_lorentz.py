import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnnd.lorentz import (
    BIVECTOR_LABELS,
    CausalClass,
    basis,
    biv_basis,
    biv_dot,
    causal_class,
    complex_mul,
    det4,
    h_form,
    hodge,
    in_grassmannian,
    mink_dot,
    wedge,
    wedge4,
)

finite = st.floats(-10, 10, allow_nan=False)
vec4s = st.lists(finite, min_size=4, max_size=4).map(np.array)
bivs = st.lists(finite, min_size=6, max_size=6).map(np.array)


def brute_wedge4(eta, eta2):
    """Volume coefficient by expanding both bivectors into 4x4 antisymmetric forms."""
    from itertools import permutations

    def form(b):
        M = np.zeros((4, 4))
        for k, (i, j) in enumerate([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]):
            M[i, j], M[j, i] = b[k], -b[k]
        return M

    A, B = form(eta), form(eta2)
    total = 0.0
    for p in permutations(range(4)):
        sign = np.linalg.det(np.eye(4)[list(p)])
        total += sign * A[p[0], p[1]] * B[p[2], p[3]]
    return total / 4.0


def test_metric_and_causal_classes():
    assert mink_dot(basis(4), basis(4)) == -1.0
    assert causal_class(basis(1)) is CausalClass.SPACELIKE
    assert causal_class(basis(4)) is CausalClass.TIMELIKE
    assert causal_class(basis(1) + basis(4)) is CausalClass.LIGHTLIKE
    assert causal_class(np.zeros(4)) is CausalClass.ZERO
    with pytest.raises(ValueError):
        causal_class(basis(1), tol_null=0.0)


def test_hodge_on_basis():
    assert np.allclose(hodge(biv_basis("e12")), -biv_basis("e34"))
    for lbl in BIVECTOR_LABELS:
        e = biv_basis(lbl)
        assert np.allclose(hodge(hodge(e)), -e)


def test_basis_bivector_norms():
    assert biv_dot(biv_basis("e12"), biv_basis("e12")) == 1.0
    assert biv_dot(biv_basis("e34"), biv_basis("e34")) == -1.0
    assert np.allclose(biv_basis("e21"), -biv_basis("e12"))


def test_wedge4_worked_example():
    eta = biv_basis("e12") + biv_basis("e34")
    assert wedge4(eta, eta) == 2.0


@settings(max_examples=60, deadline=None)
@given(bivs, bivs)
def test_wedge4_matches_permutation_expansion(a, b):
    assert wedge4(a, b) == pytest.approx(brute_wedge4(a, b), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(bivs, bivs)
def test_hodge_defining_relation(a, b):
    assert biv_dot(hodge(a), b) == pytest.approx(wedge4(a, b), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(bivs, bivs, finite, finite)
def test_h_form_complex_bilinear(a, b, re, im):
    z = complex(re, im)
    assert h_form(complex_mul(z, a), b) == pytest.approx(z * h_form(a, b), abs=1e-8)
    assert h_form(a, b) == pytest.approx(h_form(b, a), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(vec4s, vec4s)
def test_simple_bivectors_square_to_zero(u, v):
    w = wedge(u, v)
    assert wedge4(w, w) == pytest.approx(0.0, abs=1e-8)
    # <u^v, u^v> is the Gram determinant
    gram = mink_dot(u, u) * mink_dot(v, v) - mink_dot(u, v) ** 2
    assert biv_dot(w, w) == pytest.approx(gram, rel=1e-9, abs=1e-8)


def test_grassmannian_membership():
    assert in_grassmannian(wedge(basis(1), basis(2)))
    assert not in_grassmannian(wedge(basis(1), basis(4)))  # timelike plane has norm -1
    assert not in_grassmannian(biv_basis("e12") + biv_basis("e34"))


def test_det4_orientation():
    assert det4(*np.eye(4)) == 1.0
    assert det4(basis(2), basis(1), basis(3), basis(4)) == -1.0
