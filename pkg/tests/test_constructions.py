import math

import numpy as np
import pytest

from cnnd.constructions import (
    CriterionStatus,
    SplitComplex,
    family1,
    family2,
    graph_cnnd_criterion,
    graph_surface,
    pde_residual,
    ruled_surface,
    split_equation_residual,
    split_ops,
    translation_cnnd_criterion,
    translation_surface,
)
from cnnd.errors import AlphaVanishes, NotCnnd, NotSpacelike
from cnnd.expr import eval_float, parse, to_source
from cnnd.geometry import cnnd_frame, fundamental_forms
from cnnd.lorentz import CausalClass, causal_class, mink_dot


def _random_pair(rng):
    c = [float(v) for v in rng.uniform(-0.6, 0.6, size=8)]
    f = f"{c[0]!r}*x + {c[1]!r}*y + {c[2]!r}*x*y + {c[3]!r}*sin(x - y)"
    g = f"{c[4]!r}*x + {c[5]!r}*y + {c[6]!r}*x^2 + {c[7]!r}*cos(x*y)"
    return f, g


def _fd_partials(src, x, y, h=1e-6):
    e = parse(src)
    fx = (eval_float(e, x=x + h, y=y) - eval_float(e, x=x - h, y=y)) / (2 * h)
    fy = (eval_float(e, x=x, y=y + h) - eval_float(e, x=x, y=y - h)) / (2 * h)
    return fx, fy


def test_split_complex_arithmetic():
    a, b = SplitComplex(2.0, 1.0), SplitComplex(-1.0, 3.0)
    assert a * b == SplitComplex(-2.0 + 3.0, 6.0 - 1.0)
    assert (a * a.conj()).v == 0.0 and (a * a.conj()).u == a.modulus2() == 3.0
    assert SplitComplex(1.0, 1.0).modulus2() == 0.0
    assert 2 * a == SplitComplex(4.0, 2.0) and a - b + b == a


def test_pde_residual_examples():
    assert pde_residual("x", "0", 0.3, -0.4) == -1.0
    assert pde_residual("0", "0", 0.3, -0.4) == 0.0
    f, g = family1("t^2")
    assert pde_residual(f, g, 0.2, 0.7) == pytest.approx(0.0, abs=1e-15)


def test_pde_residual_is_minus_criterion(rng):
    """Oracle: E, F, G assembled by hand from finite-difference partials."""
    for _ in range(100):
        f, g = _random_pair(rng)
        x, y = map(float, rng.uniform(-1, 1, size=2))
        fx, fy = _fd_partials(f, x, y)
        gx, gy = _fd_partials(g, x, y)
        E = 1 + fx * fx - gx * gx
        F = fx * fy - gx * gy
        G = 1 + fy * fy - gy * gy
        assert pde_residual(f, g, x, y) == pytest.approx(-(E * G - F * F - G), abs=1e-8)
        if E > 0 and E * G - F * F > 0:
            ff, _ = fundamental_forms(graph_surface(f, g), x, y)
            assert pde_residual(f, g, x, y) == pytest.approx(-(ff.det - ff.G), abs=1e-12)


def test_split_equation_equivalent_to_pde(rng):
    for _ in range(100):
        f, g = _random_pair(rng)
        x, y = map(float, rng.uniform(-1, 1, size=2))
        assert split_equation_residual(f, g, x, y) == pytest.approx(pde_residual(f, g, x, y), abs=1e-12)
    for alpha in ("t^2", "sin(t)", "exp(t/2)"):
        f, g = family1(alpha, 0.5)
        for _ in range(10):
            x, y = map(float, rng.uniform(-1, 1, size=2))
            assert abs(split_equation_residual(f, g, x, y)) < 1e-12


def test_split_ops_family1_is_conformal_and_null(rng):
    f, g = family1("t^2")
    for _ in range(10):
        x, y = map(float, rng.uniform(-1, 1, size=2))
        d = split_ops(f, g, x, y)
        assert d.dzbar == SplitComplex(0.0, 0.0)
        assert d.dz.u == pytest.approx(x + y) and d.dz.v == pytest.approx(x + y)
        assert d.dz.modulus2() == pytest.approx(0.0, abs=1e-12)
    d = split_ops("x", "0", 0.1, 0.2)
    assert d.dzbar == SplitComplex(0.5, 0.0)


def test_family1_sources_and_metric(rng):
    f, g = family1("t^2")
    assert eval_float(f, x=0.3, y=0.4) == pytest.approx(0.49 / 2)
    f, g = family1("t", 1)
    assert (eval_float(f, x=0.2, y=0.3), eval_float(g, x=0.2, y=0.3)) == pytest.approx((0.75, -0.25))
    assert parse(to_source(f)) == f
    for alpha, k in (("sin(t)", 1.0), ("t^3 - t", -2.0)):
        s = graph_surface(*family1(alpha, k))
        for _ in range(10):
            x, y = map(float, rng.uniform(-1, 1, size=2))
            ff, _ = fundamental_forms(s, x, y)
            assert (ff.E, ff.F, ff.G) == pytest.approx((1, 0, 1), abs=1e-12)
            assert abs(pde_residual(*family1(alpha, k), x, y)) <= 1e-10
            fr = cnnd_frame(s, x, y)
            assert causal_class(fr.Zperp) is CausalClass.LIGHTLIKE


def test_graph_criterion_examples():
    s = graph_surface("(x+y)^2/2", "(x+y)^2/2", Z=(1, 0, 0, 0))
    r = graph_cnnd_criterion(s, 1.0, 0.0)
    assert r.status is CriterionStatus.HOLDS
    np.testing.assert_allclose(r.z_top, [1, 0, 1, 1], atol=1e-14)
    r = graph_cnnd_criterion(graph_surface("0", "y/2", Z=(1, 0, 0, 0)), 0.4, -0.2)
    assert r.status is CriterionStatus.HOLDS_DEGENERATE
    np.testing.assert_allclose(r.z_top, [1, 0, 0, 0], atol=1e-14)
    r = graph_cnnd_criterion(graph_surface("x", "0", Z=(1, 0, 0, 0)), 0.4, -0.2)
    assert r.status is CriterionStatus.FAILS and r.residual == pytest.approx(-1.0)
    # Z = e2 tests EG - F^2 = E
    r = graph_cnnd_criterion(graph_surface("(x+y)^2/2", "(x+y)^2/2", Z=(0, 1, 0, 0)), 1.0, 0.0)
    assert r.status is CriterionStatus.HOLDS
    with pytest.raises(ValueError):
        graph_cnnd_criterion(graph_surface("0", "0", Z=(0, 0, 1, 0)), 0, 0)
    with pytest.raises(NotSpacelike):
        graph_cnnd_criterion(graph_surface("0", "2*x", Z=(1, 0, 0, 0)), 0, 0)


def test_graph_criterion_top_matches_projection_formula(rng):
    s = graph_surface("x*y/3", "(x^2 + y)/4", Z=(1, 0, 0, 0))
    ff, _ = fundamental_forms(s, 0.3, 0.2)
    r = graph_cnnd_criterion(s, 0.3, 0.2)
    assert r.status is CriterionStatus.FAILS
    # projection: Z_top is tangent and Z - Z_top is orthogonal to psi_x, psi_y
    px = np.array([1, 0, 0.2 / 3, 0.6 / 4])
    py = np.array([0, 1, 0.1, 0.25])
    assert mink_dot(r.z_perp, px) == pytest.approx(0, abs=1e-14)
    assert mink_dot(r.z_perp, py) == pytest.approx(0, abs=1e-14)


def test_family2_constant_alpha():
    fam = family2("1")
    assert fam.max_residual < 1e-12
    f, g = fam
    for x, y in ((0.3, -0.2), (0.9, 0.5)):
        assert eval_float(f, x=x, y=y) == pytest.approx((1 + x * x - y * y) / 2)
        assert eval_float(g, x=x, y=y) == pytest.approx((1 - x * x + y * y) / 2)


def test_family2_polynomial_c_matches_quadrature():
    sym = family2("1", "t^2 + 1", 0.5)
    num = family2("1", "exp(0*t) * (t^2 + 1)", 0.5)
    for x, y in ((0.3, -0.2), (0.9, 0.5), (-1.0, -1.0)):
        assert eval_float(sym.f, x=x, y=y) == pytest.approx(eval_float(num.f, x=x, y=y), abs=1e-12)
        C = (x + y) ** 3 / 3 + (x + y)
        assert eval_float(sym.f, x=x, y=y) == pytest.approx((1 + x * x - y * y + C + 0.5 * (x - y)) / 2)


def test_family2_reported_instance_is_not_a_solution():
    # Recorded discrepancy: the closed form solves the equation only for
    # constant alpha; this instance leaves an O(1) residual.
    fam = family2("2 + t^2/4")
    assert fam.sample_points == 21 * 21
    assert fam.max_residual > 0.3
    with pytest.raises(NotCnnd):
        cnnd_frame(graph_surface(*fam), 0.1, 0.2)


def test_family2_alpha_vanishes():
    with pytest.raises(AlphaVanishes):
        family2("t")
    with pytest.raises(AlphaVanishes):
        family2("1 - t^2", domain=((0, 1), (0, 1)))


def test_translation_examples():
    s = translation_surface(["cos(t)", "sin(t)", "0", "0"], ["0", "0", "sinh(t)", "cosh(t)"])
    x, y = 0.3, -0.4
    np.testing.assert_allclose(
        s.point(x, y), [math.cos(x), math.sin(x), math.sinh(y), math.cosh(y)], atol=1e-15
    )
    assert s.meta["diagnostics"]["alpha_delta_orthogonal"] is True
    assert not translation_cnnd_criterion(s, 0.3)
    assert translation_cnnd_criterion(s, math.pi / 2)
    null_padded = translation_surface(["t", "0", "t^2/2", "t^2/2"], ["0", "t", "0", "0"])
    assert all(translation_cnnd_criterion(null_padded, t) for t in np.linspace(-1, 1, 7))
    with pytest.raises(NotSpacelike):
        fundamental_forms(translation_surface(["t", "0", "0", "0"], ["0", "0", "0", "0"]), 0.1, 0.1)
    with pytest.raises(ValueError):
        translation_cnnd_criterion(graph_surface("0", "0"), 0.0)


def test_ruled_surface_shapes():
    s = ruled_surface(["0", "t", "t^3", "t^3"], (1, 0, 0, 0))
    np.testing.assert_allclose(s.point(0.5, 2.0), [0.5, 2.0, 8.0, 8.0])
    s = ruled_surface(["0", "t", "0", "0"], ["1", "0", "t", "t"])
    np.testing.assert_allclose(s.point(0.5, 2.0), [0.5, 2.0, 1.0, 1.0])
    with pytest.raises(NotSpacelike):
        fundamental_forms(ruled_surface(["0", "t", "0", "0"], (0, 0, 0, 0)), 0.1, 0.1)
    with pytest.raises(ValueError):
        ruled_surface(["0", "t", "0", "0"], (1, 0, 0))
