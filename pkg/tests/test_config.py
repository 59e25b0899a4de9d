import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ballspectral.config import ConfigError, RunConfig, parse_config, parse_degrees, serialize_config
from ballspectral.expr import Expression, ExpressionError, flux_function, point_function


def test_expression_arithmetic():
    f = point_function("exp(-s^2)*cos(pi*t) + 2", 2)
    pts = np.array([[0.0, 0.0], [1.0, 0.5]])
    assert np.allclose(f(pts), [3.0, math.exp(-1) * math.cos(math.pi / 2) + 2])


def test_expression_constant_broadcasts():
    assert np.array_equal(point_function("1.5", 3)(np.zeros((4, 3))), np.full(4, 1.5))


def test_flux_uses_normals():
    g = flux_function("s1*n1 + n3", 3)
    s = np.array([[2.0, 0.0, 0.0]])
    nrm = np.array([[0.6, 0.0, 0.8]])
    assert g(s, nrm) == pytest.approx([2.0])


@pytest.mark.parametrize(
    "text", ["__import__('os')", "s.real", "x + 1", "foo(s)", "exp(s, t)", "[s]", "s if t else 1", "lambda: 1", "s +"]
)
def test_expression_rejects(text):
    with pytest.raises(ExpressionError):
        Expression(text, ("s", "t"))


def test_expression_equality_ignores_spacing():
    assert Expression("s^2 + 1", ("s",)) == Expression("s**2+1", ("s",))
    assert Expression("s + 1", ("s",)) != Expression("s + 2", ("s",))


def test_parse_degrees():
    assert parse_degrees("2:24:2") == tuple(range(2, 25, 2))
    assert parse_degrees("1:4") == (1, 2, 3, 4)
    assert parse_degrees("3, 5,9") == (3, 5, 9)
    for bad in ("a", "1:2:3:4", "1:5:0"):
        with pytest.raises(ConfigError):
            parse_degrees(bad)


def test_parse_documented_example():
    cfg = parse_config("# planar sweep\ncase = planar-quadratic\nmode = helmholtz\ndegrees = 2:24:2\nquad = auto\na = 0.5\n")
    assert cfg.degrees == tuple(range(2, 25, 2)) and cfg.quad is None and cfg.a == 0.5


@pytest.mark.parametrize(
    "text,field",
    [
        ("case = torus", "case"),
        ("mode = wave", "mode"),
        ("degrees = 4,2", "degrees"),
        ("quad = 0", "quad"),
        ("a = 1.5", "a"),
        ("M = 1,0,0,0,1,0,0,0,0", "M"),
        ("M = 1,2", "M"),
        ("e_s = 1", "e_s"),
        ("e_s = 2.5", "e_s"),
        ("colour = red", "colour"),
        ("case = custom\nmap = planar\nf = 1", "g"),
        ("case = custom\nmap = planar\nf = 1\ng = 0", "gamma"),
        ("case = custom\nmap = planar\nf = q+1\ng = 0\ngamma = 1", "f"),
        ("map = planar", "map"),
        ("just words", "line 1"),
    ],
)
def test_config_errors_name_the_field(text, field):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.field == field


_expr = st.sampled_from(["1", "s1*s2", "exp(s1)*sin(s3)", "2 + s2^2", "cos(pi*s1)"])


@st.composite
def configs(draw):
    degrees = sorted(draw(st.sets(st.integers(0, 30), min_size=1, max_size=6)))
    case = draw(st.sampled_from(["planar-quadratic", "ellipsoid", "star", "custom"]))
    mode = draw(st.sampled_from(["helmholtz", "poisson"]))
    cfg = RunConfig(
        case=case,
        mode=mode,
        degrees=tuple(degrees),
        quad=draw(st.one_of(st.none(), st.integers(1, 40))),
        a=draw(st.floats(0.01, 0.99)),
        e_s=draw(st.integers(2, 9)),
    )
    if case == "custom":
        cfg.map = draw(st.sampled_from(["identity3", "linear", "star"]))
        cfg.f = draw(_expr)
        cfg.g = draw(_expr) + " * n1"
        cfg.exact = draw(st.one_of(st.none(), _expr))
        if mode == "helmholtz":
            cfg.gamma = draw(st.sampled_from(["1", "2.5", "1 + s1^2"]))
    return cfg.validate()


@settings(max_examples=60, deadline=None)
@given(configs())
def test_config_round_trip(cfg):
    again = parse_config(serialize_config(cfg))
    assert again == cfg


def test_round_trip_preserves_matrix():
    cfg = parse_config("case = ellipsoid\nM = 2,0,0,0,1,0,0,0.5,3\ndegrees = 1:3")
    assert parse_config(serialize_config(cfg)).M == (2.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.5, 3.0)
