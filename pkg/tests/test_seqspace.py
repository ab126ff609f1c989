import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from linrec.seqspace import (
    CoordFunctional, SpaceConfig, SparseVector, coord_bound_check, dual_norm,
    eval_functional, format_coords, norm, parse_coords,
)

scalars = st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False)
vectors = st.dictionaries(st.integers(1, 40), scalars, max_size=8).map(SparseVector)


def test_pairing_examples():
    assert eval_functional(CoordFunctional({3: 1}), SparseVector({3: 1})) == 1
    assert eval_functional(CoordFunctional({3: 1}), SparseVector()) == 0
    f = CoordFunctional({1: 2, 2: 1})
    assert f(SparseVector({1: 1, 2: 3})) == 5


def test_norm_examples():
    x = SparseVector({1: 3, 2: 4})
    assert norm(SparseVector({1: 1})) == 1
    assert norm(x) == pytest.approx(5)
    assert norm(x, SpaceConfig(p=math.inf)) == 4
    assert norm(x, SpaceConfig(p=1)) == 7
    assert coord_bound_check(x)


def test_dual_exponent():
    assert SpaceConfig(p=2).dual_p == 2
    assert SpaceConfig(p=1).dual_p == math.inf
    assert SpaceConfig(p=math.inf).dual_p == 1
    assert SpaceConfig(p=4).dual_p == pytest.approx(4 / 3)
    assert dual_norm(CoordFunctional({1: 3, 2: 4}), SpaceConfig(p=1)) == 4


def test_invalid_config_and_index():
    with pytest.raises(ValueError):
        SpaceConfig(p=0.5)
    with pytest.raises(ValueError):
        SpaceConfig(K=0)
    with pytest.raises(ValueError):
        SparseVector({0: 1.0})


def test_zeros_dropped_and_read_only():
    x = SparseVector({1: 0.0, 2: 1.0, 5: 0j})
    assert x.support == (2,)
    assert x[7] == 0
    with pytest.raises(TypeError):
        x.entries[3] = 1.0  # type: ignore[index]
    assert (x - x).support == ()


def test_dense_roundtrip():
    x = SparseVector({1: 1.0, 4: 2j})
    d = x.to_dense(6)
    assert d.tolist() == [1, 0, 0, 2j, 0, 0]
    assert SparseVector.from_dense(d) == x
    with pytest.raises(ValueError):
        x.to_dense(3)


@given(vectors)
def test_coord_bound_holds_for_lp(x):
    for p in (1.0, 2.0, 3.5, math.inf):
        assert coord_bound_check(x, SpaceConfig(p=p), tol=1e-9)


@given(vectors, vectors, scalars)
def test_pairing_is_bilinear(x, y, a):
    f = CoordFunctional({k: 1 + 0.5j * k for k in range(1, 41)})
    lhs = f(x + y * a)
    rhs = f(x) + a * f(y)
    assert abs(lhs - rhs) <= 1e-9 * (1 + abs(lhs) + abs(rhs))


@given(vectors, vectors)
def test_triangle_inequality(x, y):
    assert norm(x + y) <= norm(x) + norm(y) + 1e-9


@given(vectors)
def test_text_roundtrip(x):
    assert parse_coords(format_coords(x)) == x


def test_parse_errors_and_functionals():
    f = parse_coords("1:0.5 2:0+1i", CoordFunctional)
    assert isinstance(f, CoordFunctional) and f[2] == 1j
    with pytest.raises(ValueError):
        parse_coords("1=0.5")


def test_restrict_truncate_scale():
    x = SparseVector({1: 1.0, 3: 2.0, 9: -1.0})
    assert x.restrict((1, 2)).support == (1,)
    assert x.truncate(3).kmax == 3
    assert (x * 2)[3] == 4
    assert (x / 2)[3] == 1
    assert x.is_real and not (x * 1j).is_real
    assert np.isclose(norm(2j * x), 2 * norm(x))
