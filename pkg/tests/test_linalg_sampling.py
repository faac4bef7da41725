from __future__ import annotations

from fractions import Fraction as F

from logjet.linalg import first_nonzero_minor, nullspace, rank, rref, scalar_det
from logjet.sampling import gaussian_int, random_curve, random_reparam, trial_rng
from logjet.scalars import QQi, make_context, to_bigfloat


def test_exact_determinant_and_rank():
    m = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    assert scalar_det(m) == 18
    assert rank([[1, 2], [2, 4]]) == 1
    R, piv = rref([[2, 4], [1, 3]])
    assert R == [[1, 0], [0, 1]] and piv == [0, 1]


def test_bigfloat_determinant_pivots():
    ctx = make_context(128)
    m = [[to_bigfloat(F(1, 10**30), ctx), 1], [1, 1]]
    assert abs(scalar_det(m) + 1) < 1e-25


def test_nullspace_and_minor():
    m = [[1, 2, 3], [2, 4, 6]]
    basis = nullspace(m, 3)
    assert len(basis) == 2
    for v in basis:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)
    assert first_nonzero_minor([[0, 0], [1, 0], [0, 1]]) == ((1, 2), 1)
    assert first_nonzero_minor([[1, 1], [1, 1]]) is None


def test_gaussian_sampling_is_seeded_and_bounded():
    a = [gaussian_int(trial_rng(7, i)) for i in range(50)]
    b = [gaussian_int(trial_rng(7, i)) for i in range(50)]
    assert a == b
    for x in a:
        x = QQi(x) if isinstance(x, int) else x
        assert abs(x.re) <= 5 and abs(x.im) <= 5


def test_random_objects_respect_constraints():
    rng = trial_rng(1, 0)
    f = random_curve(rng, 4, 3, nonzero_values=(1, 3))
    assert f.coords[0].derivs[0] != 0 and f.coords[2].derivs[0] != 0
    assert random_reparam(rng, 4, unipotent=True).first == 1
    assert random_reparam(rng, 4).is_regular
