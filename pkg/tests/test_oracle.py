import numpy as np
import pytest

from fibercpp.ff_core import field_of_order, is_prime, make_mu3
from fibercpp.oracle import (
    check_image_table,
    check_permutation,
    check_pp_cpp,
    is_permutation_reference,
)
from fibercpp.polyshape import build_delta_family


@pytest.mark.parametrize("q", [7, 13, 25, 31])
def test_random_maps_agree_with_sort_reference(q):
    F = field_of_order(q)
    rng = np.random.default_rng(q)
    for trial in range(200):
        images = rng.permutation(q) if trial % 2 else rng.integers(0, q, size=q)
        ref = is_permutation_reference(images)
        table = check_image_table(F, images)
        call = check_permutation(F, lambda x: int(images[x]))
        assert table.is_bijection == call.is_bijection == ref
        assert table == call
        if not ref:
            a, b = table.collision
            assert a < b and images[a] == images[b] == table.image
            assert list(table.preimages) == [x for x in range(q) if images[x] == table.image]
            assert table.missed not in set(images.tolist())


def test_first_collision_is_in_rank_order():
    F = field_of_order(7)
    v = check_image_table(F, [3, 1, 4, 1, 3, 0, 2])
    # x=3 repeats the value of x=1 before x=4 repeats x=0
    assert v.collision == (1, 3) and v.image == 1
    assert v.preimages == (1, 3)
    assert v.missed == 5


@pytest.mark.parametrize("q", [2, 4, 7, 343, 1024])
def test_identity_and_monomial_scaling(q):
    F = field_of_order(q)
    xs = F.all_elements()
    assert check_image_table(F, xs).is_bijection
    g = F.primitive_element
    assert check_image_table(F, F.vec_mul(xs, g)).is_bijection


@pytest.mark.parametrize("q", [q for q in range(3, 1001, 2) if is_prime(q)])
def test_squaring_is_not_a_bijection(q):
    F = field_of_order(q)
    v = check_image_table(F, F.vec_pow(F.all_elements(), 2))
    assert not v.is_bijection
    a, b = v.collision
    assert F.pow(a, 2) == F.pow(b, 2)


def test_bad_inputs():
    F = field_of_order(7)
    with pytest.raises(ValueError):
        check_image_table(F, [0, 1, 2])
    with pytest.raises(ValueError):
        check_permutation(F, lambda x: x + 1)


def test_pp_cpp_verdict_f7():
    t = build_delta_family(make_mu3(field_of_order(7), 2), 2, 1)
    v = check_pp_cpp(t)
    assert not v.F_is_pp and not v.is_cpp
    assert v.F.image == 0 and v.F.preimages == (0, 3, 4)
    js = v.to_json(t.field)
    assert js["F"]["preimages"] == ["0", "3", "4"]
