import pytest

from repmoduli.gf import FieldError, gf_make, gf_theta


def test_gf4_generator_order_three():
    f = gf_make(2, 2)
    nu = f.gen()
    assert nu.val != 1
    assert (nu ** 3).val == 1
    assert (nu ** 2).val != 1


def test_gf8_theta_is_fourth_power_and_squares():
    f = gf_make(2, 3)
    for x in f.elements():
        assert gf_theta(x) == x ** 4
        assert gf_theta(gf_theta(x)) == x ** 2


def test_gf9_unique_involution():
    f = gf_make(3, 2)
    nu = f.gen()
    assert (nu ** 8).val == 1
    assert nu ** 4 == -f.one()


def test_field_axioms_exhaustive_small():
    for p, n in [(2, 2), (3, 1), (2, 3), (5, 1), (3, 2)]:
        f = gf_make(p, n)
        els = list(range(f.q))
        for a in els:
            for b in els:
                assert f.add(a, b) == f.add(b, a)
                assert f.mul(a, b) == f.mul(b, a)
                if b:
                    assert f.mul(f.mul(a, b), f.inv(b)) == a
            if a:
                assert f.mul(a, f.inv(a)) == 1
        for a in els[:6]:
            for b in els[:6]:
                for c in els[:6]:
                    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


def test_frobenius_fixes_exactly_prime_field():
    for p, n in [(2, 2), (2, 3), (3, 2)]:
        f = gf_make(p, n)
        fixed = [a for a in range(f.q) if f.pow(a, p) == a]
        # constants are encoded as the integers 0..p-1
        assert sorted(fixed) == list(range(p))


def test_frobenius_is_additive_and_multiplicative():
    f = gf_make(2, 3)
    for a in range(f.q):
        for b in range(f.q):
            assert f.pow(f.add(a, b), 2) == f.add(f.pow(a, 2), f.pow(b, 2))
            assert f.pow(f.mul(a, b), 2) == f.mul(f.pow(a, 2), f.pow(b, 2))


def test_theta_requires_char_two_odd_degree():
    with pytest.raises(FieldError):
        gf_make(3, 2).theta(1)
    with pytest.raises(FieldError):
        gf_make(2, 2).theta(1)


def test_generator_exact_order():
    for p, n in [(2, 2), (2, 3), (2, 5), (3, 1), (3, 2), (11, 1), (19, 1)]:
        f = gf_make(p, n)
        assert f.element_order(f.generator) == f.q - 1


def test_bad_field_arguments():
    with pytest.raises(FieldError):
        gf_make(6, 1)
    with pytest.raises(FieldError):
        gf_make(2, 15)  # 2^15 above the supported bound
