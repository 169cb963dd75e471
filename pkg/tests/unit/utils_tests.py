from fractions import Fraction

import pytest

from grpcalc.utils import (MAX_PRIME, CapExceeded, InputError, InvariantViolation, NonPrimeError, format_decimal,
                           format_rational, get_thread_count, is_prime_power, parse_rational, require_prime,
                           thread_pool)


def setup_module():
    print(f" == Setting up tests for {__name__}")


def teardown_module():
    print(f" == Tearing down tests for {__name__}")


def test_exit_codes():
    assert InputError.exit_code == 1
    assert NonPrimeError.exit_code == 1
    assert CapExceeded.exit_code == 2
    assert InvariantViolation.exit_code == 3
    assert InputError('bad').to_dict() == {'type': 'InputError', 'message': 'bad'}


def test_require_prime():
    for p in (2, 3, 5, 7, 101):
        assert require_prime(p) == p
    for n in (-3, 0, 1, 4, 9, 91):
        with pytest.raises(NonPrimeError):
            require_prime(n)
    assert require_prime(MAX_PRIME) == MAX_PRIME
    with pytest.raises(InputError) as excinfo:
        require_prime(2 ** 31 + 11)
    assert not isinstance(excinfo.value, NonPrimeError)


def test_is_prime_power():
    assert all(is_prime_power(n) for n in (1, 2, 4, 8, 9, 27, 49))
    assert not any(is_prime_power(n) for n in (0, 6, 12, 168))
    assert is_prime_power(16, 2)
    assert not is_prime_power(9, 2)


def test_rational_formatting():
    assert format_rational(Fraction(129, 128)) == '129/128'
    assert format_rational(Fraction(-1, 6)) == '-1/6'
    assert format_rational(3) == '3'
    assert format_decimal(Fraction(1, 8)) == '0.125000'
    assert format_decimal(Fraction(-1, 6), 3) == '-0.167'
    assert parse_rational(' 3/4 ') == Fraction(3, 4)
    with pytest.raises(InputError):
        parse_rational('1/0')
    with pytest.raises(InputError):
        parse_rational('half')


def test_thread_count(monkeypatch):
    monkeypatch.setenv('GRPCALC_THREADS', '3')
    assert get_thread_count() == 3
    monkeypatch.setenv('GRPCALC_THREADS', '0')
    assert get_thread_count() == 1
    monkeypatch.setenv('GRPCALC_THREADS', 'many')
    with pytest.raises(InputError):
        get_thread_count()


def test_thread_pool_keeps_order(monkeypatch):
    monkeypatch.setenv('GRPCALC_THREADS', '4')
    with thread_pool() as executor:
        assert list(executor.map(lambda x: x * x, range(50))) == [x * x for x in range(50)]
