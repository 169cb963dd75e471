import os
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from fractions import Fraction
from os import getenv
from typing import Optional, Union

from sympy import factorint, isprime


class GrpcalcError(Exception):
    """Base class of every error the toolkit raises on purpose."""
    exit_code = 1

    def to_dict(self) -> dict:
        return {'type': type(self).__name__, 'message': str(self)}


class InputError(GrpcalcError, ValueError):
    """Malformed or inconsistent user input."""
    exit_code = 1


class CapExceeded(GrpcalcError):
    """A configured resource cap was hit before the computation finished."""
    exit_code = 2


class InvariantViolation(GrpcalcError, ArithmeticError):
    """A mathematical invariant failed; always an implementation bug or a counterexample."""
    exit_code = 3


class NonPrimeError(InputError):
    pass


# residues are multiplied in int64 arrays
MAX_PRIME = 2 ** 31 - 1


def require_prime(p: int) -> int:
    if not isinstance(p, int) or not isprime(p):
        raise NonPrimeError(f'{p} is not a prime')
    if p > MAX_PRIME:
        raise InputError(f'Prime {p} exceeds the supported maximum {MAX_PRIME}')
    return p


def is_prime_power(n: int, p: Optional[int] = None) -> bool:
    """True iff n = q^m for a prime q (equal to p when given); 1 counts as p^0."""
    if n < 1:
        return False
    primes = set(factorint(n))
    if p is not None:
        return primes <= {p}
    return len(primes) <= 1


def get_thread_count() -> int:
    value = getenv('GRPCALC_THREADS')
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            raise InputError(f'GRPCALC_THREADS must be an integer, got {value!r}')
    return os.cpu_count() or 1


@contextmanager
def thread_pool():
    """Executor sized by GRPCALC_THREADS. Callers use map() so output order never depends on scheduling."""
    executor = ThreadPoolExecutor(max_workers=get_thread_count())
    try:
        yield executor
    finally:
        executor.shutdown(wait=True)


def format_rational(value: Union[int, Fraction]) -> str:
    """Render an exact rational as "num/den" (or "num" for integers)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f'Not an exact rational: {text!r}')


def format_decimal(value: Union[int, Fraction], digits: int = 6) -> str:
    """Display-only decimal rendering, computed without floating point."""
    value = Fraction(value)
    scaled = round(abs(value) * 10 ** digits)
    sign = '-' if value < 0 and scaled else ''
    whole, frac = divmod(scaled, 10 ** digits)
    return f'{sign}{whole}.{frac:0{digits}d}'
