"""
Exact integer polynomials.

``IntPoly`` stores dense coefficients low-to-high (index i holds the
coefficient of x^i). On top of plain arithmetic this module:
- splits integer roots off a monic polynomial,
- decides whether every root is real with an integer Sturm sequence,
- checks the coefficient bounds that hold for polynomials whose roots are
  all positive reals or all positive integers.

No floating point is used anywhere in this module.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb, gcd as int_gcd
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .exceptions import NonDivisible, NotMonic, PreconditionViolated

logger = logging.getLogger('flowroots')


def _strip(coeffs: Iterable[int]) -> Tuple[int, ...]:
    values = [int(c) for c in coeffs]
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


@dataclass(frozen=True)
class IntPoly:
    """Dense univariate polynomial with arbitrary-precision integer coefficients"""

    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', _strip(self.coeffs))

    # Constructors

    @classmethod
    def zero(cls) -> 'IntPoly':
        return cls(())

    @classmethod
    def constant(cls, value: int) -> 'IntPoly':
        return cls((value,))

    @classmethod
    def monomial(cls, power: int, coefficient: int = 1) -> 'IntPoly':
        return cls((0,) * power + (coefficient,))

    @classmethod
    def linear(cls, root: int) -> 'IntPoly':
        """The factor (x - root)"""
        return cls((-root, 1))

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> 'IntPoly':
        result = cls.constant(1)
        for root in roots:
            result = mul(result, cls.linear(root))
        return result

    # Shape

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial"""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, power: int) -> int:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return 0

    # Arithmetic

    def __add__(self, other: 'IntPoly') -> 'IntPoly':
        other = _coerce(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(self.coefficient(i) + other.coefficient(i) for i in range(size))

    __radd__ = __add__

    def __neg__(self) -> 'IntPoly':
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other: 'IntPoly') -> 'IntPoly':
        return self + (-_coerce(other))

    def __rsub__(self, other: 'IntPoly') -> 'IntPoly':
        return _coerce(other) - self

    def __mul__(self, other: 'IntPoly') -> 'IntPoly':
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> 'IntPoly':
        if exponent < 0:
            raise ValueError("negative exponent")
        result = IntPoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = mul(result, base)
            base = mul(base, base)
            exponent >>= 1
        return result

    def __call__(self, x: int) -> int:
        return evaluate(self, x)

    def derivative(self) -> 'IntPoly':
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def content(self) -> int:
        return int_gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self) -> 'IntPoly':
        """Divide out the content and make the leading coefficient positive"""
        if self.is_zero:
            return self
        c = self.content()
        if self.leading < 0:
            c = -c
        return IntPoly(x // c for x in self.coeffs)

    def to_list(self) -> List[int]:
        return list(self.coeffs)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        text = ""
        for power in range(self.degree, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            magnitude = abs(c)
            if power == 0:
                body = str(magnitude)
            else:
                mono = "x" if power == 1 else f"x^{power}"
                body = mono if magnitude == 1 else f"{magnitude}{mono}"
            if c < 0:
                text += "-" + body
            else:
                text += ("+" if text else "") + body
        return text


def _coerce(value) -> IntPoly:
    if isinstance(value, IntPoly):
        return value
    if isinstance(value, int):
        return IntPoly.constant(value)
    raise TypeError(f"cannot use {type(value).__name__} as a polynomial")


def evaluate(p: IntPoly, x: int) -> int:
    """Exact value p(x) by Horner's rule"""
    value = 0
    for c in reversed(p.coeffs):
        value = value * x + c
    return value


def mul(p: IntPoly, q: IntPoly) -> IntPoly:
    """Exact product (coefficient convolution)"""
    if p.is_zero or q.is_zero:
        return IntPoly.zero()
    out = [0] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return IntPoly(out)


def divide_exact(p: IntPoly, q: IntPoly) -> IntPoly:
    """
    Quotient p / q over the integers.

    Raises:
        ZeroDivisionError: if q is the zero polynomial
        NonDivisible: if q does not divide p in Z[x]; carries the remainder
            reached when division stopped
    """
    if q.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero:
        return IntPoly.zero()
    if p.degree < q.degree:
        raise NonDivisible(p)

    rem = list(p.coeffs)
    lc = q.leading
    dq = q.degree
    quotient = [0] * (p.degree - dq + 1)
    for i in range(p.degree - dq, -1, -1):
        c = rem[i + dq]
        if c == 0:
            continue
        if c % lc:
            raise NonDivisible(IntPoly(rem))
        factor = c // lc
        quotient[i] = factor
        for j, qc in enumerate(q.coeffs):
            rem[i + j] -= factor * qc
    if any(rem):
        raise NonDivisible(IntPoly(rem))
    return IntPoly(quotient)


def pseudo_remainder(a: IntPoly, b: IntPoly) -> IntPoly:
    """lc(b)^(deg a - deg b + 1) * a  mod  b, without leaving Z[x]"""
    if b.is_zero:
        raise ZeroDivisionError("pseudo-division by the zero polynomial")
    if a.degree < b.degree:
        return a
    rem = list(a.coeffs)
    lc = b.leading
    db = b.degree
    for i in range(a.degree - db, -1, -1):
        lead = rem[i + db]
        rem = [c * lc for c in rem]
        for j, bc in enumerate(b.coeffs):
            rem[i + j] -= lead * bc
    return IntPoly(rem)


def gcd(p: IntPoly, q: IntPoly) -> IntPoly:
    """Primitive gcd with positive leading coefficient (primitive remainder sequence)"""
    a, b = p.primitive(), q.primitive()
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero:
        a, b = b, pseudo_remainder(a, b).primitive()
    return a.primitive()


def square_free_part(p: IntPoly) -> IntPoly:
    """p / gcd(p, p') made primitive; same roots, each with multiplicity one"""
    base = p.primitive()
    if base.degree <= 0:
        return base
    return divide_exact(base, gcd(base, base.derivative()))


def sturm_sequence(p: IntPoly) -> List[IntPoly]:
    """
    Sturm sequence of a square-free polynomial.

    Each term is the negated pseudo-remainder of the two before it, rescaled
    by a positive constant only, so sign patterns match the classical
    rational sequence.
    """
    sequence = [p, p.derivative()]
    while sequence[-1].degree > 0:
        a, b = sequence[-2], sequence[-1]
        rem = pseudo_remainder(a, b)
        if b.leading < 0 and (a.degree - b.degree + 1) % 2:
            rem = -rem
        rem = -rem
        if rem.is_zero:
            break
        content = rem.content()
        sequence.append(IntPoly(c // content for c in rem.coeffs))
    return sequence


def sign_variations(sequence: Sequence[IntPoly], x: int) -> int:
    signs = [v > 0 for v in (evaluate(s, x) for s in sequence) if v != 0]
    return sum(1 for left, right in zip(signs, signs[1:]) if left != right)


def count_real_roots(p: IntPoly) -> int:
    """Number of distinct real roots"""
    if p.is_zero:
        raise ValueError("the zero polynomial has every number as a root")
    square_free = square_free_part(p)
    if square_free.degree <= 0:
        return 0
    # Cauchy bound: every root lies strictly inside (-bound, bound).
    bound = 1 + max(abs(c) for c in square_free.coeffs)
    sequence = sturm_sequence(square_free)
    return sign_variations(sequence, -bound) - sign_variations(sequence, bound)


def all_roots_real(p: IntPoly) -> bool:
    """True iff every complex root of p is real"""
    if p.is_zero:
        raise ValueError("the zero polynomial has no root set")
    if p.degree <= 0:
        return True
    square_free = square_free_part(p)
    return count_real_roots(square_free) == square_free.degree


# Integer roots

class DeltaSplit(NamedTuple):
    """Ceiling and floor of a non-integral root mean and the split count"""
    upper: int
    lower: int
    delta: int


@dataclass(frozen=True)
class RootReport:
    """Integer roots split off a polynomial, plus root-mean statistics"""

    polynomial: IntPoly
    integer_roots: Tuple[Tuple[int, int], ...]
    nonintegral_part: IntPoly
    all_roots_integral: bool
    all_roots_real: bool
    lambda_bar: Optional[Fraction]
    delta_split: Optional[DeltaSplit]

    def roots(self) -> List[int]:
        """Integer roots listed with multiplicity"""
        return [root for root, mult in self.integer_roots for _ in range(mult)]

    def reconstruct(self) -> IntPoly:
        return mul(IntPoly.from_roots(self.roots()), self.nonintegral_part)


def _ceil_root(value: int, k: int) -> int:
    """Smallest t >= 0 with t**k >= value"""
    if value <= 0:
        return 0
    lo, hi = 0, 1 << (value.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** k >= value:
            hi = mid
        else:
            lo = mid + 1
    return lo


def root_bound(p: IntPoly) -> int:
    """Fujiwara-style bound on |root| for a polynomial with leading coefficient +-1"""
    n = p.degree
    if n <= 0:
        return 0
    return 2 * max(_ceil_root(abs(p.coeffs[n - k]), k) for k in range(1, n + 1))


def integer_roots(p: IntPoly) -> RootReport:
    """
    Split all integer roots (with multiplicity) off a polynomial.

    Candidates are the divisors of the lowest nonzero coefficient that lie
    within the root bound; each is removed by exact division for as long as
    it remains a root.

    Raises:
        NotMonic: if the leading coefficient is not +1 or -1
    """
    if p.leading not in (1, -1):
        raise NotMonic(f"leading coefficient {p.leading} is not +1 or -1")

    found = []
    zeros = 0
    while p.coeffs[zeros] == 0:
        zeros += 1
    rest = IntPoly(p.coeffs[zeros:])

    constant = abs(rest.coeffs[0])
    candidates = []
    for d in range(1, root_bound(rest) + 1):
        if constant % d == 0:
            candidates.extend((-d, d))
    candidates.sort()

    if zeros:
        found.append((0, zeros))
    for candidate in candidates:
        multiplicity = 0
        while rest.degree > 0 and evaluate(rest, candidate) == 0:
            rest = divide_exact(rest, IntPoly.linear(candidate))
            multiplicity += 1
        if multiplicity:
            found.append((candidate, multiplicity))
    found.sort()

    integral = rest.degree == 0
    real = integral or all_roots_real(rest)

    lambda_bar = None
    split = None
    n = p.degree
    if n >= 1:
        lambda_bar = Fraction(-p.coefficient(n - 1), n * p.leading)
        if integral and lambda_bar.denominator != 1:
            upper = -(-lambda_bar.numerator // lambda_bar.denominator)
            lower = lambda_bar.numerator // lambda_bar.denominator
            delta = int(n * upper - n * lambda_bar)
            split = DeltaSplit(upper, lower, delta)

    report = RootReport(
        polynomial=p,
        integer_roots=tuple(found),
        nonintegral_part=rest,
        all_roots_integral=integral,
        all_roots_real=real,
        lambda_bar=lambda_bar,
        delta_split=split,
    )
    logger.debug(f"integer roots of {p}: {report.integer_roots}, cofactor {rest}")
    return report


def factored_form(p: IntPoly) -> str:
    """Human-readable form with integer roots split off, e.g. (x-1)(x-2)^3·(x^2+1)"""
    if p.degree <= 0:
        return str(p.coeffs[0]) if p.coeffs else "0"
    if p.leading not in (1, -1):
        return str(p)

    report = integer_roots(p)
    parts = []
    for root, mult in report.integer_roots:
        if root == 0:
            base = "x"
        elif root > 0:
            base = f"(x-{root})"
        else:
            base = f"(x+{-root})"
        parts.append(base if mult == 1 else f"{base}^{mult}")

    rest = report.nonintegral_part
    sign = ""
    if rest.leading < 0:
        sign = "-"
        rest = -rest
    text = "".join(parts)
    if rest.degree >= 1:
        text = f"{text}·({rest})" if text else str(rest)
    return sign + text


# Coefficient bounds

class BoundMode(Enum):
    REAL = "real"
    INTEGER = "integer"


@dataclass(frozen=True)
class BoundEntry:
    m: int
    coefficient: int
    bound: Fraction
    slack: Fraction
    equality: bool


@dataclass(frozen=True)
class BoundReport:
    """Coefficient bounds a_m <= bound_m for a monic polynomial with positive roots"""

    mode: BoundMode
    degree: int
    lambda_bar: Fraction
    delta_split: Optional[DeltaSplit]
    entries: Tuple[BoundEntry, ...]
    extremal: Optional[IntPoly]
    equality_forced: bool

    @property
    def holds(self) -> bool:
        return self.equality_forced and all(e.slack >= 0 for e in self.entries)

    @property
    def attained(self) -> bool:
        return any(e.equality for e in self.entries)


def signed_coefficient(p: IntPoly, m: int) -> int:
    """a_m in p = x^n - a_1 x^(n-1) + a_2 x^(n-2) - ..."""
    return (-1) ** m * p.coefficient(p.degree - m)


def second_coefficient_bound(n: int, delta: int, upper: int, lower: int) -> int:
    """C(n-d,2) u^2 + (n-d) d u l + C(d,2) l^2"""
    return (comb(n - delta, 2) * upper * upper
            + (n - delta) * delta * upper * lower
            + comb(delta, 2) * lower * lower)


def check_coefficient_bound(p: IntPoly, mode: BoundMode) -> BoundReport:
    """
    Compare every coefficient a_m (m >= 2) with its extremal value.

    REAL: p monic with positive real roots; bound C(n,m) * mean^m, attained
    only by (x - mean)^n.
    INTEGER: p monic with positive integer roots whose mean is not an
    integer; bound from the roots spread as evenly as integers allow, attained
    only by (x - ceil)^(n-d) (x - floor)^d.

    Raises:
        PreconditionViolated: if the root hypotheses of the mode fail
    """
    n = p.degree
    if p.leading != 1 or n < 1:
        raise PreconditionViolated("polynomial must be monic of positive degree")
    lambda_bar = Fraction(signed_coefficient(p, 1), n)

    if mode is BoundMode.REAL:
        if not all_roots_real(p):
            raise PreconditionViolated("not every root is real")
        if any(signed_coefficient(p, m) <= 0 for m in range(1, n + 1)):
            raise PreconditionViolated("not every root is positive")
        split = None
        extremal = None
        if lambda_bar.denominator == 1:
            extremal = IntPoly.from_roots([lambda_bar.numerator] * n)
        bounds = {m: comb(n, m) * lambda_bar ** m for m in range(2, n + 1)}
    else:
        report = integer_roots(p)
        if not report.all_roots_integral:
            raise PreconditionViolated("not every root is an integer")
        if any(root <= 0 for root, _ in report.integer_roots):
            raise PreconditionViolated("not every root is positive")
        split = report.delta_split
        if split is None:
            raise PreconditionViolated("root mean is an integer; no split exists")
        extremal = mul(
            IntPoly.from_roots([split.upper] * (n - split.delta)),
            IntPoly.from_roots([split.lower] * split.delta),
        )
        bounds = {m: Fraction(signed_coefficient(extremal, m)) for m in range(3, n + 1)}
        if n >= 2:
            bounds[2] = Fraction(second_coefficient_bound(n, split.delta, split.upper, split.lower))

    entries = []
    for m in range(2, n + 1):
        a_m = signed_coefficient(p, m)
        slack = bounds[m] - a_m
        entries.append(BoundEntry(m=m, coefficient=a_m, bound=bounds[m], slack=slack, equality=slack == 0))

    equality_forced = all(not e.equality or p == extremal for e in entries)
    if not equality_forced:
        logger.error(f"coefficient bound attained by {p} without the extremal form")
    return BoundReport(
        mode=mode,
        degree=n,
        lambda_bar=lambda_bar,
        delta_split=split,
        entries=tuple(entries),
        extremal=extremal,
        equality_forced=equality_forced,
    )
