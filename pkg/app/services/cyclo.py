"""
Exact arithmetic in the cyclotomic field Q(ζ), ζ a primitive n-th root of unity.

Elements live in the basis 1, ζ, ..., ζ^(φ(n)-1) and are reduced modulo the
n-th cyclotomic polynomial Φ_n (not modulo x^n - 1, whose quotient has zero
divisors). Since Φ_n is monic with integer coefficients, every power of ζ
reduces to an integer vector; an element is therefore stored as integer
numerators over one common positive denominator, kept in lowest terms.
"""
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple, Union

from app.services.errors import CycloZeroDivisionError, InputError

IntPoly = Tuple[int, ...]
Scalar = Union[int, Fraction]


def _divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _exact_div(num: Sequence[int], den: Sequence[int]) -> IntPoly:
    """Divide integer polynomials (lowest degree first) by a monic divisor; the remainder must vanish"""
    num = list(num)
    dd = len(den) - 1
    if den[-1] != 1:
        raise InputError("divisor must be monic")
    quotient = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            quotient[k - dd] = c
            for j, dj in enumerate(den):
                num[k - dd + j] -= c * dj
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return tuple(quotient)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> IntPoly:
    """
    Coefficients of Φ_n, constant term first.

    Φ_n = (x^n - 1) / ∏ Φ_d over the proper divisors d of n.
    """
    if n < 1:
        raise InputError(f"cyclotomic polynomial needs n >= 1, got {n}")
    poly: IntPoly = (-1,) + (0,) * (n - 1) + (1,)
    for d in _divisors(n)[:-1]:
        poly = _exact_div(poly, cyclotomic_polynomial(d))
    return poly


def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


class CycloField:
    """Q(ζ_n), with the reductions of ζ^0, ..., ζ^(n-1) precomputed"""

    def __init__(self, n: int):
        if n < 1:
            raise InputError(f"cyclotomic field needs n >= 1, got {n}")
        self.n = n
        self.min_poly = cyclotomic_polynomial(n)
        self.phi_n = len(self.min_poly) - 1
        # x^k mod Φ_n for k < max(n, 2φ - 1), as integer vectors
        reductions = []
        current = [1] + [0] * (self.phi_n - 1)
        for _ in range(max(n, 2 * self.phi_n - 1)):
            reductions.append(tuple(current))
            current = self._times_x(current)
        self._reductions = tuple(reductions)
        self.root_powers = tuple(CycloElement(self, reductions[k], 1) for k in range(n))

    def _times_x(self, vec: List[int]) -> List[int]:
        top = vec[-1]
        shifted = [0] + vec[:-1]
        if top:
            # x^φ ≡ -(c_0 + c_1 x + ... + c_{φ-1} x^{φ-1})
            for i in range(self.phi_n):
                shifted[i] -= top * self.min_poly[i]
        return shifted

    def __eq__(self, other) -> bool:
        return isinstance(other, CycloField) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("CycloField", self.n))

    def __repr__(self) -> str:
        return f"CycloField({self.n})"

    def __reduce__(self):
        return (cyclotomic_field, (self.n,))

    def zero(self) -> "CycloElement":
        return CycloElement(self, (0,) * self.phi_n, 1)

    def one(self) -> "CycloElement":
        return self.root_powers[0]

    def scalar(self, value: Scalar) -> "CycloElement":
        value = Fraction(value)
        nums = (value.numerator,) + (0,) * (self.phi_n - 1)
        return CycloElement(self, nums, value.denominator)

    def element(self, coeffs: Sequence[Scalar]) -> "CycloElement":
        """Element with the given rational coordinates in the basis 1, ζ, ..., ζ^(φ-1)"""
        if len(coeffs) != self.phi_n:
            raise InputError(f"expected {self.phi_n} coordinates, got {len(coeffs)}")
        fracs = [Fraction(c) for c in coeffs]
        den = 1
        for f in fracs:
            den = den * f.denominator // math.gcd(den, f.denominator)
        return CycloElement(self, tuple(f.numerator * (den // f.denominator) for f in fracs), den)

    def root_power(self, k: int) -> "CycloElement":
        return self.root_powers[k % self.n]

    def from_residue_counts(self, counts: Sequence[int]) -> "CycloElement":
        """Σ counts[k]·ζ^k, with integer counts indexed by residue mod n"""
        acc = [0] * self.phi_n
        for k, c in enumerate(counts):
            if c:
                for i, r in enumerate(self._reductions[k]):
                    if r:
                        acc[i] += c * r
        return CycloElement(self, tuple(acc), 1)

    def parse(self, payload: Dict) -> "CycloElement":
        return self.element([Fraction(s) for s in payload["coeffs"]])


@lru_cache(maxsize=None)
def cyclotomic_field(n: int) -> CycloField:
    return CycloField(n)


def root_power(F: CycloField, k: int) -> "CycloElement":
    """Canonical representative of ζ^(k mod n)"""
    return F.root_power(k)


class CycloElement:
    __slots__ = ("field", "nums", "den")

    def __init__(self, field: CycloField, nums: Sequence[int], den: int = 1):
        if den == 0:
            raise CycloZeroDivisionError("zero denominator")
        nums = tuple(nums)
        if den < 0:
            nums = tuple(-c for c in nums)
            den = -den
        g = math.gcd(den, *nums)
        if g > 1:
            nums = tuple(c // g for c in nums)
            den //= g
        if not any(nums):
            den = 1
        self.field = field
        self.nums = nums
        self.den = den

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_one(self) -> bool:
        return self == self.field.one()

    def _check(self, other: "CycloElement") -> None:
        if self.field.n != other.field.n:
            raise InputError(f"field mismatch: Q(ζ_{self.field.n}) vs Q(ζ_{other.field.n})")

    def _coerce(self, other) -> "CycloElement":
        if isinstance(other, CycloElement):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.scalar(other)
        return NotImplemented

    def __add__(self, other) -> "CycloElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return CycloElement(self.field, [a + b for a, b in zip(self.nums, other.nums)], self.den)
        return CycloElement(
            self.field,
            [a * other.den + b * self.den for a, b in zip(self.nums, other.nums)],
            self.den * other.den,
        )

    __radd__ = __add__

    def __neg__(self) -> "CycloElement":
        return CycloElement(self.field, [-a for a in self.nums], self.den)

    def __sub__(self, other) -> "CycloElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return CycloElement(self.field, [a - b for a, b in zip(self.nums, other.nums)], self.den)
        return CycloElement(
            self.field,
            [a * other.den - b * self.den for a, b in zip(self.nums, other.nums)],
            self.den * other.den,
        )

    def __rsub__(self, other) -> "CycloElement":
        return (-self) + other

    def __mul__(self, other) -> "CycloElement":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CycloElement(self.field, [a * other.numerator for a in self.nums],
                                self.den * other.denominator)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElement(self.field, self._product_nums(other), self.den * other.den)

    __rmul__ = __mul__

    def _product_nums(self, other: "CycloElement") -> List[int]:
        """Numerators of self·other over the denominator self.den·other.den"""
        phi = self.field.phi_n
        conv = [0] * (2 * phi - 1)
        for i, a in enumerate(self.nums):
            if a:
                for j, b in enumerate(other.nums):
                    if b:
                        conv[i + j] += a * b
        acc = conv[:phi]
        reductions = self.field._reductions
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c:
                for i, r in enumerate(reductions[k]):
                    if r:
                        acc[i] += c * r
        return acc

    def sub_mul(self, c: "CycloElement", x: "CycloElement") -> "CycloElement":
        """self - c·x, normalised once"""
        self._check(c)
        self._check(x)
        if c.is_zero() or x.is_zero():
            return self
        prod = c._product_nums(x)
        den = c.den * x.den
        if self.den == den:
            return CycloElement(self.field, [a - b for a, b in zip(self.nums, prod)], den)
        return CycloElement(self.field, [a * den - b * self.den for a, b in zip(self.nums, prod)],
                            self.den * den)

    def invert(self) -> "CycloElement":
        """Inverse via the extended Euclidean algorithm in Q[x] against Φ_n"""
        if self.is_zero():
            raise CycloZeroDivisionError("cannot invert zero in a cyclotomic field")
        r0 = [Fraction(c) for c in self.field.min_poly]
        r1 = _trim(list(self.coeffs))
        s0: List[Fraction] = []
        s1: List[Fraction] = [Fraction(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r0 is a nonzero constant since Φ_n is irreducible
        c = r0[0]
        coeffs = [x / c for x in s0] + [Fraction(0)] * (self.field.phi_n - len(s0))
        return self.field.element(coeffs[: self.field.phi_n])

    def __truediv__(self, other) -> "CycloElement":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise CycloZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.invert()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.scalar(other)
        if not isinstance(other, CycloElement):
            return NotImplemented
        return self.field.n == other.field.n and self.nums == other.nums and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.field.n, self.nums, self.den))

    def __reduce__(self):
        return (CycloElement, (self.field, self.nums, self.den))

    def to_json(self) -> Dict[str, List[str]]:
        return {"coeffs": [f"{f.numerator}/{f.denominator}" for f in self.coeffs]}

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                power = "z" if i == 1 else f"z^{i}"
                terms.append(power if c == 1 else f"-{power}" if c == -1 else f"{c}*{power}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def _trim(p: List[Fraction]) -> List[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    size = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(size)]
    return _trim([Fraction(x) for x in out])


def _poly_divmod(a: List[Fraction], b: List[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    a = list(a)
    if len(a) < len(b):
        return [], _trim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for j, bj in enumerate(b):
                a[k + j] -= c * bj
    return _trim(q), _trim(a[: len(b) - 1])
