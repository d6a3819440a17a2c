"""Exact polynomial arithmetic over the Gaussian rationals.

Floats convert losslessly (every finite double is rational), so identities
certified here transfer verbatim to the floating inputs.  Polynomials are
tuples of GQ coefficients in ascending order; the zero polynomial is the
empty tuple.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError


@dataclass(frozen=True)
class GQ:
    """Gaussian rational re + im*i with exact Fraction parts."""

    re: Fraction
    im: Fraction

    @classmethod
    def from_complex(cls, z) -> "GQ":
        z = complex(z)
        return cls(Fraction(z.real), Fraction(z.imag))

    @classmethod
    def integer(cls, n: int) -> "GQ":
        return cls(Fraction(n), Fraction(0))

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __add__(self, other: "GQ") -> "GQ":
        return GQ(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GQ") -> "GQ":
        return GQ(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "GQ") -> "GQ":
        return GQ(self.re * other.re - self.im * other.im,
                  self.re * other.im + self.im * other.re)

    def __truediv__(self, other: "GQ") -> "GQ":
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GQ((self.re * other.re + self.im * other.im) / den,
                  (self.im * other.re - self.re * other.im) / den)

    def __neg__(self) -> "GQ":
        return GQ(-self.re, -self.im)


GQ_ZERO = GQ(Fraction(0), Fraction(0))
GQ_ONE = GQ(Fraction(1), Fraction(0))


def poly_from_complex(coeffs) -> tuple:
    return poly_trim(tuple(GQ.from_complex(c) for c in coeffs))


def poly_to_complex(f) -> list:
    return [c.to_complex() for c in f]


def poly_trim(f) -> tuple:
    cs = list(f)
    while cs and cs[-1].is_zero():
        cs.pop()
    return tuple(cs)


def poly_is_zero(f) -> bool:
    return len(f) == 0


def poly_degree(f) -> int:
    """Degree of a trimmed polynomial; -1 for the zero polynomial."""
    return len(f) - 1


def poly_one() -> tuple:
    return (GQ_ONE,)


def poly_add(f, g) -> tuple:
    n = max(len(f), len(g))
    out = []
    for k in range(n):
        a = f[k] if k < len(f) else GQ_ZERO
        b = g[k] if k < len(g) else GQ_ZERO
        out.append(a + b)
    return poly_trim(out)


def poly_sub(f, g) -> tuple:
    return poly_add(f, tuple(-c for c in g))


def poly_mul(f, g) -> tuple:
    if poly_is_zero(f) or poly_is_zero(g):
        return ()
    out = [GQ_ZERO] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return poly_trim(out)


def poly_scale(f, c: GQ) -> tuple:
    return poly_trim(tuple(a * c for a in f))


def poly_eval(f, z: GQ) -> GQ:
    out = GQ_ZERO
    for c in reversed(f):
        out = out * z + c
    return out


def poly_divmod(f, g) -> tuple:
    """Quotient and remainder with deg(remainder) < deg(g); exact division."""
    if poly_is_zero(g):
        raise DomainError("polynomial division by zero")
    rem = list(f)
    lead = g[-1]
    dg = len(g) - 1
    if len(rem) - 1 < dg:
        return (), poly_trim(rem)
    quot = [GQ_ZERO] * (len(rem) - dg)
    for k in range(len(rem) - 1, dg - 1, -1):
        if rem[k].is_zero():
            continue
        q = rem[k] / lead
        quot[k - dg] = q
        for j in range(dg + 1):
            rem[k - dg + j] = rem[k - dg + j] - q * g[j]
    return poly_trim(quot), poly_trim(rem)


def poly_monic(f) -> tuple:
    if poly_is_zero(f):
        return ()
    lead = f[-1]
    return tuple(c / lead for c in f)


def poly_xgcd(f, g) -> tuple:
    """Monic gcd d with the cofactors (d, u, v) satisfying u f + v g = d."""
    r0, r1 = poly_trim(f), poly_trim(g)
    s0, s1 = poly_one(), ()
    t0, t1 = (), poly_one()
    while not poly_is_zero(r1):
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        t0, t1 = t1, poly_sub(t0, poly_mul(q, t1))
    if poly_is_zero(r0):
        raise DomainError("gcd of zero polynomials is undefined")
    lead = r0[-1]
    inv = GQ_ONE / lead
    return poly_scale(r0, inv), poly_scale(s0, inv), poly_scale(t0, inv)


def iterated_xgcd(polys) -> tuple:
    """Monic gcd of the list plus one cofactor per entry.

    Back-substitution through pairwise steps: after each new polynomial the
    previous cofactors get multiplied by the left Bezout weight.  Returns
    (gcd, cofactors) with sum_k cofactors[k] * polys[k] == gcd exactly.
    """
    entries = [poly_trim(p) for p in polys]
    if not entries or all(poly_is_zero(p) for p in entries):
        raise DomainError("need at least one nonzero polynomial")
    g = entries[0]
    cofactors = [poly_one()]
    for f in entries[1:]:
        g, u, v = poly_xgcd(g, f)
        cofactors = [poly_mul(u, c) for c in cofactors]
        cofactors.append(v)
    return g, cofactors


def combination(polys, cofactors) -> tuple:
    total = ()
    for f, c in zip(polys, cofactors):
        total = poly_add(total, poly_mul(f, c))
    return total


def selftest() -> list[tuple[str, bool]]:
    checks = []

    x = (GQ_ZERO, GQ_ONE)
    f = poly_mul(x, x)                                   # z^2
    g = poly_from_complex((-0.5, 1.0))                   # z - 1/2
    d, cof = iterated_xgcd((f, g))
    checks.append(("coprime pair has unit gcd", d == poly_one()))
    checks.append(("bezout identity exact", combination((f, g), cof) == d))

    h = poly_mul(f, g)
    d2, cof2 = iterated_xgcd((h, poly_mul(g, g)))
    checks.append(("common factor recovered",
                   poly_monic(d2) == poly_monic(g)
                   and combination((h, poly_mul(g, g)), cof2) == d2))

    q, r = poly_divmod(h, g)
    checks.append(("division exact", poly_is_zero(r) and q == f))
    return checks
