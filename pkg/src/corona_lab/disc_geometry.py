"""Geometry of the open unit disc.

Points are plain complex numbers; interior points satisfy |z| < 1 and
boundary points |z| = 1.  Angles are canonical in [-pi, pi).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# denominators in disc automorphisms stay away from zero by this margin
DENOM_EPS = 1e-15
BOUNDARY_TOL = 1e-9


def canonical_angle(theta):
    """Wrap an angle (scalar or array) into [-pi, pi).

    Angles already in range pass through bit-identically, so half-open
    interval membership at exact endpoints is stable under wrapping.
    """
    th = np.asarray(theta, dtype=float)
    wrapped = np.mod(th + np.pi, 2 * np.pi) - np.pi
    wrapped = np.where(wrapped >= np.pi, wrapped - 2 * np.pi, wrapped)
    out = np.where((th >= -np.pi) & (th < np.pi), th, wrapped)
    return float(out) if out.ndim == 0 else out


def check_disc(z, name: str = "z") -> complex:
    z = complex(z)
    if not (abs(z) < 1):
        raise DomainError(f"{name} must satisfy |{name}| < 1, got |{name}| = {abs(z)}")
    return z


def check_closed_disc(z, name: str = "z") -> complex:
    z = complex(z)
    if abs(z) > 1 + BOUNDARY_TOL:
        raise DomainError(f"{name} must satisfy |{name}| <= 1, got |{name}| = {abs(z)}")
    return z


def pseudo_distance(z, w) -> float:
    """Pseudo-hyperbolic distance |z - w| / |1 - conj(w) z| for interior points."""
    z = check_disc(z, "z")
    w = check_disc(w, "w")
    return abs(z - w) / abs(1 - w.conjugate() * z)


@dataclass(frozen=True)
class MobiusAut:
    """Disc automorphism z -> e^{i rotation} (z + c) / (1 + conj(c) z)."""

    c: complex
    rotation: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "c", check_disc(self.c, "c"))
        rot = float(self.rotation)
        if not math.isfinite(rot):
            raise DomainError("rotation must be finite")
        object.__setattr__(self, "rotation", float(canonical_angle(rot)))

    def apply(self, z):
        """Evaluate at a point of the closed disc (scalar or array)."""
        z = np.asarray(z, dtype=complex)
        den = 1 + np.conj(self.c) * z
        if np.min(np.abs(den)) < DENOM_EPS:
            raise DomainError("mobius denominator vanished; point outside closed disc?")
        out = np.exp(1j * self.rotation) * (z + self.c) / den
        return complex(out) if out.ndim == 0 else out

    __call__ = apply

    def inverse(self, z):
        """Inverse map, exact by construction: inverse(apply(z)) == z."""
        w = np.asarray(z, dtype=complex) * np.exp(-1j * self.rotation)
        den = 1 - np.conj(self.c) * w
        if np.min(np.abs(den)) < DENOM_EPS:
            raise DomainError("mobius denominator vanished; point outside closed disc?")
        out = (w - self.c) / den
        return complex(out) if out.ndim == 0 else out


def mobius_apply(m: MobiusAut, z):
    return m.apply(z)


def mobius_inverse_apply(m: MobiusAut, z):
    return m.inverse(z)


def pseudo_disc_euclidean(c, eta: float) -> tuple[complex, float]:
    """Euclidean center and radius of {z : pseudo_distance(z, c) <= eta}.

    The set is an honest Euclidean disc; center and radius come from the
    closed form (1 - eta^2) c / (1 - eta^2 |c|^2) and
    eta (1 - |c|^2) / (1 - eta^2 |c|^2).
    """
    c = check_disc(c, "c")
    eta = float(eta)
    if not (0 <= eta < 1):
        raise DomainError(f"eta must lie in [0, 1), got {eta}")
    den = 1 - eta * eta * abs(c) ** 2
    center = (1 - eta * eta) * c / den
    radius = eta * (1 - abs(c) ** 2) / den
    return center, radius


def orthogonal_arc_midpoint(alpha: float, beta: float) -> complex:
    """Point where the circle through e^{i alpha}, e^{i beta} orthogonal to the
    unit circle crosses the bisecting radius.

    Uses cos(g)/(1 + sin(g)) with g = (beta - alpha)/2, the numerically stable
    form of (1 - sin g)/cos g.  Requires 0 < beta - alpha < pi.
    """
    alpha = float(alpha)
    beta = float(beta)
    if not beta > alpha:
        raise DomainError("need alpha < beta")
    g = (beta - alpha) / 2
    if not g < math.pi / 2:
        raise DomainError("arc spans half the circle or more; midpoint undefined")
    return complex(np.exp(1j * (alpha + beta) / 2)) * (math.cos(g) / (1 + math.sin(g)))


def orthogonal_circle(alpha: float, beta: float) -> tuple[complex, float]:
    """Center and radius of the circle through both endpoints, orthogonal to
    the unit circle.  The part of it inside the disc is the geodesic arc."""
    alpha = float(alpha)
    beta = float(beta)
    g = (beta - alpha) / 2
    if not (0 < g < math.pi / 2):
        raise DomainError("need 0 < beta - alpha < pi")
    center = complex(np.exp(1j * (alpha + beta) / 2)) / math.cos(g)
    radius = math.tan(g)
    return center, radius


def geodesic_endpoints(anchor_angle: float, through) -> tuple[float, float]:
    """Boundary angles of the geodesic through e^{i anchor_angle} and an
    interior point.  First angle returned equals anchor_angle.

    Solves the two linear conditions Re(conj(w) e^{ia}) = 1 and
    Re(conj(w) p) = (1 + |p|^2)/2 for the orthogonal circle center w, then
    intersects with the unit circle at (1 +- iR) w / |w|^2.
    """
    a = float(canonical_angle(anchor_angle))
    p = check_disc(through, "through")
    e = complex(np.exp(1j * a))
    mat = np.array([[e.real, e.imag], [p.real, p.imag]])
    rhs = np.array([1.0, (1 + abs(p) ** 2) / 2])
    det = np.linalg.det(mat)
    if abs(det) < 1e-14:
        # interior point on the ray through the anchor: geodesic is a diameter
        return a, float(canonical_angle(a + math.pi))
    wx, wy = np.linalg.solve(mat, rhs)
    w = complex(wx, wy)
    radius = math.sqrt(abs(w) ** 2 - 1)
    p1 = (1 + 1j * radius) * w / abs(w) ** 2
    p2 = (1 - 1j * radius) * w / abs(w) ** 2
    t1 = float(np.angle(p1))
    t2 = float(np.angle(p2))
    # return the anchor first, the far endpoint second
    if abs(canonical_angle(t1 - a)) <= abs(canonical_angle(t2 - a)):
        return a, t2
    return a, t1


@dataclass(frozen=True)
class OrthogonalArc:
    """Boundary arc (alpha, beta) together with the geodesic over it."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (-math.pi <= a < b < math.pi):
            raise DomainError("need -pi <= alpha < beta < pi")
        if not (b - a < math.pi):
            raise DomainError("arc must span less than half the circle")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def midpoint(self) -> complex:
        return orthogonal_arc_midpoint(self.alpha, self.beta)

    def circle(self) -> tuple[complex, float]:
        return orthogonal_circle(self.alpha, self.beta)

    def contains(self, z, tol: float = 1e-8) -> bool:
        """True if the interior point z lies on the geodesic arc."""
        z = check_disc(z, "z")
        center, radius = self.circle()
        return abs(abs(z - center) - radius) < tol


def selftest() -> list[tuple[str, bool]]:
    """Small invariant suite used by the command line --selftest mode."""
    import numpy.random as npr

    rng = npr.default_rng(20240811)
    checks = []

    ok = True
    for _ in range(50):
        c = (rng.uniform(-0.9, 0.9) + 1j * rng.uniform(-0.9, 0.9)) * 0.7
        m = MobiusAut(c, rng.uniform(-3, 3))
        z = (rng.uniform(-0.95, 0.95) + 1j * rng.uniform(-0.95, 0.95)) * 0.7
        ok = ok and abs(m.inverse(m.apply(z)) - z) < 1e-12
    checks.append(("mobius inverse composes to identity", ok))

    ok = True
    for _ in range(50):
        z = 0.7 * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))
        w = 0.7 * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))
        d = pseudo_distance(z, w)
        ok = ok and 0 <= d < 1 and abs(d - pseudo_distance(w, z)) < 1e-15
    checks.append(("pseudo distance symmetric and in [0, 1)", ok))

    c, r = pseudo_disc_euclidean(0.5, 0.5)
    checks.append(("pseudo disc closed form", abs(c - 0.4) < 1e-14 and abs(r - 0.4) < 1e-14))

    mid = orthogonal_arc_midpoint(-math.pi / 3, math.pi / 3)
    checks.append(("arc midpoint anchor value", abs(mid - (2 - math.sqrt(3))) < 1e-14))

    arc = OrthogonalArc(-0.4, 0.7)
    checks.append(("midpoint lies on its own arc", arc.contains(arc.midpoint, tol=1e-12)))
    return checks
