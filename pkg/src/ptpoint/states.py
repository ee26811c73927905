"""Eigenfunctions, resolvent application, symmetry checks, and scattering.

Eigenfunctions and generalized solutions are exact piecewise-exponential
objects (PiecewiseExp); sampled functions live on staggered symmetric grids
(GridFunction) with nodes x_j = -L + (j + 1/2) h, h = 2L/N, so that x = 0 and
x = +-l fall between nodes and the node set is invariant under x -> -x.
"""

from dataclasses import dataclass

import numpy as np

from .boundary import (
    ConnectedOrigin,
    SeparatedOrigin,
    as_matrix,
    pt_mirror,
    require_nondegenerate,
)
from .errors import (
    AsymmetricGrid,
    InvalidParams,
    InvalidRegion,
    NotAnEigenvalue,
    ResonantK,
    SpectrumPoint,
)


@dataclass(frozen=True)
class PiecewiseExp:
    """Piecewise sum of exponentials: on each piece (lo, hi), x -> sum c_j e^{s_j x}.

    pieces: tuple of (lo, hi, terms) with lo/hi floats (+-inf allowed) and
    terms a tuple of (coefficient, exponent) pairs.  Construction enforces
    square integrability: every term on an unbounded piece must decay in the
    unbounded direction.
    """

    pieces: tuple

    def __post_init__(self):
        norm = []
        prev_hi = -np.inf
        for lo, hi, terms in self.pieces:
            lo, hi = float(lo), float(hi)
            if not lo < hi:
                raise InvalidParams(f"empty piece ({lo}, {hi})")
            if lo != prev_hi and prev_hi != -np.inf:
                raise InvalidParams("pieces must be contiguous")
            prev_hi = hi
            terms = tuple((complex(c), complex(s)) for c, s in terms)
            for c, s in terms:
                if c == 0:
                    continue
                if hi == np.inf and s.real >= 0:
                    raise InvalidParams(f"non-decaying term e^{{{s}x}} on ({lo}, inf)")
                if lo == -np.inf and s.real <= 0:
                    raise InvalidParams(f"non-decaying term e^{{{s}x}} on (-inf, {hi})")
            norm.append((lo, hi, terms))
        object.__setattr__(self, "pieces", tuple(norm))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for lo, hi, terms in self.pieces:
            mask = (x >= lo) & (x < hi)
            if not np.any(mask):
                continue
            xm = x[mask]
            acc = np.zeros(xm.shape, dtype=complex)
            for c, s in terms:
                acc += c * np.exp(s * xm)
            out[mask] = acc
        return out

    def derivative(self):
        return PiecewiseExp(
            tuple((lo, hi, tuple((c * s, s) for c, s in terms)) for lo, hi, terms in self.pieces)
        )

    def side_values(self, x0, side):
        """(value, derivative) limit at x0 from side '+' or '-', exact from the terms."""
        for lo, hi, terms in self.pieces:
            if (side == "+" and lo <= x0 < hi) or (side == "-" and lo < x0 <= hi):
                val = sum(c * np.exp(s * x0) for c, s in terms)
                der = sum(c * s * np.exp(s * x0) for c, s in terms)
                return complex(val), complex(der)
        raise InvalidParams(f"no piece adjacent to {x0} on side {side!r}")

    def decay_rate(self):
        """Slowest |Re exponent| on the unbounded pieces (L^2 decay scale)."""
        rates = []
        for lo, hi, terms in self.pieces:
            if np.isinf(lo) or np.isinf(hi):
                rates.extend(abs(s.real) for c, s in terms if c != 0)
        if not rates:
            return 1.0
        return min(rates)


@dataclass(frozen=True)
class GridFunction:
    """Complex samples on the staggered symmetric grid over [-L, L] (N even)."""

    L: float
    N: int
    values: np.ndarray

    def __post_init__(self):
        if self.N < 16 or self.N % 2:
            raise InvalidParams("N must be an even integer >= 16")
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.N,):
            raise InvalidParams(f"values must have shape ({self.N},), got {vals.shape}")
        object.__setattr__(self, "values", vals)

    @property
    def h(self):
        return 2.0 * self.L / self.N

    @property
    def nodes(self):
        return -self.L + (np.arange(self.N) + 0.5) * self.h

    @classmethod
    def sample(cls, func, L, N):
        g = cls(L, N, np.zeros(N, dtype=complex))
        return cls(L, N, np.asarray(func(g.nodes), dtype=complex))

    def same_grid(self, other):
        return self.N == other.N and abs(self.L - other.L) <= 1e-12 * max(1.0, self.L)


@dataclass(frozen=True)
class ScatteringData:
    """Transmission/reflection amplitudes at real k > 0 for incidence from each side."""

    t_left: complex
    r_left: complex
    t_right: complex
    r_right: complex


def _origin_matching_matrix(B, k):
    """2x2 system [[1, -(alpha - ik beta)], [ik, -(gamma - ik delta)]]; det = dispersion."""
    M = as_matrix(B)
    a_ = M[0, 0] - 1j * k * M[0, 1]
    g_ = M[1, 0] - 1j * k * M[1, 1]
    return np.array([[1.0, -a_], [1j * k, -g_]], dtype=complex)


def eigenfunction_origin(B, k, tol=1e-10):
    """Bound/decaying eigenfunction of a connected-origin model at wave number k.

    psi(x) = e^{-ikx} for x < 0 and (alpha - ik beta) e^{ikx} for x > 0; valid
    when k solves the dispersion relation with Im k > 0.
    """
    M = require_nondegenerate(B)
    k = complex(k)
    if k.imag <= 0:
        raise NotAnEigenvalue(f"Im k must be positive, got k = {k}")
    beta = M[0, 1]
    tau = M[0, 0] + M[1, 1]
    gamma = M[1, 0]
    disp = k * k * beta + 1j * k * (tau) - gamma
    scale = max(1.0, abs(k)) ** 2 * max(1.0, float(np.max(np.abs(M))))
    if abs(disp) > tol * scale:
        raise NotAnEigenvalue(f"k = {k} does not solve the dispersion relation (|D| = {abs(disp):.2e})")
    c2 = M[0, 0] - 1j * k * M[0, 1]
    return PiecewiseExp(
        (
            (-np.inf, 0.0, ((1.0, -1j * k),)),
            (0.0, np.inf, ((c2, 1j * k),)),
        )
    )


def two_point_system_matrix(B, l, k):
    """The 4x4 linear system on the piece coefficients (c1..c4) of the two-point model.

    Rows encode the interface conditions at -l (mirror of B) and at +l (B)
    against the Ansatz c1 e^{-ik(x+l)} | c2 cos k(x+l) + c3 sin k(x+l) |
    c4 e^{ik(x-l)}.
    """
    M = as_matrix(B)
    a, b = M[0, 0], M[0, 1]
    g, d = M[1, 0], M[1, 1]
    s = np.sin(2 * k * l)
    c = np.cos(2 * k * l)
    return np.array(
        [
            [1.0, -np.conj(a), np.conj(b) * k, 0.0],
            [1j * k, -np.conj(g), np.conj(d) * k, 0.0],
            [0.0, a * c - b * k * s, a * s + b * k * c, -1.0],
            [0.0, g * c - d * k * s, g * s + d * k * c, -1j * k],
        ],
        dtype=complex,
    )


def eigenfunction_two_point(B, l, k, tol=1e-8):
    """Eigenfunction of the two-point model from the kernel of the 4x4 interface system.

    The coefficient vector is normalized to c1 = 1 (c4 = 1 when c1 vanishes,
    largest component otherwise).  Raises NotAnEigenvalue when the system has
    no kernel at k (smallest singular value above tol relative to the
    largest), which for matrices with delta != 0 can happen even at small
    closed-form dispersion values; the kernel test is the authoritative one.
    """
    require_nondegenerate(B)
    k = complex(k)
    if k.imag <= 0:
        raise NotAnEigenvalue(f"Im k must be positive, got k = {k}")
    if not l > 0:
        raise InvalidParams(f"l must be positive, got {l}")
    A = two_point_system_matrix(B, l, k)
    _, sv, vh = np.linalg.svd(A)
    if sv[-1] > tol * max(sv[0], 1e-300):
        raise NotAnEigenvalue(
            f"two-point interface system has trivial kernel at k = {k} "
            f"(relative smallest singular value {sv[-1] / sv[0]:.2e})"
        )
    cvec = np.conj(vh[-1])
    if abs(cvec[0]) > 1e-8 * np.max(np.abs(cvec)):
        cvec = cvec / cvec[0]
    elif abs(cvec[3]) > 1e-8 * np.max(np.abs(cvec)):
        cvec = cvec / cvec[3]
    else:
        cvec = cvec / cvec[np.argmax(np.abs(cvec))]
    c1, c2, c3, c4 = cvec
    # middle piece as an exponential pair: c2 cos k(x+l) + c3 sin k(x+l)
    ap = 0.5 * (c2 - 1j * c3) * np.exp(1j * k * l)
    am = 0.5 * (c2 + 1j * c3) * np.exp(-1j * k * l)
    return PiecewiseExp(
        (
            (-np.inf, -l, ((c1 * np.exp(-1j * k * l), -1j * k),)),
            (-l, l, ((ap, 1j * k), (am, -1j * k))),
            (l, np.inf, ((c4 * np.exp(-1j * k * l), 1j * k),)),
        )
    )


def interface_residual(psi, B, l=None):
    """Relative residual of the interface conditions satisfied by psi.

    With l=None checks the origin condition v(0+) = B v(0-); otherwise checks
    both two-point conditions (B at +l, its mirror at -l) and returns the max.
    """
    M = as_matrix(B)

    def one(x0, mat):
        vp = np.array(psi.side_values(x0, "+"))
        vm = np.array(psi.side_values(x0, "-"))
        resid = vp - mat @ vm
        scale = max(float(np.max(np.abs(vp))), float(np.max(np.abs(mat @ vm))), 1e-300)
        return float(np.max(np.abs(resid))) / scale

    if l is None:
        return one(0.0, M)
    # at -l the condition maps right-side values to left-side ones
    mirror = pt_mirror(M)
    vp = np.array(psi.side_values(-l, "-"))
    vm = np.array(psi.side_values(-l, "+"))
    resid = vp - mirror @ vm
    scale = max(float(np.max(np.abs(vp))), float(np.max(np.abs(mirror @ vm))), 1e-300)
    left = float(np.max(np.abs(resid))) / scale
    return max(one(float(l), M), left)


def _sqrt_upper(lam):
    """k = sqrt(lam) with Im k > 0; raises InvalidRegion on the branch cut [0, inf)."""
    lam = complex(lam)
    if abs(lam.imag) <= 1e-14 * max(1.0, abs(lam)) and lam.real >= -1e-300:
        raise InvalidRegion(f"lambda = {lam} lies on the absolutely continuous branch [0, inf)")
    k = np.sqrt(lam)
    if k.imag < 0:
        k = -k
    return complex(k)


def apply_resolvent(spec, lam, F, tol=1e-10):
    """Apply the resolvent of an origin model to a sampled right-hand side.

    U(x) = -int e^{ik|x-y|}/(2ik) F(y) dy + rho_+ e^{ikx} 1_{x>0} + rho_- e^{-ikx} 1_{x<0},
    with rho_+- solved from the interface conditions; k = sqrt(lam), Im k > 0.
    Quadratures use the midpoint rule on the staggered grid (O(h^2)).
    """
    if not isinstance(spec, (ConnectedOrigin, SeparatedOrigin)):
        raise InvalidParams("resolvent application supports origin models only")
    if not isinstance(F, GridFunction):
        raise InvalidParams("F must be a GridFunction")
    k = _sqrt_upper(lam)
    x = F.nodes
    h = F.h
    f = F.values

    # convolution with the outgoing Green kernel -e^{ik|x-y|}/(2ik), and its boundary data
    kernel = -np.exp(1j * k * np.abs(x[:, None] - x[None, :])) / (2j * k)
    u0 = h * (kernel @ f)
    pos = x > 0
    f_plus = h * np.sum(np.exp(1j * k * x[pos]) * f[pos])
    f_minus = h * np.sum(np.exp(-1j * k * x[~pos]) * f[~pos])
    u0_0 = -(f_minus + f_plus) / (2j * k)
    du0_0 = -0.5 * (f_minus - f_plus)

    if isinstance(spec, ConnectedOrigin):
        M = spec.B
        lhs = _origin_matching_matrix(M, k)
        rhs = np.array(
            [
                (M[0, 0] - 1.0) * u0_0 + M[0, 1] * du0_0,
                M[1, 0] * u0_0 + (M[1, 1] - 1.0) * du0_0,
            ],
            dtype=complex,
        )
        scale = max(1.0, abs(k)) ** 2 * max(1.0, float(np.max(np.abs(M))))
        if abs(np.linalg.det(lhs)) <= tol * scale:
            raise SpectrumPoint(f"lambda = {lam} is at or near a discrete eigenvalue")
        rho_plus, rho_minus = np.linalg.solve(lhs, rhs)
    else:
        p = spec.params
        h0, h1, th = p.h0, p.h1, p.theta
        den_plus = 1j * k * h0 - h1 * np.exp(1j * th)
        den_minus = -1j * k * h0 + h1 * np.exp(-1j * th)
        scale = max(1.0, abs(k))
        if abs(den_plus) <= tol * scale or abs(den_minus) <= tol * scale:
            raise SpectrumPoint(f"lambda = {lam} is at or near a discrete eigenvalue")
        rho_plus = (h1 * np.exp(1j * th) * u0_0 - h0 * du0_0) / den_plus
        rho_minus = (-h1 * np.exp(-1j * th) * u0_0 - h0 * du0_0) / den_minus

    u = u0 + np.where(pos, rho_plus * np.exp(1j * k * x), rho_minus * np.exp(-1j * k * x))
    return GridFunction(F.L, F.N, u)


def pt_apply(f):
    """Reflection plus conjugation, x -> conj(f(-x)); an involution."""
    if isinstance(f, PiecewiseExp):
        pieces = tuple(
            (-hi, -lo, tuple((np.conj(c), -np.conj(s)) for c, s in terms))
            for lo, hi, terms in reversed(f.pieces)
        )
        return PiecewiseExp(pieces)
    if isinstance(f, GridFunction):
        nodes = f.nodes
        if not np.allclose(nodes, -nodes[::-1], atol=1e-12 * max(1.0, f.L)):
            raise AsymmetricGrid("grid nodes are not symmetric under x -> -x")
        return GridFunction(f.L, f.N, np.conj(f.values[::-1]))
    raise InvalidParams(f"pt_apply supports PiecewiseExp and GridFunction, got {type(f).__name__}")


def pt_symmetry_defect(psi, sample_count=4096):
    """min over |c| = 1 of ||PT psi - c psi|| / ||psi||, by grid quadrature.

    Zero (to quadrature accuracy) iff psi can be rescaled to a PT-symmetric
    function; the optimal phase is c = <psi, PT psi>/|<psi, PT psi>|.
    """
    if not isinstance(psi, PiecewiseExp):
        raise InvalidParams("pt_symmetry_defect expects a PiecewiseExp")
    half_width = 40.0 / psi.decay_rate()
    finite = [abs(lo) for lo, _, _ in psi.pieces if np.isfinite(lo)]
    finite += [abs(hi) for _, hi, _ in psi.pieces if np.isfinite(hi)]
    half_width += max(finite, default=0.0)
    n = int(sample_count)
    h = 2.0 * half_width / n
    x = -half_width + (np.arange(n) + 0.5) * h
    u = psi(x)
    g = np.conj(u[::-1])  # PT psi sampled on the symmetric grid
    norm2 = h * np.sum(np.abs(u) ** 2)
    if norm2 == 0.0:
        raise InvalidParams("cannot measure the defect of the zero function")
    inner = h * np.sum(np.conj(u) * g)
    c = inner / abs(inner) if abs(inner) > 0 else 1.0
    diff2 = h * np.sum(np.abs(g - c * u) ** 2)
    return float(np.sqrt(diff2 / norm2))


def scattering_coefficients(B, k):
    """Plane-wave transmission/reflection amplitudes of a connected-origin model.

    Left incidence: psi = e^{ikx} + r e^{-ikx} (x<0), t e^{ikx} (x>0); right
    incidence mirrored.  No flux conservation is implied unless the condition
    is self-adjoint.
    """
    M = require_nondegenerate(B)
    k = float(k)
    if not k > 0:
        raise InvalidParams(f"k must be a positive real number, got {k}")
    ap = M[0, 0] - 1j * k * M[0, 1]   # alpha - ik beta
    gp = M[1, 0] - 1j * k * M[1, 1]   # gamma - ik delta
    am = M[0, 0] + 1j * k * M[0, 1]
    gm = M[1, 0] + 1j * k * M[1, 1]
    det = k * k * M[0, 1] + 1j * k * (M[0, 0] + M[1, 1]) - M[1, 0]  # dispersion at real k
    scale = max(1.0, k) ** 2 * max(1.0, float(np.max(np.abs(M))))
    if abs(det) <= 1e-12 * scale:
        raise ResonantK(f"matching system singular at k = {k}")
    # left: [[1, -ap], [ik, -gp]] (t, r)^T = (am, gm)^T
    lhs = np.array([[1.0, -ap], [1j * k, -gp]], dtype=complex)
    t_left, r_left = np.linalg.solve(lhs, np.array([am, gm], dtype=complex))
    # right: [[ap, -1], [gp, -ik]] (t, r)^T = (1, -ik)^T
    lhs = np.array([[ap, -1.0], [gp, -1j * k]], dtype=complex)
    t_right, r_right = np.linalg.solve(lhs, np.array([1.0, -1j * k], dtype=complex))
    return ScatteringData(complex(t_left), complex(r_left), complex(t_right), complex(r_right))
