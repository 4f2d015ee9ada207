"""Integrand kernels on an open interval and their occupation measures.

A kernel is a real-valued function f on (a, b) together with analytic
metadata: monotonicity, asymptotic tags that unlock closed-form domain
rules, and optional closed-form hooks (window integrals, level-set measure,
occupation-measure builder) that the numeric drivers use when present.

The occupation measure ("tau measure") of f is the pushforward of Lebesgue
measure on (a, b) under f; it carries exactly the information the essential
and absolute domains of the induced transforms depend on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, sici

from .errors import (
    ConditionBViolated,
    ConstantFunctionError,
    InconclusiveError,
    OutOfInterval,
    UnsupportedKernel,
)
from .quadrature import adaptive_quad, bisect_monotone, improper_nonneg, slab_quad

INF = math.inf


# ---------------------------------------------------------------------------
# asymptotic tags
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerTail:
    """f(s) comparable to s^(-1/alpha) as s -> infinity."""
    alpha: float
    exact_coefficient: float | None = None  # c with |f - c/s| integrable (alpha=1)


@dataclass(frozen=True)
class PowerAtZero:
    """f(s) comparable to s^(-exponent) as s decreases to the left endpoint."""
    exponent: float


@dataclass(frozen=True)
class ExpTail:
    """f(s) squeezed between exp(-c s^alpha) envelopes as s -> infinity."""
    alpha: float


@dataclass(frozen=True)
class DoubleExp:
    """f(s) comparable to exp(-e^s) as s -> infinity."""


@dataclass(frozen=True)
class LogPower:
    """f(s) comparable to s^-1 (log s)^-beta at infinity, or to
    s^-1 (log(1/s))^-beta at zero when ``at_zero`` is set."""
    beta: float
    at_zero: bool = False


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------

class Kernel:
    """Real integrand on an open interval (a, b) with analytic metadata."""

    def __init__(self, name, a, b, fn, *, monotone_decreasing=False,
                 left_continuous=True, nonnegative=None, tag=None,
                 window_integral=None, window_square=None, window_abs=None,
                 level_upper=None, tau_builder=None, profile=None,
                 abs_bound=None):
        if not a < b:
            raise ValueError("empty interval")
        self.name = name
        self.a = float(a)
        self.b = float(b)
        self.fn = fn
        self.monotone_decreasing = monotone_decreasing
        self.left_continuous = left_continuous
        self.nonnegative = nonnegative
        self.tag = tag
        self.window_integral = window_integral      # closed form of int_p^q f
        self.window_square = window_square          # closed form of int_p^q f^2
        self.window_abs = window_abs                # closed form of int_p^q |f|
        self.level_upper = level_upper              # Leb{s: f(s) > u}
        self.tau_builder = tau_builder
        self.profile = profile or {}
        if abs_bound is None and monotone_decreasing and nonnegative:
            abs_bound = lambda p, q: float(self(np.array([p]))[0]) if p > self.a \
                else INF
        self.abs_bound = abs_bound                  # sup of |f| over [p, q]

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        return np.asarray(self.fn(s), dtype=float)

    def __repr__(self):
        return f"Kernel({self.name} on ({self.a:g}, {self.b:g}))"

    def interval(self):
        return (self.a, self.b)


def eval_kernel(k: Kernel, s: float) -> float:
    """Evaluate the kernel at one interior point."""
    if not (k.a < s < k.b):
        raise OutOfInterval(f"{s} outside ({k.a}, {k.b})")
    v = float(k(np.array([s]))[0])
    if not math.isfinite(v):
        raise OutOfInterval(f"kernel value not finite at {s}")
    return v


def kernel_window_integral(k, p, q, kind="plain"):
    """int_p^q of f, f^2 or |f| on a finite slab, using hooks when present."""
    hook = {"plain": k.window_integral, "square": k.window_square,
            "abs": k.window_abs}[kind]
    if hook is not None:
        return hook(p, q)
    fn = {"plain": lambda s: k(s),
          "square": lambda s: k(s) ** 2,
          "abs": lambda s: np.abs(k(s))}[kind]
    return adaptive_quad(fn, p, q, rtol=1e-10)[0]


# ---------------------------------------------------------------------------
# occupation measure
# ---------------------------------------------------------------------------

class TauMeasure:
    """Pushforward of Lebesgue measure on (a, b) under the kernel.

    The continuous part can be carried as a density with closed-form
    interval masses, or as a survival function u -> Leb{f > u} (the numeric
    fallback for monotone kernels).  Atoms record flat stretches of f.
    """

    def __init__(self, *, atoms=(), density=None, density_support=None,
                 interval_mass=None, survival=None, support=None, name="tau"):
        self.atoms = [(float(u), float(m)) for (u, m) in atoms]
        if any(m <= 0 for _, m in self.atoms):
            raise ValueError("atom masses must be positive")
        self.density = density
        self.density_support = density_support
        self.interval_mass = interval_mass
        self.survival = survival
        self.name = name
        if support is not None:
            self.a_prime, self.b_prime = float(support[0]), float(support[1])
        else:
            lows, highs = [], []
            if self.atoms:
                lows.append(min(u for u, _ in self.atoms))
                highs.append(max(u for u, _ in self.atoms))
            if density_support is not None:
                lows.append(density_support[0])
                highs.append(density_support[1])
            if not lows:
                raise ValueError("empty measure")
            self.a_prime, self.b_prime = min(lows), max(highs)

    def __repr__(self):
        return (f"TauMeasure({self.name}, support=({self.a_prime:g},"
                f" {self.b_prime:g}), atoms={len(self.atoms)})")

    # mass of the continuous part on (u1, u2]
    def _cont_mass(self, u1, u2):
        if u1 >= u2:
            return 0.0
        if self.interval_mass is not None:
            return float(self.interval_mass(u1, u2))
        if self.survival is not None:
            s1, s2 = self.survival(u1), self.survival(u2)
            if math.isinf(s1) and math.isinf(s2):
                raise InconclusiveError("interval mass between infinite survivals")
            return float(s1 - s2)
        if self.density is not None:
            lo, hi = self.density_support
            lo2, hi2 = max(u1, lo), min(u2, hi)
            if lo2 >= hi2:
                return 0.0
            fn = lambda u: np.asarray(self.density(u), dtype=float)
            if math.isfinite(lo2) and math.isfinite(hi2) and lo2 > lo and hi2 < hi:
                return adaptive_quad(fn, lo2, hi2, rtol=1e-11)[0]
            res = improper_nonneg(slab_quad(fn, rtol=1e-11), lo2, hi2)
            if res.converged:
                return float(np.max(res.value))
            if res.diverged:
                return INF
            raise InconclusiveError("interval mass not certified", res.evidence)
        return 0.0

    def mass(self, u1, u2, include_left=False, include_right=True):
        """Mass of an interval; defaults to the half-open (u1, u2]."""
        if u1 > u2:
            raise ValueError("u1 must not exceed u2")
        total = self._cont_mass(u1, u2)
        for u, m in self.atoms:
            if (u1 < u < u2) or (include_left and u == u1) \
                    or (include_right and u == u2):
                total += m
        return total

    def atom_mass_at(self, u, tol=1e-12):
        return sum(m for v, m in self.atoms if abs(v - u) <= tol)

    def total_nonzero(self):
        """Total mass off the origin, possibly infinite."""
        total = sum(m for u, m in self.atoms if u != 0.0)
        if self.density is not None or self.interval_mass is not None:
            lo, hi = self.a_prime, self.b_prime
            pieces = []
            if lo < 0.0:
                pieces.append((lo, min(0.0, hi)))
            if hi > 0.0:
                pieces.append((max(lo, 0.0), hi))
            for (p, q) in pieces:
                c = self._cont_mass(p, q)
                if c == INF:
                    return INF
                total += c
        elif self.survival is not None:
            raise InconclusiveError("total mass unavailable for survival form")
        return total

    def moment(self, h):
        """int h(u) tau(du) for nonnegative vectorized h."""
        total = 0.0
        for u, m in self.atoms:
            total += m * float(np.asarray(h(np.array([u])))[0])
        if self.density is not None:
            lo, hi = self.density_support
            fn = lambda u: np.asarray(h(u), dtype=float) * np.asarray(self.density(u), dtype=float)
            res = improper_nonneg(slab_quad(fn, rtol=1e-11), lo, hi)
            if res.converged:
                total += float(np.max(res.value))
            elif res.diverged:
                return INF
            else:
                raise InconclusiveError("occupation moment not certified",
                                        res.evidence)
        elif self.interval_mass is not None or self.survival is not None:
            raise UnsupportedKernel("moments need a density representation")
        return total


def tau_exponential(rate=1.0):
    """Exponential occupation measure (density rate e^{-rate u} on (0, inf))."""
    if rate <= 0:
        raise ValueError("rate must be positive")

    def im(u1, u2):
        lo, hi = max(u1, 0.0), u2
        if lo >= hi:
            return 0.0
        return math.exp(-rate * lo) - (0.0 if hi == INF else math.exp(-rate * hi))

    return TauMeasure(density=lambda u: rate * np.exp(-rate * u),
                      density_support=(0.0, INF), interval_mass=im,
                      support=(0.0, INF), name=f"exponential({rate:g})")


def tau_gaussian():
    """Standard Gaussian occupation measure."""

    def im(u1, u2):
        hi = 1.0 if u2 == INF else float(ndtr(u2))
        lo = 0.0 if u1 == -INF else float(ndtr(u1))
        return hi - lo

    dens = lambda u: np.exp(-0.5 * u * u) / math.sqrt(2.0 * math.pi)
    return TauMeasure(density=dens, density_support=(-INF, INF),
                      interval_mass=im, support=(-INF, INF), name="gaussian")


def tau_from_atoms(atoms):
    return TauMeasure(atoms=atoms, name="atomic")


# ---------------------------------------------------------------------------
# generalized inverse
# ---------------------------------------------------------------------------

class GeneralizedInverse:
    """Right-continuous generalized inverse of an increasing function.

    For an increasing right-continuous G on (A', B'), F(s) is the smallest u
    with G(u) > s; F is (A', B')-valued, increasing and right-continuous on
    (A, B) where A and B are the infimum and supremum of G.
    """

    def __init__(self, G, a_prime, b_prime, A=None, B=None, tol=1e-13):
        self.G = G
        self.a_prime = float(a_prime)
        self.b_prime = float(b_prime)
        self.tol = tol
        probe = self._probe_points()
        vals = [G(u) for u in probe]
        if max(vals) - min(vals) <= 0.0:
            raise ConstantFunctionError("function has no increase on its domain")
        self.A = float(A) if A is not None else self._limit("lower")
        self.B = float(B) if B is not None else self._limit("upper")
        if not self.A < self.B:
            raise ConstantFunctionError("degenerate range")

    def _probe_points(self):
        lo, hi = self.a_prime, self.b_prime
        if math.isinf(lo):
            lo = (hi - 1.0 if math.isfinite(hi) else -1.0)
        if math.isinf(hi):
            hi = lo + 2.0
        span = hi - lo
        return [lo + span * t for t in (0.05, 0.25, 0.5, 0.75, 0.95)]

    def _limit(self, side):
        # sampling-based endpoint limit of G; exact when G stabilizes (the
        # usual case), declared unbounded when deep probes keep moving
        out = None
        for k in range(6, 53):
            if side == "lower":
                u = (self.a_prime + 2.0 ** (-k) if math.isfinite(self.a_prime)
                     else -(2.0 ** k))
            else:
                u = (self.b_prime - 2.0 ** (-k) if math.isfinite(self.b_prime)
                     else 2.0 ** k)
            v = self.G(u)
            if out is not None and abs(v - out) < 1e-12 * max(1.0, abs(v)):
                return v
            out = v
            if abs(v) > 1e12:
                return -INF if side == "lower" else INF
        return -INF if side == "lower" else INF

    def __call__(self, s):
        if not (self.A < s < self.B):
            raise OutOfInterval(f"{s} outside ({self.A}, {self.B})")
        lo, hi = self.a_prime, self.b_prime
        # establish finite bracket [ulo, uhi] with G(ulo) <= s < G(uhi)
        if math.isinf(lo):
            lo = min(-1.0, hi - 1.0 if math.isfinite(hi) else -1.0)
            for _ in range(200):
                if self.G(lo) <= s:
                    break
                lo *= 2.0
            else:
                raise OutOfInterval("bracket expansion failed (lower)")
        if math.isinf(hi):
            hi = max(1.0, lo + 1.0)
            for _ in range(200):
                if self.G(hi) > s:
                    break
                hi *= 2.0
            else:
                raise OutOfInterval("bracket expansion failed (upper)")
        ulo, uhi = lo, hi
        for _ in range(300):
            mid = 0.5 * (ulo + uhi)
            if mid <= ulo or mid >= uhi:
                break
            if self.G(mid) > s:
                uhi = mid
            else:
                ulo = mid
            # bracket width relative to the value scale, so inverses decaying
            # toward zero keep full relative precision
            if uhi - ulo < self.tol * max(abs(ulo), abs(uhi), 1e-300):
                break
        return uhi


def generalized_inverse(G, a_prime, b_prime, **kw) -> GeneralizedInverse:
    """Construct the right-continuous generalized inverse of G on (a', b')."""
    return GeneralizedInverse(G, a_prime, b_prime, **kw)


# ---------------------------------------------------------------------------
# conditions and reconstruction
# ---------------------------------------------------------------------------

def check_condition_B(tau: TauMeasure):
    """Clauses a measure must satisfy to be an occupation measure of a
    decreasing kernel: nondegenerate support, locally finite in the
    interior, and no atom at a finite support endpoint.

    Returns (ok, witness) where witness names the first failing clause.
    """
    a1, b1 = tau.a_prime, tau.b_prime
    if not a1 < b1:
        return False, {"clause": "support-degenerate", "a_prime": a1, "b_prime": b1}
    span = min(1.0, (b1 - a1) / 4.0) if math.isfinite(b1 - a1) else 1.0
    for k in range(1, 10):
        p = a1 + span * 2.0 ** (-k) if math.isfinite(a1) else -(2.0 ** k)
        q = b1 - span * 2.0 ** (-k) if math.isfinite(b1) else 2.0 ** k
        if p >= q:
            continue
        try:
            m = tau.mass(p, q)
        except InconclusiveError:
            return False, {"clause": "interior-mass-uncertified", "p": p, "q": q}
        if m == INF:
            return False, {"clause": "interior-mass-infinite", "p": p, "q": q}
    if math.isfinite(a1) and tau.atom_mass_at(a1) > 0:
        return False, {"clause": "atom-at-lower-end", "u": a1}
    if math.isfinite(b1) and tau.atom_mass_at(b1) > 0:
        return False, {"clause": "atom-at-upper-end", "u": b1}
    return True, {"clause": None}


def default_grid(k: Kernel, n=4096):
    """Evaluation grid, geometric near improper or unbounded endpoints."""
    a, b = k.a, k.b
    pieces = []
    if math.isfinite(a) and math.isfinite(b):
        span = b - a
        pieces.append(np.linspace(a, b, n // 2 + 2)[1:-1])
        g = span * np.logspace(-12, -1, n // 4)
        pieces.extend([a + g, b - g])
    else:
        anchor = a if math.isfinite(a) else (b - 1.0 if math.isfinite(b) else 0.0)
        if math.isfinite(a):
            pieces.append(a + np.logspace(-12, 0, n // 4))
        else:
            pieces.append(anchor - np.logspace(0, 6, n // 4))
        if math.isfinite(b):
            pieces.append(b - np.logspace(-12, 0, n // 4))
        else:
            pieces.append(anchor + np.logspace(0, 6, n // 4))
        pieces.append(anchor + np.linspace(0.0, 1.0, n // 2))
    g = np.unique(np.concatenate(pieces))
    return g[(g > a) & (g < b)]


def check_condition_A(k: Kernel, grid=None):
    """Sampled check that the kernel is decreasing, left-continuous,
    nonconstant and strictly between its endpoint limits.

    The verdict is grid-based and flagged as such in the witness.
    """
    s = default_grid(k) if grid is None else np.asarray(grid, dtype=float)
    s = np.sort(s[(s > k.a) & (s < k.b)])
    v = k(s)
    scale = max(1.0, float(np.max(np.abs(v))))
    witness = {"sampled": True}
    if float(np.max(v) - np.min(v)) <= 1e-14 * scale:
        witness["clause"] = "constant"
        return False, witness
    inc = np.diff(v)
    bad = np.nonzero(inc > 1e-12 * scale)[0]
    if bad.size:
        i = int(bad[0])
        witness.update(clause="not-decreasing", s=float(s[i + 1]),
                       rise=float(inc[i]))
        return False, witness
    # left-continuity at visible jumps
    jumps = np.nonzero(-inc > 1e-6 * scale)[0]
    for i in jumps[:32]:
        s0 = float(s[i + 1])
        gaps = []
        for d in (1e-7, 1e-9, 1e-11):
            step = d * max(1.0, abs(s0))
            if s0 - step <= k.a:
                continue
            gaps.append(abs(float(k(np.array([s0 - step]))[0]) - float(v[i + 1])))
        if gaps and gaps[-1] > 1e-6 * scale and gaps[-1] >= 0.5 * gaps[0]:
            witness.update(clause="not-left-continuous", s=s0, gap=gaps[-1])
            return False, witness
    # strict bounds: no interior point may attain the endpoint limits
    # (exact comparisons: a decreasing kernel violates them only by being
    # flat against an endpoint, which sampling sees as exact ties)
    top = float(v[0])
    bottom = float(v[-1])
    inner = v[1:-1]
    hit_top = np.nonzero(inner >= top)[0]
    if hit_top.size:
        witness.update(clause="attains-supremum", s=float(s[1 + hit_top[0]]))
        return False, witness
    hit_bot = np.nonzero(inner <= bottom)[0]
    if hit_bot.size:
        # a trailing zero run is a floating-point underflow artifact when the
        # last positive sample is already at denormal scale
        i0 = int(hit_bot[0]) + 1
        if bottom == 0.0 and i0 > 0:
            prior = np.abs(v[:i0])
            last_positive = float(prior[prior > 0][-1]) if np.any(prior > 0) else 0.0
            if 0.0 < last_positive < 1e-250:
                witness["note"] = "trailing-underflow-zeros-ignored"
                witness["clause"] = None
                return True, witness
        witness.update(clause="attains-infimum", s=float(s[i0]))
        return False, witness
    witness["clause"] = None
    return True, witness


def kernel_from_tau(tau: TauMeasure, name=None) -> Kernel:
    """Decreasing left-continuous kernel whose occupation measure is tau.

    The construction centers the signed cumulative mass at an interior point
    c, forms its generalized inverse, and reflects: f(s) = F(-s).  Fails
    with :class:`ConditionBViolated` when tau cannot arise this way.
    """
    ok, witness = check_condition_B(tau)
    if not ok:
        raise ConditionBViolated(witness["clause"])
    a1, b1 = tau.a_prime, tau.b_prime
    lo, hi = max(a1, -1.0), min(b1, 1.0)
    if lo < hi:
        c = 0.5 * (lo + hi)
    elif math.isfinite(a1) and math.isfinite(b1):
        c = 0.5 * (a1 + b1)
    elif math.isfinite(a1):
        c = a1 + 1.0
    else:
        c = b1 - 1.0

    def G(u):
        if u >= c:
            return tau.mass(c, u)
        return -tau.mass(u, c)

    # signed cumulative mass can be unbounded toward either support end;
    # slow (logarithmic) accumulation shows up as a non-vanishing difference
    # between deep refinement levels
    def _end_mass(side):
        vals = []
        for k in (10, 25, 40, 55):
            if side == "upper":
                q = b1 - 2.0 ** (-k) if math.isfinite(b1) else 2.0 ** k
                if q <= c:
                    vals.append(0.0)
                    continue
                v = tau.mass(c, q)
            else:
                p = a1 + 2.0 ** (-k) if math.isfinite(a1) else -(2.0 ** k)
                if p >= c:
                    vals.append(0.0)
                    continue
                v = tau.mass(p, c)
            if v > 1e13:
                return INF
            vals.append(v)
        if abs(vals[-1] - vals[-2]) > 1e-10 * max(1.0, abs(vals[-1])):
            return INF
        return vals[-1]

    B = _end_mass("upper")
    A = -_end_mass("lower")
    F = GeneralizedInverse(G, a1, b1, A=A, B=B)
    a, b = -B, -A

    def fn(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return np.array([F(-x) for x in s])

    return Kernel(name or f"from_tau({tau.name})", a, b, fn,
                  monotone_decreasing=True, left_continuous=True,
                  nonnegative=tau.a_prime >= 0.0)


# ---------------------------------------------------------------------------
# occupation-measure queries on kernels
# ---------------------------------------------------------------------------

def _endpoint_limit(k: Kernel, end):
    """Sampled limit of f at an endpoint; returns (value, finite?) with
    value +-inf when the sampled sequence grows beyond bound."""
    a, b = k.a, k.b
    step0 = min(1.0, (b - a) / 2.0) if math.isfinite(b - a) else 1.0
    prev = None
    for j in range(4, 44):
        if end == "lower":
            s = a + step0 * 2.0 ** (-j) if math.isfinite(a) else -(2.0 ** j)
        else:
            s = b - step0 * 2.0 ** (-j) if math.isfinite(b) else 2.0 ** j
        if not (a < s < b):
            continue
        v = float(k(np.array([s]))[0])
        if abs(v) > 1e13:
            return (INF if v > 0 else -INF), False
        if prev is not None and abs(v - prev) <= 1e-12 * max(1.0, abs(v)):
            return v, True
        prev = v
    return prev, True


def _level_boundary(k: Kernel, u, f_top, f_bot):
    """For decreasing f: boundary point of {s : f(s) > u}."""
    if u >= f_top:
        return k.a
    if u < f_bot:
        return k.b
    lo = k.a
    hi = k.b
    if math.isinf(hi):
        hi = (k.a if math.isfinite(k.a) else 0.0) + 1.0
        while float(k(np.array([hi]))[0]) > u:
            hi = hi * 2.0 + 1.0
    if math.isinf(lo):
        lo = hi - 1.0
        while float(k(np.array([lo]))[0]) <= u:
            lo = lo * 2.0 - 1.0
    g = lambda s: float(k(np.array([s]))[0])
    return bisect_monotone(g, u, lo, hi, increasing=False, tol=1e-14)


def tau_of_interval(k: Kernel, u1, u2):
    """Occupation mass of (u1, u2]: Lebesgue measure of {s : f(s) in (u1, u2]}.

    Closed form through the level-measure hook when available, otherwise
    numeric level-set bracketing for monotone kernels.
    """
    if u1 >= u2:
        raise ValueError("u1 must be below u2")
    if k.level_upper is not None:
        l1, l2 = k.level_upper(u1), k.level_upper(u2)
        if math.isinf(l1) and math.isinf(l2):
            return _tau_between(k, u1, u2)
        if math.isinf(l1):
            return INF
        return l1 - l2
    if k.monotone_decreasing:
        f_top, _ = _endpoint_limit(k, "lower")
        f_bot, _ = _endpoint_limit(k, "upper")
        s1 = _level_boundary(k, u1, f_top, f_bot)
        s2 = _level_boundary(k, u2, f_top, f_bot)
        if math.isinf(s1) and math.isinf(s2):
            return 0.0
        if math.isinf(s1):
            return INF
        return s1 - s2
    raise InconclusiveError(
        "level sets of a non-monotone kernel cannot be bracketed")


def _tau_between(k, u1, u2):
    # both level measures infinite: the slab between the levels still has
    # finite measure when the kernel range misses (u1, u2]
    f_top, _ = _endpoint_limit(k, "lower")
    f_bot, _ = _endpoint_limit(k, "upper")
    if u2 <= f_bot or u1 >= f_top:
        return 0.0
    s1 = _level_boundary(k, u1, f_top, f_bot)
    s2 = _level_boundary(k, u2, f_top, f_bot)
    return s1 - s2


def tau_measure(k: Kernel) -> TauMeasure:
    """Materialize the occupation measure of the kernel.

    Built-in kernels supply a closed-form builder; other monotone kernels
    get a survival-function representation; black-box non-monotone kernels
    are unsupported (their occupation measure does not determine the
    transform anyway).
    """
    if k.tau_builder is not None:
        return k.tau_builder()
    if k.monotone_decreasing:
        f_top, _ = _endpoint_limit(k, "lower")
        f_bot, _ = _endpoint_limit(k, "upper")

        def survival(u):
            s = _level_boundary(k, u, f_top, f_bot)
            if math.isinf(s):
                return INF
            return s - k.a if math.isfinite(k.a) else INF

        return TauMeasure(survival=survival, support=(f_bot, f_top),
                          name=f"tau({k.name})")
    raise UnsupportedKernel(
        f"occupation measure of non-monotone kernel {k.name!r} is not materialized")


# ---------------------------------------------------------------------------
# built-in kernels
# ---------------------------------------------------------------------------

def exp_kernel(rate=1.0):
    """f(s) = exp(-rate s) on (0, inf); the selfdecomposability integrand."""
    if rate <= 0:
        raise ValueError("rate must be positive")
    r = float(rate)

    def tau_builder():
        def im(u1, u2):
            hi = min(u2, 1.0)
            if u1 <= 0.0:
                return INF if hi > 0.0 else 0.0
            lo = u1
            if lo >= hi:
                return 0.0
            return math.log(hi / lo) / r
        return TauMeasure(density=lambda u: 1.0 / (r * u),
                          density_support=(0.0, 1.0), interval_mass=im,
                          support=(0.0, 1.0), name="exp-kernel")

    def level(u):
        if u <= 0.0:
            return INF
        if u >= 1.0:
            return 0.0
        return math.log(1.0 / u) / r

    def k_of_r(x):
        if x <= 1.0:
            return 1.0 / (2.0 * r)
        return x ** -2 / (2.0 * r)

    return Kernel(
        "exp", 0.0, INF, lambda s: np.exp(-r * s),
        monotone_decreasing=True, nonnegative=True, tag=ExpTail(1.0),
        window_integral=lambda p, q: (math.exp(-r * p) - math.exp(-r * q)) / r,
        window_square=lambda p, q: (math.exp(-2 * r * p) - math.exp(-2 * r * q)) / (2 * r),
        window_abs=lambda p, q: (math.exp(-r * p) - math.exp(-r * q)) / r,
        level_upper=level, tau_builder=tau_builder,
        profile={"indicator_mass": INF, "abs_mass": 1.0 / r,
                 "square_mass": 0.5 / r, "clipped_square": 0.5 / r,
                 "k_of_r": k_of_r,
                 "h_of_r": lambda x: 0.0 if x <= 1.0 else math.log(x) / r,
                 "locally_integrable": True})


def log_inverse_kernel():
    """f(s) = log(1/s) on (0, 1); the Goldie-Steutel-Bondesson integrand."""

    def wint(p, q):
        F = lambda s: s - s * math.log(s)
        return F(q) - F(p)

    def wsq(p, q):
        F = lambda s: s * (math.log(s) ** 2 - 2 * math.log(s) + 2)
        return F(q) - F(p)

    def level(u):
        if u <= 0.0:
            return 1.0
        return math.exp(-u)

    def tau_builder():
        return tau_exponential(1.0)

    def k_of_r(x):
        # int log^2(1/s) over {log(1/s) <= 1/x}
        t = 1.0 / x
        return 2.0 - math.exp(-t) * (t * t + 2 * t + 2)

    return Kernel(
        "log_inv", 0.0, 1.0, lambda s: np.log(1.0 / s),
        monotone_decreasing=True, nonnegative=True, tag=None,
        window_integral=wint, window_square=wsq, window_abs=wint,
        level_upper=level, tau_builder=tau_builder,
        profile={"indicator_mass": 1.0, "abs_mass": 1.0, "square_mass": 2.0,
                 "clipped_square": 2.0 - 4.0 / math.e,
                 "k_of_r": k_of_r, "h_of_r": lambda x: math.exp(-1.0 / x),
                 "locally_integrable": True})


def power_tail_kernel(alpha):
    """f(s) = s^(-1/alpha) on (1, inf)."""
    if alpha <= 0:
        raise ValueError("tail index must be positive")
    al = float(alpha)
    e1 = 1.0 - 1.0 / al
    e2 = 1.0 - 2.0 / al

    def wint(p, q):
        if abs(e1) < 1e-14:
            return math.log(q / p)
        return (q ** e1 - p ** e1) / e1

    def wsq(p, q):
        if abs(e2) < 1e-14:
            return math.log(q / p)
        return (q ** e2 - p ** e2) / e2

    def level(u):
        if u <= 0.0:
            return INF
        if u >= 1.0:
            return 0.0
        return u ** (-al) - 1.0

    def tau_builder():
        def im(u1, u2):
            hi = min(u2, 1.0)
            if u1 <= 0.0:
                return INF if hi > 0.0 else 0.0
            lo = u1
            if lo >= hi:
                return 0.0
            return lo ** (-al) - hi ** (-al)
        return TauMeasure(density=lambda u: al * u ** (-al - 1.0),
                          density_support=(0.0, 1.0), interval_mass=im,
                          support=(0.0, 1.0), name=f"power-tail({al:g})")

    square_mass = al / (2.0 - al) if al < 2.0 else INF
    abs_mass = al / (1.0 - al) if al < 1.0 else INF

    def k_of_r(x):
        if x <= 1.0:
            return square_mass
        if al >= 2.0:
            return INF
        return (x ** (al - 2.0)) * al / (2.0 - al)

    return Kernel(
        "power", 1.0, INF, lambda s: s ** (-1.0 / al),
        monotone_decreasing=True, nonnegative=True,
        tag=PowerTail(al, exact_coefficient=1.0 if abs(al - 1.0) < 1e-12 else None),
        window_integral=wint, window_square=wsq, window_abs=wint,
        level_upper=level, tau_builder=tau_builder,
        profile={"indicator_mass": INF, "abs_mass": abs_mass,
                 "square_mass": square_mass, "clipped_square": square_mass,
                 "k_of_r": k_of_r,
                 "h_of_r": lambda x: 0.0 if x <= 1.0 else x ** al - 1.0,
                 "locally_integrable": True})


def power_at_zero_kernel(exponent, b=1.0):
    """f(s) = s^(-exponent) on (0, b)."""
    if exponent <= 0:
        raise ValueError("exponent must be positive")
    if not (0 < b < INF):
        raise ValueError("right endpoint must be finite and positive")
    q_ = float(exponent)
    bb = float(b)
    e1 = 1.0 - q_
    e2 = 1.0 - 2.0 * q_
    f_min = bb ** (-q_)

    def wint(p, q):
        if abs(e1) < 1e-14:
            return math.log(q / p)
        return (q ** e1 - p ** e1) / e1

    def wsq(p, q):
        if abs(e2) < 1e-14:
            return math.log(q / p)
        return (q ** e2 - p ** e2) / e2

    def level(u):
        if u < f_min:
            return bb
        return u ** (-1.0 / q_)

    def tau_builder():
        def im(u1, u2):
            lo, hi = max(u1, f_min), u2
            if lo >= hi:
                return 0.0
            top = 0.0 if hi == INF else hi ** (-1.0 / q_)
            return lo ** (-1.0 / q_) - top
        return TauMeasure(
            density=lambda u: (1.0 / q_) * u ** (-1.0 / q_ - 1.0),
            density_support=(f_min, INF), interval_mass=im,
            support=(f_min, INF), name=f"power-at-zero({q_:g})")

    abs_mass = bb ** e1 / e1 if q_ < 1.0 else INF
    square_mass = bb ** e2 / e2 if q_ < 0.5 else INF
    # clipped square: f > 1 on s < 1 (for b <= 1 the whole interval)
    s_one = min(bb, 1.0)
    if q_ < 0.5:
        clipped = s_one + (bb ** e2 - s_one ** e2) / e2 if bb > 1.0 else bb
    else:
        clipped = s_one + (wsq(s_one, bb) if bb > s_one else 0.0)

    def k_of_r(x):
        lo = min(bb, x ** (1.0 / q_))
        if lo >= bb:
            return 0.0
        if abs(e2) < 1e-14:
            return math.log(bb / lo)
        return (bb ** e2 - lo ** e2) / e2

    return Kernel(
        "power_at_zero", 0.0, bb, lambda s: s ** (-q_),
        monotone_decreasing=True, nonnegative=True, tag=PowerAtZero(q_),
        window_integral=wint, window_square=wsq, window_abs=wint,
        level_upper=level, tau_builder=tau_builder,
        profile={"indicator_mass": bb, "abs_mass": abs_mass,
                 "square_mass": square_mass, "clipped_square": clipped,
                 "k_of_r": k_of_r,
                 "h_of_r": lambda x: min(bb, x ** (1.0 / q_)),
                 "locally_integrable": True})


def double_exp_kernel():
    """f(s) = exp(-e^s) on (0, inf)."""
    f_max = math.exp(-1.0)

    def level(u):
        if u <= 0.0:
            return INF
        if u >= f_max:
            return 0.0
        return math.log(math.log(1.0 / u))

    def tau_builder():
        def im(u1, u2):
            hi = min(u2, f_max)
            if u1 <= 0.0:
                return INF if hi > 0.0 else 0.0
            lo = u1
            if lo >= hi:
                return 0.0
            return level(lo) - level(hi)
        dens = lambda u: 1.0 / (u * np.log(1.0 / u))
        return TauMeasure(density=dens, density_support=(0.0, f_max),
                          interval_mass=im, support=(0.0, f_max),
                          name="double-exp")

    return Kernel(
        "double_exp", 0.0, INF,
        lambda s: np.exp(-np.exp(np.minimum(s, 709.0))),
        monotone_decreasing=True, nonnegative=True, tag=DoubleExp(),
        level_upper=level, tau_builder=tau_builder,
        profile={"indicator_mass": INF,
                 "h_of_r": lambda x: 0.0 if x <= 1.0 / f_max else math.log(math.log(x)),
                 "locally_integrable": True})


def log_power_kernel(beta, at_zero=False):
    """f comparable to s^-1 with a logarithmic correction of order -beta,
    at infinity (default) or at the left endpoint (``at_zero``)."""
    be = float(beta)
    if be <= -1.0:
        raise ValueError("beta must exceed -1 for a decreasing kernel")
    if not at_zero:
        a, b = math.e, INF

        def fn(s):
            return 1.0 / (s * np.log(s) ** be)

        def wint(p, q):
            if abs(be - 1.0) < 1e-14:
                return math.log(math.log(q) / math.log(p))
            return (math.log(q) ** (1 - be) - math.log(p) ** (1 - be)) / (1 - be)

        abs_mass = 1.0 / (be - 1.0) if be > 1.0 else INF
        return Kernel("log_power", a, b, fn, monotone_decreasing=True,
                      nonnegative=True, tag=LogPower(be, at_zero=False),
                      window_integral=wint, window_abs=wint,
                      profile={"indicator_mass": INF, "abs_mass": abs_mass,
                               "locally_integrable": True})
    bb = math.exp(-max(1.0, be))

    def fn(s):
        return 1.0 / (s * np.log(1.0 / s) ** be)

    def wint(p, q):
        # substitute v = log(1/s)
        vq, vp = math.log(1.0 / q), math.log(1.0 / p)
        if abs(be - 1.0) < 1e-14:
            return math.log(vp / vq)
        return (vp ** (1 - be) - vq ** (1 - be)) / (1 - be)

    # int_0^bb f ds diverges iff beta <= 1
    if be > 1.0:
        vb = math.log(1.0 / bb)
        abs_mass = vb ** (1 - be) / (be - 1.0)
    else:
        abs_mass = INF
    return Kernel("log_power_zero", 0.0, bb, fn, monotone_decreasing=True,
                  nonnegative=True, tag=LogPower(be, at_zero=True),
                  window_integral=wint, window_abs=wint,
                  profile={"indicator_mass": bb, "abs_mass": abs_mass,
                           "square_mass": INF, "clipped_square": None,
                           "locally_integrable": True})


def sinc_kernel():
    """f(s) = sin(s)/s on (0, inf); sign-changing, non-monotone."""

    def fn(s):
        return np.sin(s) / s

    def wint(p, q):
        siq = float(sici(q)[0])
        sip = float(sici(p)[0])
        return siq - sip

    def wsq(p, q):
        W = lambda s: float(sici(2 * s)[0]) - math.sin(s) ** 2 / s
        return W(q) - W(p)

    return Kernel(
        "sinc", 0.0, INF, fn, monotone_decreasing=False, nonnegative=False,
        tag=None, window_integral=wint, window_square=wsq,
        abs_bound=lambda p, q: min(1.0, 1.0 / p) if p > 0 else 1.0,
        profile={"indicator_mass": INF, "abs_mass": INF,
                 "square_mass": math.pi / 2.0, "clipped_square": math.pi / 2.0,
                 "k_of_r": lambda x: math.pi / 2.0 if x <= 1.0 else None,
                 "h_of_r": lambda x: 0.0 if x <= 1.0 else None,
                 "locally_integrable": True})


def indicator_kernel(height=1.0, a=0.0, b=1.0):
    """Constant kernel f = height on a finite interval (a, b)."""
    if height == 0.0:
        raise ValueError("height must be nonzero")
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise ValueError("finite nondegenerate interval required")
    h = float(height)
    span = float(b - a)

    def level(u):
        return span if u < h else 0.0

    def tau_builder():
        return TauMeasure(atoms=[(h, span)], name="indicator")

    return Kernel(
        "indicator", a, b, lambda s: np.full_like(np.asarray(s, dtype=float), h),
        monotone_decreasing=True, nonnegative=h > 0, tag=None,
        window_integral=lambda p, q: h * (q - p),
        window_square=lambda p, q: h * h * (q - p),
        window_abs=lambda p, q: abs(h) * (q - p),
        level_upper=level, tau_builder=tau_builder,
        profile={"indicator_mass": span, "abs_mass": abs(h) * span,
                 "square_mass": h * h * span,
                 "clipped_square": min(h * h, 1.0) * span,
                 "k_of_r": lambda x: h * h * span if abs(h) <= 1.0 / x else 0.0,
                 "h_of_r": lambda x: span if abs(h) > 1.0 / x else 0.0,
                 "locally_integrable": True})


BUILTIN_KERNELS = {
    "exp": exp_kernel,
    "log_inv": log_inverse_kernel,
    "power": power_tail_kernel,
    "power_at_zero": power_at_zero_kernel,
    "double_exp": double_exp_kernel,
    "log_power": log_power_kernel,
    "sinc": sinc_kernel,
    "indicator": indicator_kernel,
}
