"""Levy asset models: jump specifications, moments, and simulation.

The asset follows dS = b S dt + S dX where X is a Levy process made of an
optional Brownian part and a jump part.  Two jump specifications are
supported:

* ``CompoundPoisson`` -- finite activity.  Paths evolve by the stochastic
  exponential, so each jump J multiplies the price by (1 + J) and every
  jump is recorded for power-jump bookkeeping.
* ``VarianceGamma`` -- infinite activity, sampled exactly through the
  gamma time change.  Individual jumps are unobservable, so paths evolve
  in exponential form S -> S * exp(b*dt + dX); when explicit jump records
  are required an epsilon-truncated compound-Poisson approximation of the
  VG Levy measure is used, with the truncated small-jump mass folded into
  the drift.

Moments m_i = integral of x^i against the Levy measure are analytic for
both families and are the raw inputs to every hedging formula downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special

from .errors import BankruptcyError, MissingJumpRecordsError, UnsupportedOrderError

__all__ = [
    "NormalJumps",
    "FixedJumps",
    "CompoundPoisson",
    "VarianceGamma",
    "LevyModel",
    "MomentVector",
    "PathGrid",
    "levy_moment",
    "moment_vector",
    "increment_cumulants",
    "simulate_increment",
    "evolve_asset",
    "relative_factors",
    "simulate_path",
    "power_jump_path",
    "log_mean_growth",
    "risk_neutral_drift",
]


# ---------------------------------------------------------------------------
# Jump-size laws for compound-Poisson models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalJumps:
    """Normally distributed jump sizes J ~ N(mean, std^2)."""

    mean: float = 0.0
    std: float = 0.1

    def moment(self, i: int) -> float:
        """Raw moment E[J^i], via the binomial expansion over central moments."""
        if i < 0:
            raise UnsupportedOrderError(f"moment order must be >= 0, got {i}")
        total = 0.0
        for j in range(0, i + 1, 2):
            # E[(J-mean)^j] = std^j (j-1)!!
            central = self.std**j * _double_factorial(j - 1)
            total += math.comb(i, j) * central * self.mean ** (i - j)
        return total

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.normal(self.mean, self.std, n)


@dataclass(frozen=True)
class FixedJumps:
    """Degenerate jump law: every jump has the same size."""

    size: float = 0.05

    def moment(self, i: int) -> float:
        if i < 0:
            raise UnsupportedOrderError(f"moment order must be >= 0, got {i}")
        return self.size**i

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return np.full(n, self.size)


def _double_factorial(n: int) -> int:
    if n <= 0:
        return 1
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


# ---------------------------------------------------------------------------
# Jump specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompoundPoisson:
    """Jumps arrive at rate ``intensity`` per year with i.i.d. sizes."""

    intensity: float
    law: NormalJumps | FixedJumps = field(default_factory=NormalJumps)

    def __post_init__(self):
        if self.intensity <= 0:
            raise ValueError(f"intensity must be > 0, got {self.intensity}")

    def nu_moment(self, i: int) -> float:
        """m_i of the Levy measure: intensity * E[J^i]."""
        return self.intensity * self.law.moment(i)


@dataclass(frozen=True)
class VarianceGamma:
    """Variance-gamma process: Brownian motion with drift on a gamma clock.

    Parameters follow the (theta, nu, sigma) convention: theta is the
    drift of the subordinated Brownian motion, nu the variance rate of the
    gamma subordinator, sigma its volatility.
    """

    theta: float
    nu: float
    sigma: float

    def __post_init__(self):
        if self.nu <= 0:
            raise ValueError(f"nu must be > 0, got {self.nu}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")

    def cgm(self) -> tuple[float, float, float]:
        """(C, G, M) parameters of the two-sided gamma representation."""
        root = math.sqrt(self.theta**2 * self.nu**2 / 4 + self.sigma**2 * self.nu / 2)
        half = self.theta * self.nu / 2
        return 1.0 / self.nu, 1.0 / (root - half), 1.0 / (root + half)

    def nu_moment(self, i: int) -> float:
        """m_i via the two-sided gamma density: C (i-1)! (M^-i + (-1)^i G^-i)."""
        if i < 1:
            raise UnsupportedOrderError(f"moment order must be >= 1, got {i}")
        if i == 1:
            return self.theta
        c, g, m = self.cgm()
        return c * math.factorial(i - 1) * (m**-i + (-1) ** i * g**-i)

    def levy_density(self, x: float) -> float:
        c, g, m = self.cgm()
        if x == 0:
            return math.inf
        rate = m if x > 0 else g
        return c / abs(x) * math.exp(-rate * abs(x))

    def martingale_correction(self) -> float:
        """omega with E[exp(X_t + omega t)] = 1 (exponential-form drift fix)."""
        arg = 1.0 - self.theta * self.nu - self.sigma**2 * self.nu / 2
        if arg <= 0:
            raise ValueError("VG exponential moment does not exist for these parameters")
        return math.log(arg) / self.nu


# ---------------------------------------------------------------------------
# The model proper
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevyModel:
    """Asset dynamics dS = b S dt + S dX.

    ``jump_eps`` is the truncation threshold below which infinite-activity
    jumps are folded into drift when explicit jump records are requested.
    """

    drift_b: float = 0.0
    brownian_sigma: float = 0.0
    jump_spec: CompoundPoisson | VarianceGamma | None = None
    jump_eps: float = 1e-6

    def __post_init__(self):
        if self.brownian_sigma < 0:
            raise ValueError("brownian_sigma must be >= 0")
        if self.jump_eps <= 0:
            raise ValueError("jump_eps must be > 0")

    @property
    def exponential_form(self) -> bool:
        """True when paths evolve as S*exp(b dt + dX) rather than the
        stochastic exponential; used for infinite-activity jumps."""
        return isinstance(self.jump_spec, VarianceGamma)


@dataclass(frozen=True)
class MomentVector:
    """Levy-measure moments m_1..m_imax plus the Brownian-adjusted m2'."""

    m: tuple[float, ...]
    brownian_sigma: float = 0.0

    @property
    def m2_prime(self) -> float:
        return self.m[1] + self.brownian_sigma**2

    def __getitem__(self, i: int) -> float:
        if not 1 <= i <= len(self.m):
            raise UnsupportedOrderError(f"moment m_{i} not available (have 1..{len(self.m)})")
        return self.m[i - 1]

    def prime(self, i: int) -> float:
        """m'_i: equal to m_i except m'_2 = m_2 + sigma^2."""
        return self.m2_prime if i == 2 else self[i]

    @property
    def order(self) -> int:
        return len(self.m)


def levy_moment(model: LevyModel, i: int) -> float:
    """m_i = int x^i nu(dx) for i >= 2; E[X_1] for i = 1."""
    if i < 1:
        raise UnsupportedOrderError(f"moment order must be >= 1, got {i}")
    if model.jump_spec is None:
        return 0.0
    return model.jump_spec.nu_moment(i)


def moment_vector(model: LevyModel, i_max: int) -> MomentVector:
    return MomentVector(
        m=tuple(levy_moment(model, i) for i in range(1, i_max + 1)),
        brownian_sigma=model.brownian_sigma,
    )


def increment_cumulants(model: LevyModel, dt: float, k_max: int) -> tuple[float, ...]:
    """Cumulants of X_{t+dt} - X_t: kappa_1 = m_1 dt, kappa_2 = (m_2 + sigma^2) dt,
    kappa_q = m_q dt for q >= 3."""
    mom = moment_vector(model, k_max)
    out = [mom[1] * dt, mom.m2_prime * dt] if k_max >= 2 else [mom[1] * dt]
    for q in range(3, k_max + 1):
        out.append(mom[q] * dt)
    return tuple(out[:k_max])


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def simulate_increment(model: LevyModel, dt: float, rng: np.random.Generator):
    """One increment of X over dt.

    Returns ``(dx, jumps)`` where ``jumps`` is the array of individual jump
    sizes for finite-activity models and ``None`` when jumps are not
    individually observable (VG via the gamma time change).
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    dx = model.brownian_sigma * math.sqrt(dt) * rng.standard_normal()
    spec = model.jump_spec
    if spec is None:
        return dx, np.empty(0)
    if isinstance(spec, CompoundPoisson):
        n = rng.poisson(spec.intensity * dt)
        jumps = spec.law.sample(rng, n)
        return dx + jumps.sum(), jumps
    g = rng.gamma(dt / spec.nu, spec.nu)
    dx += spec.theta * g + spec.sigma * math.sqrt(g) * rng.standard_normal()
    return dx, None


def one_jump_increments(
    model: LevyModel, dt: float, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Increments under the at-most-one-jump reading of a short period:
    dX = sigma sqrt(dt) Z + J B with B ~ Bernoulli(intensity * dt).

    This is the regime in which the power-jump decompositions and the
    minimal-variance weights are derived (dS = S dX, one jump at most); it
    backs the optimality diagnostics that compare those weights with
    empirical minimizers.
    """
    if not isinstance(model.jump_spec, CompoundPoisson):
        raise ValueError("one-jump regime sampling needs a compound-Poisson model")
    spec = model.jump_spec
    p = spec.intensity * dt
    if p >= 1:
        raise ValueError(f"intensity*dt = {p:.3g} is not a one-jump regime")
    z = rng.standard_normal(n)
    jump_on = rng.random(n) < p
    jumps = spec.law.sample(rng, n) * jump_on
    return model.brownian_sigma * math.sqrt(dt) * z + jumps


def evolve_asset(model: LevyModel, s: float, dt: float, rng: np.random.Generator):
    """Advance the asset one step; returns ``(s_next, dx, jumps)``.

    Compound-Poisson paths follow the exponential solution of the SDE, so a
    jump J multiplies the price by (1 + J); a jump <= -1 raises
    ``BankruptcyError``.  Exponential-form models multiply by exp(b dt + dX).
    """
    if s <= 0:
        raise ValueError("asset price must be > 0")
    dx, jumps = simulate_increment(model, dt, rng)
    if model.exponential_form:
        return s * math.exp(model.drift_b * dt + dx), dx, jumps
    jump_sum = jumps.sum() if jumps is not None else 0.0
    diffusive = dx - jump_sum
    sig = model.brownian_sigma
    factor = math.exp((model.drift_b - 0.5 * sig**2) * dt + diffusive)
    if jumps is not None and len(jumps):
        if np.any(jumps <= -1.0):
            raise BankruptcyError(f"jump of size {jumps.min():.6g} <= -1 bankrupts the path")
        factor *= np.prod(1.0 + jumps)
    return s * factor, dx, jumps


def relative_factors(
    model: LevyModel,
    dt: float,
    steps: int,
    n_paths: int,
    rng: np.random.Generator,
    antithetic: bool = False,
) -> np.ndarray:
    """Multiplicative per-step factors S_{k+1}/S_k, shape (n_paths, steps).

    The factors do not depend on the price level, so one draw prices every
    initial condition (the common-random-numbers backbone).  Paths hit by a
    jump <= -1 carry NaN factors and are discarded downstream.  With
    ``antithetic`` the Gaussian draws of the second half mirror the first
    half (jump counts and sizes are shared pairwise).
    """
    if antithetic:
        half = (n_paths + 1) // 2
        z = rng.standard_normal((half, steps))
        z = np.concatenate([z, -z], axis=0)[:n_paths]
    else:
        z = rng.standard_normal((n_paths, steps))
    sig = model.brownian_sigma
    spec = model.jump_spec
    if model.exponential_form:
        log_f = model.drift_b * dt + sig * math.sqrt(dt) * z
        shape = (half, steps) if antithetic else (n_paths, steps)
        g = rng.gamma(dt / spec.nu, spec.nu, shape)
        zz = rng.standard_normal(shape)
        vg = spec.theta * g + spec.sigma * np.sqrt(g) * zz
        if antithetic:
            vg = np.concatenate([vg, vg], axis=0)[:n_paths]
        return np.exp(log_f + vg)
    log_f = (model.drift_b - 0.5 * sig**2) * dt + sig * math.sqrt(dt) * z
    if spec is not None:
        shape = (half, steps) if antithetic else (n_paths, steps)
        counts = rng.poisson(spec.intensity * dt, shape)
        sizes = spec.law.sample(rng, int(counts.sum()))
        cells = np.repeat(np.arange(counts.size), counts.ravel())
        with np.errstate(invalid="ignore", divide="ignore"):
            logj = np.where(sizes <= -1.0, np.nan, np.log1p(sizes))  # NaN: bankrupt
        jsum = np.zeros(counts.size)
        np.add.at(jsum, cells, logj)
        jsum = jsum.reshape(shape)
        if antithetic:
            jsum = np.concatenate([jsum, jsum], axis=0)[:n_paths]
        log_f = log_f + jsum
    return np.exp(log_f)


# ---------------------------------------------------------------------------
# Paths with jump records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PathGrid:
    """One simulated path: grid times, asset values, X values, jump records."""

    times: np.ndarray
    asset: np.ndarray
    x: np.ndarray
    jump_times: np.ndarray
    jump_sizes: np.ndarray
    jumps_recorded: bool
    model: LevyModel

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")
        if np.any(self.asset <= 0):
            raise BankruptcyError("asset values must stay positive")
        if len(self.jump_times) and (
            self.jump_times.min() <= self.times[0] or self.jump_times.max() > self.times[-1]
        ):
            raise ValueError("jump records must lie inside (t0, tn]")


def simulate_path(
    model: LevyModel,
    s0: float,
    times: np.ndarray,
    rng: np.random.Generator,
    track_jumps: bool = True,
) -> PathGrid:
    """Simulate one asset path on a fixed time grid.

    With ``track_jumps`` a VG model is replaced by its eps-truncated
    compound-Poisson approximation so that individual jumps exist; without
    it VG increments are exact but unrecorded.
    """
    times = np.asarray(times, dtype=float)
    sampler_model = model
    vg_approx = None
    if track_jumps and isinstance(model.jump_spec, VarianceGamma):
        vg_approx = _VGJumpApproximation(model.jump_spec, model.jump_eps)
    s_vals = [s0]
    x_vals = [0.0]
    jt, js = [], []
    s = s0
    x = 0.0
    for t0, t1 in zip(times[:-1], times[1:]):
        dt = t1 - t0
        if vg_approx is not None:
            dx, jumps, s = vg_approx.step(model, s, dt, rng)
            u = rng.uniform(size=len(jumps))
            for size, frac in zip(jumps, u):
                jt.append(t0 + dt * frac)
                js.append(size)
        else:
            s, dx, jumps = evolve_asset(model, s, dt, rng)
            if jumps is not None and len(jumps):
                u = rng.uniform(size=len(jumps))
                for size, frac in zip(jumps, u):
                    jt.append(t0 + dt * frac)
                    js.append(size)
        x += dx
        s_vals.append(s)
        x_vals.append(x)
    recorded = track_jumps and (
        not isinstance(model.jump_spec, VarianceGamma) or vg_approx is not None
    )
    order = np.argsort(jt) if jt else np.empty(0, dtype=int)
    return PathGrid(
        times=times,
        asset=np.array(s_vals),
        x=np.array(x_vals),
        jump_times=np.array(jt)[order] if jt else np.empty(0),
        jump_sizes=np.array(js)[order] if js else np.empty(0),
        jumps_recorded=recorded,
        model=model,
    )


class _VGJumpApproximation:
    """eps-truncated compound-Poisson approximation of a VG process.

    Jumps with |x| > eps arrive as two one-sided compound-Poisson streams
    with exponential-integral tail rates; the mean of the discarded small
    jumps is folded into a drift correction.
    """

    def __init__(self, spec: VarianceGamma, eps: float):
        c, g, m = spec.cgm()
        self.spec = spec
        self.eps = eps
        self.rate_pos = c * special.exp1(m * eps)
        self.rate_neg = c * special.exp1(g * eps)
        # small-jump mean: int_{|x|<=eps} x nu(dx)
        self.small_drift = c * ((1 - math.exp(-m * eps)) / m - (1 - math.exp(-g * eps)) / g)
        self._m = m
        self._g = g

    def _sample_side(self, rng, n, rate_param):
        """Inverse-CDF sampling of density ~ exp(-rate x)/x on (eps, inf)."""
        if n == 0:
            return np.empty(0)
        tail = special.exp1(rate_param * self.eps)
        u = rng.uniform(size=n)
        out = np.empty(n)
        for idx, ui in enumerate(u):
            target = (1.0 - ui) * tail
            lo, hi = self.eps, self.eps
            while special.exp1(rate_param * hi) > target:
                hi *= 2.0
                if hi > 1e12:
                    break
            out[idx] = optimize.brentq(
                lambda y: special.exp1(rate_param * y) - target, lo, hi, xtol=1e-14
            )
        return out

    def step(self, model: LevyModel, s, dt, rng):
        n_pos = rng.poisson(self.rate_pos * dt)
        n_neg = rng.poisson(self.rate_neg * dt)
        pos = self._sample_side(rng, n_pos, self._m)
        neg = -self._sample_side(rng, n_neg, self._g)
        jumps = np.concatenate([pos, neg])
        dx_brownian = model.brownian_sigma * math.sqrt(dt) * rng.standard_normal()
        dx = dx_brownian + self.small_drift * dt + jumps.sum()
        s_next = s * math.exp(model.drift_b * dt + dx)
        return dx, jumps, s_next


def power_jump_path(path: PathGrid, i: int, r: float = 0.0):
    """Compensated power-jump series Y^(i) and the asset T^(i) = e^{rt} Y^(i).

    Y_t^(i) = sum of (jump size)^i over jumps up to t minus m_i t for
    i >= 2; the first-order series includes the continuous part, i.e.
    Y^(1) = X - m_1 t.
    """
    if i < 1:
        raise UnsupportedOrderError(f"power order must be >= 1, got {i}")
    if not path.jumps_recorded:
        raise MissingJumpRecordsError(
            "path carries no jump records; simulate with track_jumps=True"
        )
    m_i = levy_moment(path.model, i)
    rel = path.times - path.times[0]
    if i == 1:
        y = path.x - m_i * rel
    else:
        powers = path.jump_sizes**i
        y = np.array(
            [powers[path.jump_times <= t].sum() for t in path.times]
        ) - m_i * rel
        y[0] = 0.0
    t_asset = np.exp(r * path.times) * y
    return y, t_asset


# ---------------------------------------------------------------------------
# Drift conventions
# ---------------------------------------------------------------------------


def log_mean_growth(model: LevyModel) -> float:
    """gamma with E[S_T] = S_0 exp(gamma T) under the model's convention."""
    spec = model.jump_spec
    if spec is None:
        return model.drift_b
    if isinstance(spec, CompoundPoisson):
        return model.drift_b + spec.intensity * spec.law.moment(1)
    growth = model.drift_b + model.brownian_sigma**2 / 2 - spec.martingale_correction()
    return growth


def risk_neutral_drift(model: LevyModel, r: float, dividend: float = 0.0) -> float:
    """Drift b making the dividend-adjusted discounted asset driftless."""
    base = log_mean_growth(LevyModel(0.0, model.brownian_sigma, model.jump_spec, model.jump_eps))
    return r - dividend - base
