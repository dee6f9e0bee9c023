"""Variational engine: scale reduction, simplex searches, generalized
eigensolves, schedule-based multi-term bases, and the stability scans.

Everything here optimizes Rayleigh quotients built from the closed-form
matrix elements.  The overall scale of a basis is never searched by the
simplex: for a scale-closed family the optimal scale is analytic (single
term) or a cheap one-dimensional bounded search over the lowest eigenvalue
of (lam^2 T + lam V, N) (multi-term), so the simplex only sees shape
parameters.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla
from scipy.optimize import minimize, minimize_scalar

from .model import (MatBlock, SystemSpec, VariationalResult, NATURAL,
                    UNNATURAL, STABILITY_TOL, threshold_for, hminus_spec)
from . import matel3, matel4

_BIG = 1e6


class NonConvergenceError(RuntimeError):
    """Raised when no restart of the simplex produced a finite optimum."""


@dataclass(frozen=True)
class MinimizerConfig:
    f_tol: float = 1e-10
    x_tol: float = 1e-8
    max_iter: int = 10_000
    restarts: int = 5
    constraint_mode: str = "reject"
    seed: int = 0
    jitter: float = 0.05

    def __post_init__(self):
        if self.f_tol <= 0 or self.x_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.constraint_mode not in ("reject", "penalty"):
            raise ValueError("constraint_mode must be 'reject' or 'penalty'")


@dataclass(frozen=True)
class Schedule:
    """Multi-term range parameters from an arithmetic progression.

    Term i (1-based) is (alpha0, i*beta0, c_i) with c_i = 0 for the default
    tie pattern or c_i = i*beta0 when the second and third ranges are tied.
    """

    alpha0: float
    beta0: float
    n_terms: int
    tie_pattern: str = "c-zero"

    def __post_init__(self):
        if not 1 <= self.n_terms <= 8:
            raise ValueError("n_terms must be in [1, 8]")
        if self.tie_pattern not in ("c-zero", "bc-tied"):
            raise ValueError("unknown tie pattern")
        for t in self.terms():
            if t[0] + t[1] <= 0 or t[1] + t[2] <= 0 or t[2] + t[0] <= 0:
                raise ValueError("schedule generates a non-normalizable term")

    def terms(self):
        out = []
        for i in range(1, self.n_terms + 1):
            b = i * self.beta0
            out.append((self.alpha0, b, b if self.tie_pattern == "bc-tied" else 0.0))
        return out


# ---------------------------------------------------------------------------
# core solvers


def virial_reduce(n, t, v):
    """Scale-optimized Rayleigh quotient -v^2/(4 n t) and the optimal scale.

    Valid for any trial family closed under rescaling; requires an attractive
    net potential, otherwise no bound scale exists.
    """
    if v >= 0:
        raise ValueError("virial reduction needs V < 0 (attractive regime)")
    if n <= 0 or t <= 0:
        raise ValueError("virial reduction needs N > 0 and T > 0")
    lam = -v / (2.0 * t)
    return -v * v / (4.0 * n * t), lam


def gen_eig(block: MatBlock):
    """All eigenpairs of (T+V) c = E N c, eigenvalues ascending.

    The overlap is reduced through its triangular factor.  If its condition
    number exceeds 1e12 the most collinear basis term is dropped once (its
    coefficient row comes back as zero); a second failure is fatal.
    """
    N = np.asarray(block.n_mat, dtype=float)
    H = np.asarray(block.t_mat, dtype=float) + np.asarray(block.v_mat, dtype=float)

    def attempt(Nm, Hm):
        L = sla.cholesky(Nm, lower=True)
        A = sla.solve_triangular(L, Hm, lower=True)
        A = sla.solve_triangular(L, A.T, lower=True).T
        w, y = np.linalg.eigh(0.5 * (A + A.T))
        c = sla.solve_triangular(L.T, y, lower=False)
        return w, c

    def cond(Nm):
        w = np.linalg.eigvalsh(Nm)
        if w[0] <= 0:
            return np.inf
        return w[-1] / w[0]

    if cond(N) <= 1e12:
        return attempt(N, H)
    # drop the term dominating the near-null direction of the overlap
    wN, UN = np.linalg.eigh(N)
    drop = int(np.argmax(np.abs(UN[:, 0])))
    keep = [i for i in range(N.shape[0]) if i != drop]
    Nk, Hk = N[np.ix_(keep, keep)], H[np.ix_(keep, keep)]
    if cond(Nk) > 1e12:
        raise np.linalg.LinAlgError("overlap matrix ill-conditioned beyond repair")
    w, ck = attempt(Nk, Hk)
    c = np.zeros((N.shape[0], len(w)))
    c[keep, :] = ck
    return w, c


def scaled_lowest(block: MatBlock, k=0, floor=1e-12, bounds=(0.05, 50.0)):
    """k-th eigenvalue minimized over the overall scale of the basis.

    The overlap is projected onto its well-conditioned subspace first
    (canonical orthogonalization with a relative floor), which keeps the
    search robust when the simplex wanders into near-collinear bases.
    """
    N = np.asarray(block.n_mat, dtype=float)
    w, U = np.linalg.eigh(N)
    keep = w > floor * max(w[-1], 1e-300)
    if keep.sum() <= k:
        return _BIG, 1.0
    X = U[:, keep] / np.sqrt(w[keep])
    Tt = X.T @ np.asarray(block.t_mat) @ X
    Vt = X.T @ np.asarray(block.v_mat) @ X

    def e_of(lam):
        return np.linalg.eigvalsh(lam * lam * Tt + lam * Vt)[k]

    r = minimize_scalar(e_of, bounds=bounds, method="bounded",
                        options=dict(xatol=1e-12))
    return float(r.fun), float(r.x)


def minimize_nm(objective, x0, config: MinimizerConfig, scale=None):
    """Best-of-restarts Nelder-Mead; deterministic given config.seed.

    The objective is expected to return a large sentinel on constraint
    violations (reject mode).  Returns (params, value, info).
    """
    x0 = np.asarray(x0, dtype=float)
    if scale is None:
        scale = np.maximum(np.abs(x0), 0.1)
    rng = np.random.default_rng(config.seed)
    starts = [x0]
    for _ in range(max(0, config.restarts - 1)):
        starts.append(x0 + config.jitter * scale
                      * rng.standard_normal(x0.shape))
    best = None
    nfev = 0
    for s in starts:
        r = minimize(objective, s, method="Nelder-Mead",
                     options=dict(maxiter=config.max_iter,
                                  maxfev=config.max_iter,
                                  fatol=config.f_tol, xatol=config.x_tol))
        nfev += r.nfev
        if best is None or r.fun < best.fun:
            best = r
    if best is None or not np.isfinite(best.fun) or best.fun >= _BIG / 2:
        raise NonConvergenceError("no simplex restart reached a feasible optimum")
    return best.x, float(best.fun), {"nfev": nfev, "converged": bool(best.success)}


# ---------------------------------------------------------------------------
# three-body optimization


def _valid3(terms, min_sum=1e-3):
    return all(t[0] + t[1] > min_sum and t[1] + t[2] > min_sum
               and t[2] + t[0] > min_sum for t in terms)


def _nat_lowest(terms, spec, k=0):
    return scaled_lowest(matel3.natural_matblock(terms, spec), k=k)


# Vector-sector evaluations are self-guarded: matel3 refuses element sets
# that cancel too many digits, and bases whose overlap condition number
# exceeds this cap are refused here.  In exact arithmetic a nearly dependent
# basis is harmless, but here it amplifies the last few bits of the elements
# into fake binding of order 1e-5 -- exactly the scale of the physics.
_UN_COND_CAP = 1e8


def _un_lowest(terms, spec, k=0):
    blk = matel3.unnatural_matblock(terms, spec)
    wN = np.linalg.eigvalsh(np.asarray(blk.n_mat, dtype=float))
    if wN[0] <= 0 or wN[-1] > _UN_COND_CAP * wN[0]:
        raise matel3.CancellationError(
            "vector-sector overlap too ill-conditioned to trust")
    return scaled_lowest(blk, k=k)


# Curated starting points for the multi-term searches (found once by wider
# searches; kept fixed for determinism).  Keyed by (z, epsilon, n_terms, k).
_NAT_SEEDS = {
    (1.0, +1, 1, 0): [(1.07, 0.45, 0.05)],
    (1.0, +1, 2, 0): [(1.07, 0.45, 0.05), (0.6, 0.3, 0.02)],
    (1.0, +1, 3, 0): [(1.07, 0.45, 0.05), (0.8, 0.35, 0.02), (0.5, 0.25, 0.01)],
    (2.0, +1, 1, 0): [(2.2, 1.6, 0.1)],
    (2.0, +1, 2, 0): [(2.2, 1.6, 0.1), (1.4, 2.4, 0.3)],
    (2.0, +1, 3, 0): [(2.2, 1.6, 0.1), (1.4, 2.4, 0.3), (1.9, 1.0, 0.05)],
    (2.0, -1, 1, 0): [(2.0, 0.55, 0.02)],
    (2.0, -1, 2, 0): [(2.0, 0.55, 0.02), (1.8, 0.4, 0.01)],
    (2.0, +1, 2, 1): [(2.2, 1.6, 0.1), (2.0, 0.5, 0.02)],
}
# larger bases start from the optimized smaller basis plus one fresh term
_NAT_EXTEND = {
    (2.0, -1, 3, 0): ((2.0, -1, 2, 0), (1.5, 0.3, 0.0)),
    (2.0, +1, 3, 1): ((2.0, +1, 2, 1), (1.6, 0.4, 0.05)),
}


def _nat_seed(z, eps, n, k, config):
    key = (float(z), eps, n, k)
    if key in _NAT_SEEDS:
        return [tuple(t) for t in _NAT_SEEDS[key]]
    if key in _NAT_EXTEND:
        base_key, extra = _NAT_EXTEND[key]
        base = _optimize_nat_terms(list(_nat_seed(*base_key, config)),
                                   z, eps, base_key[3], config)[1]
        return [tuple(t) for t in base] + [extra]
    # generic fallback: hydrogenic scale with a diffuse partner
    base = [(1.05 * z, 0.45 * z, 0.05 * z)]
    for i in range(1, n):
        f = 0.7 ** i
        base.append((1.05 * z * f, 0.45 * z * f, 0.02 * z * f))
    return base


def _optimize_nat_terms(seed_terms, z, eps, k, config):
    n = len(seed_terms)
    spec = hminus_spec(z=z, epsilon=eps)

    def obj(x):
        terms = [tuple(x[3 * i:3 * i + 3]) for i in range(n)]
        if not _valid3(terms):
            return _BIG
        try:
            e, _ = _nat_lowest(terms, spec, k=k)
        except Exception:
            return _BIG
        return e

    x, e, info = minimize_nm(obj, np.asarray(seed_terms, float).ravel(), config)
    terms = [tuple(x[3 * i:3 * i + 3]) for i in range(n)]
    return e, terms, info


# Curated multi-term vector-sector starts (infinite central mass, Z=1);
# found once by wide searches over guarded evaluations.  Both electrons sit
# in 2p-like orbitals (the vector prefactor supplies the angular momentum),
# so the ranges cluster around the one-electron 2p scale with a weak
# in-out radial split.
_UN_SEEDS = {
    (1.0, (0.0, 1.0, 1.0), 2): [(0.50, 0.22, -0.03), (0.19, 0.43, 0.08)],
    (1.0, (0.0, 1.0, 1.0), 3): [(0.566, 0.880, -0.063), (0.953, 0.176, -0.014),
                                (0.574, 0.805, 0.010)],
    (1.0, (0.0, 1.0, 1.0), 4): [(0.566, 0.880, -0.063), (0.953, 0.176, -0.014),
                                (0.574, 0.805, 0.010), (0.45, 0.45, -0.02)],
}


def _un_seed(spec, n):
    key = (float(spec.z_central), tuple(spec.inv_masses), n)
    if key in _UN_SEEDS:
        return [tuple(t) for t in _UN_SEEDS[key]]
    # generic: 2p-like ranges spread by a short progression; the simplex
    # then releases every range individually
    z = spec.z_central
    s = 2.0 * threshold_for(spec).mu * z
    sched = Schedule(0.5 * s, 0.2 * s, n)
    return [(a, b, -0.03 * s) for a, b, _ in sched.terms()]


def optimize_ion(spec: SystemSpec, n_terms: int, config: MinimizerConfig,
                 k: int = 0) -> VariationalResult:
    """Best variational energy of a three-body spec with an n-term basis.

    Single terms are shaped by the simplex directly.  Multi-term bases
    polish all 3n ranges from curated seeds (vector-sector seeds come from a
    short arithmetic progression when no curated set exists).  Vector-sector
    evaluations are guarded twice -- element cancellation in matel3 and the
    overlap condition cap here -- because the free simplex otherwise mines
    float noise near degenerate bases for fake binding at the 1e-5 level.
    """
    if spec.is_four_body:
        raise ValueError("optimize_ion needs a three-body spec")
    if not 1 <= n_terms <= 8:
        raise ValueError("n_terms must be in [1, 8]")
    z = spec.z_central
    thr = threshold_for(spec)
    e_thr = thr.e_relevant(spec.sector)

    if spec.sector == NATURAL:
        if tuple(spec.inv_masses) != (0.0, 1.0, 1.0):
            # finite or asymmetric masses: optimize shapes directly
            seeds = _nat_seed(z, spec.epsilon, n_terms, k, config)
            sp = spec

            def obj(x):
                terms = [tuple(x[3 * i:3 * i + 3]) for i in range(n_terms)]
                if not _valid3(terms):
                    return _BIG
                try:
                    return _nat_lowest(terms, sp, k=k)[0]
                except Exception:
                    return _BIG

            x, e, info = minimize_nm(obj, np.asarray(seeds, float).ravel(), config)
            terms = [tuple(x[3 * i:3 * i + 3]) for i in range(n_terms)]
        else:
            seeds = _nat_seed(z, spec.epsilon, n_terms, k, config)
            e, terms, info = _optimize_nat_terms(seeds, z, spec.epsilon, k, config)
        block = matel3.natural_matblock(terms, spec)
    else:
        def obj(x):
            terms = [tuple(x[3 * i:3 * i + 3]) for i in range(n_terms)]
            if not _valid3(terms, 1e-6):
                return _BIG
            try:
                return _un_lowest(terms, spec, k=k)[0]
            except Exception:
                return _BIG

        seeds = _un_seed(spec, n_terms)
        x, e, info = minimize_nm(obj, np.asarray(seeds, float).ravel(), config)
        terms = [tuple(x[3 * i:3 * i + 3]) for i in range(n_terms)]
        block = matel3.unnatural_matblock(terms, spec)

    e_chk, lam = scaled_lowest(block, k=k)
    w, c = None, None
    try:
        w, cvec = gen_eig(_scaled_block(block, lam))
        c = cvec[:, min(k, len(w) - 1)]
    except np.linalg.LinAlgError:
        c = np.zeros(len(terms))
    vr = _virial_ratio(block, c, lam) if c is not None and np.any(c) else float("nan")
    margin = (e_thr - e) / abs(e_thr)
    return VariationalResult(
        energy=e, params=[list(t) for t in terms],
        coeffs=list(c) if c is not None else [],
        virial_ratio=vr, threshold=thr, margin=margin,
        stable=bool(e < e_thr - STABILITY_TOL), sector=spec.sector,
        meta={"k": k, "n_terms": n_terms, "scale": lam, **info})


def _scaled_block(block, lam):
    return MatBlock(np.asarray(block.n_mat),
                    lam * lam * np.asarray(block.t_mat),
                    lam * np.asarray(block.v_mat))


def _virial_ratio(block, c, lam):
    t = float(c @ (np.asarray(block.t_mat) @ c))
    v = float(c @ (np.asarray(block.v_mat) @ c))
    if t == 0:
        return float("nan")
    return -v / (2.0 * lam * t)


# ---------------------------------------------------------------------------
# dedicated two-parameter paths (closed-form matrix elements)


def chandrasekhar_energy(a, b, z, epsilon=+1):
    """Scale-optimized energy of the two-exponential pair at shape (a, b)."""
    n, t, v = matel3.chandrasekhar_ntv(a, b, z, epsilon)
    return virial_reduce(n, t, v)[0]


def optimize_chandrasekhar(z, config: MinimizerConfig, epsilon=+1, x0=None,
                           bounds=None):
    """Minimize the two-exponential energy over (a, b).

    `bounds` (amin, amax, bmin, bmax) switches on rejection-box constraints;
    needed close to the critical charge, where the unconstrained landscape
    develops a runaway valley a -> inf, b -> 0 that approaches the detachment
    threshold without crossing it.
    """
    if x0 is None:
        x0 = [1.04 * z, 0.28 * z]

    def obj(p):
        a, b = p
        if a <= 0.01 or b <= 0.005:
            return _BIG
        if bounds is not None:
            amin, amax, bmin, bmax = bounds
            if not (amin <= a <= amax and bmin <= b <= bmax):
                return _BIG
        try:
            return chandrasekhar_energy(a, b, z, epsilon)
        except ValueError:
            return _BIG

    x, e, info = minimize_nm(obj, x0, config)
    return e, tuple(x), info


def optimize_minmax(z, config: MinimizerConfig, x0=(1.1, 0.5)):
    """Minimize the piecewise min/max exponential over its two ranges."""
    def obj(p):
        a, b = p
        if a <= 0.01 or b <= 0.01:
            return _BIG
        try:
            return virial_reduce(*matel3.minmax_ntv(a, b, z))[0]
        except ValueError:
            return _BIG

    x, e, info = minimize_nm(obj, x0, config)
    return e, tuple(x), info


def optimize_shellmodel(z, config: MinimizerConfig, x0=None, restrict_equal=False):
    """Minimize the antisymmetrized (1s)(2s) energy over the orbital ranges."""
    if x0 is None:
        x0 = [z, z] if restrict_equal else [z, 0.6 * z]

    def obj(p):
        if restrict_equal:
            a = b = p[0]
        else:
            a, b = p
        if a <= 0.01 or b <= 0.01:
            return _BIG
        try:
            return virial_reduce(*matel3.shellmodel_ntv(a, b, z))[0]
        except ValueError:
            return _BIG

    x, e, info = minimize_nm(obj, [x0[0]] if restrict_equal else x0, config)
    params = (float(x[0]), float(x[0])) if restrict_equal else tuple(x)
    return e, params, info


# ---------------------------------------------------------------------------
# scans


def scan_frozen(z, b_grid=None):
    """Energy along b with the first range frozen at the central charge.

    This is the plain Rayleigh quotient (no scale optimization): rescaling
    would move the frozen range and collapse the scan onto the full
    two-parameter minimum.
    """
    if z <= 0:
        raise ValueError("z must be positive")
    if b_grid is None:
        b_grid = np.linspace(0.02, 1.2, 119)

    def e_of(b):
        n, t, v = matel3.chandrasekhar_ntv(z, b, z, +1)
        return (t + v) / n

    rows = [(float(b), float(e_of(b))) for b in b_grid]
    i0 = int(np.argmin([e for _, e in rows]))
    lo = b_grid[max(0, i0 - 1)]
    hi = b_grid[min(len(b_grid) - 1, i0 + 1)]
    r = minimize_scalar(e_of, bounds=(lo, hi), method="bounded",
                        options=dict(xatol=1e-10))
    return rows, (float(r.x), float(r.fun))


def scan_contour(z, a_range=(0.2, 2.0), b_range=(0.05, 1.2), grid=(61, 61),
                 epsilon=+1):
    """Matrix of scale-optimized energies over an (a, b) grid."""
    if min(a_range) <= 0 or min(b_range) <= 0:
        raise ValueError("ranges must be positive")
    a_vals = np.linspace(a_range[0], a_range[1], grid[0])
    b_vals = np.linspace(b_range[0], b_range[1], grid[1])
    E = np.empty((len(a_vals), len(b_vals)))
    for i, a in enumerate(a_vals):
        for j, b in enumerate(b_vals):
            E[i, j] = chandrasekhar_energy(a, b, z, epsilon)
    return a_vals, b_vals, E


def scan_charge(basis, config: MinimizerConfig, z_lo=0.85, z_hi=1.3,
                tol=5e-4):
    """Critical central charge of a basis family by bisection on the margin.

    The two-exponential family needs the bounded search box (see
    optimize_chandrasekhar); the product families have closed-form margins.
    """
    if basis == "perturbative":
        f = lambda zz: matel3.perturbative_e(zz) - (-0.5 * zz * zz)
    elif basis == "effective":
        f = lambda zz: matel3.energy_effective_charge(zz)[0] - (-0.5 * zz * zz)
    elif basis == "chandrasekhar":
        warm = {"x": [1.04, 0.28]}

        def f(zz):
            box = (0.2 * zz, 3.0 * zz, 0.02 * zz, 1.0 * zz)
            # the previous z may have ended on its own box edge; clamp the
            # warm start strictly inside the current box or the simplex
            # starts infeasible and never recovers
            x0 = [min(max(warm["x"][0], 1.1 * box[0]), 0.9 * box[1]),
                  min(max(warm["x"][1], 1.1 * box[2]), 0.9 * box[3])]
            e, x, _ = optimize_chandrasekhar(zz, config, x0=x0, bounds=box)
            warm["x"] = list(x)
            return e - (-0.5 * zz * zz)
    else:
        raise ValueError(f"unknown basis {basis!r}")

    lo, hi = z_lo, z_hi
    flo, fhi = f(lo), f(hi)
    if not (flo > 0 > fhi):
        raise NonConvergenceError("charge bracket does not straddle the margin")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan_mass3(mass_ratios, config: MinimizerConfig, z=1.0):
    """Finite central mass along the two-exponential optimum.

    Returns one record per ratio with the optimized energy, the threshold,
    the relative margin, and the measured recoil cross-term expectation
    (which must vanish to round-off for these angle-independent bases).
    """
    out = []
    for ratio in mass_ratios:
        im0 = 0.0 if math.isinf(ratio) else 1.0 / ratio
        spec = SystemSpec(inv_masses=(im0, 1.0, 1.0), z_central=z)
        mu = 1.0 / (1.0 + im0)

        def obj(p):
            a, b = p
            if a <= 0.01 or b <= 0.005:
                return _BIG
            try:
                return _nat_lowest([(a, b, 0.0)], spec)[0]
            except Exception:
                return _BIG

        x, e, info = minimize_nm(obj, [1.04 * z * mu, 0.28 * z * mu], config)
        terms = [(x[0], x[1], 0.0)]
        block = matel3.natural_matblock(terms, spec)
        _, lam = scaled_lowest(block)
        he = matel3.hughes_eckart_matrix(terms, spec)[0, 0] / block.n_mat[0, 0]
        thr = threshold_for(spec)
        out.append({"ratio": ratio, "energy": e, "mu": mu,
                    "threshold": thr.e_ground,
                    "margin": (thr.e_ground - e) / abs(thr.e_ground),
                    "he_expectation": float(he * im0),
                    "params": [float(x[0]), float(x[1])]})
    return out


def scan_asym3(ratios, config: MinimizerConfig, z=1.0):
    """Unequal negative masses at fixed average inverse mass, infinite center.

    The basis is the two-exponential pair *without* exchange symmetrization
    (the particles are distinguishable): both orderings enter as independent
    basis vectors and the eigensolver picks the mixing.
    """
    out = []
    warm = [1.04, 0.28]
    for r in ratios:
        im1, im2 = 2.0 * r / (1.0 + r), 2.0 / (1.0 + r)
        spec = SystemSpec(inv_masses=(0.0, im1, im2), z_central=z)

        def obj(p):
            a, b = p
            if a <= 0.01 or b <= 0.005:
                return _BIG
            try:
                blk = matel3.natural_matblock(
                    [(a, b, 0.0), (b, a, 0.0)], spec, symmetrize=False)
                return scaled_lowest(blk)[0]
            except Exception:
                return _BIG

        x, e, info = minimize_nm(obj, warm, config)
        warm = list(x)
        thr = threshold_for(spec)
        out.append({"ratio": r, "energy": e, "threshold": thr.e_ground,
                    "margin": (thr.e_ground - e) / abs(thr.e_ground),
                    "stable": bool(e < thr.e_ground - STABILITY_TOL),
                    "params": [float(x[0]), float(x[1])]})
    return out


# ---------------------------------------------------------------------------
# four-body


def ps2_energy(beta):
    """Scale-optimized energy of the symmetric four-body pair at shape beta."""
    n, t, v = matel4.ho_ntv(beta)
    return virial_reduce(n, t, -v)[0]


def optimize_ps2():
    """Minimum of the one-parameter symmetric four-body family."""
    r = minimize_scalar(ps2_energy, bounds=(1e-4, 0.95), method="bounded",
                        options=dict(xatol=1e-10))
    return float(r.fun), float(r.x)


def _four_lowest(groups, spec, floor=1e-11):
    blk = matel4.assemble4(groups, spec)
    return scaled_lowest(blk, floor=floor, bounds=(0.02, 50.0))[0]


def _four_spec(mode, ratio):
    iM = 2.0 / (1.0 + ratio)
    im = 2.0 * ratio / (1.0 + ratio)
    if mode == "cc-break":
        inv = (iM, iM, im, im)       # heavy positives, light negatives
    elif mode == "identity-break":
        inv = (iM, im, iM, im)       # heavy/light pair of each sign
    else:
        raise ValueError(f"unknown breaking mode {mode!r}")
    return SystemSpec(inv_masses=inv, z_central=None,
                      charges=(1.0, 1.0, -1.0, -1.0))


def scan_mass4(ratios, mode, config: MinimizerConfig):
    """Four-body stability along a mass-breaking direction.

    Ratios are taken at fixed average inverse mass so the charge-conjugation
    branch keeps a constant threshold.  Warm starts carry the optimized
    ranges from one ratio to the next.
    """
    out = []
    warm = [0.85, 0.15, 0.15, 0.85] if mode == "cc-break" else [0.85, 0.15]
    for ratio in ratios:
        spec = _four_spec(mode, ratio)
        thr = threshold_for(spec)
        if mode == "cc-break":
            def obj(p):
                s = (p[0] + p[1], p[0] + p[2], p[1] + p[3], p[2] + p[3],
                     p[0] + p[3], p[1] + p[2])
                if min(s) <= 1e-3:
                    return _BIG
                try:
                    g = matel4.symmetrized_group(tuple(p))
                    return _four_lowest([g], spec)
                except Exception:
                    return _BIG
        else:
            def obj(p):
                a, b = p
                if a + b <= 1e-3 or a <= 0 or b <= 0:
                    return _BIG
                try:
                    groups = [[(1.0, (a, b, b, a))], [(1.0, (b, a, a, b))]]
                    return _four_lowest(groups, spec)
                except Exception:
                    return _BIG

        x, e, info = minimize_nm(obj, warm, config)
        warm = list(x)
        out.append({"ratio": ratio, "mode": mode, "energy": e,
                    "threshold": thr.e_ground,
                    "margin": (thr.e_ground - e) / abs(thr.e_ground),
                    "stable": bool(e < thr.e_ground - STABILITY_TOL),
                    "params": [float(v) for v in x]})
    return out


def molecule_result(mode, ratio, config: MinimizerConfig) -> VariationalResult:
    """One four-body solve packaged as a VariationalResult."""
    if mode == "ps2":
        e, beta = optimize_ps2()
        spec = SystemSpec(inv_masses=(1.0, 1.0, 1.0, 1.0), z_central=None,
                          charges=(1.0, 1.0, -1.0, -1.0))
        thr = threshold_for(spec)
        n, t, v = matel4.ho_ntv(beta)
        _, lam = virial_reduce(n, t, -v)
        return VariationalResult(
            energy=e, params=[beta], coeffs=[1.0], virial_ratio=1.0,
            threshold=thr, margin=(thr.e_ground - e) / abs(thr.e_ground),
            stable=bool(e < thr.e_ground - STABILITY_TOL),
            meta={"mode": mode, "scale": lam})
    rec = scan_mass4([ratio], mode, config)[0]
    thr = threshold_for(_four_spec(mode, ratio))
    return VariationalResult(
        energy=rec["energy"], params=rec["params"], coeffs=[],
        virial_ratio=1.0, threshold=thr, margin=rec["margin"],
        stable=rec["stable"], meta={"mode": mode, "ratio": ratio})
