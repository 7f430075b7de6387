"""Large-t eigenvalue asymptotics of matrix flows M e^{tD} and M + tD.

For the exponential flow with strictly graded D and nonzero leading principal
minors of M, eigenvalues behave like m_j e^{t d_j} (1 + rho_j(t)) with
rho_j(t) = p_j e^{t(d_{j+1}-d_j)} - p_{j-1} e^{t(d_j-d_{j-1})} + higher order;
for the linear flow they behave like M_jj + t d_j + alpha_j / t + O(1/t^2).
This module computes the coefficient families and verifies the decay orders
empirically on time grids.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .linalg import general_eig, leading_principal_minors, minor

MINOR_MARGIN = 1e-10
ORDER_GAP_TOL = 1e-8
FIT_CLAMP = 1e-14
EXP_CAP = 600.0


class AsymptoticsError(ValueError):
    pass


@dataclass(frozen=True)
class FlowSpec:
    """A matrix flow: M paired with diagonal values d, of exponential or linear kind."""

    m: np.ndarray
    d: np.ndarray
    kind: str  # "exponential" | "linear"

    def __post_init__(self):
        m = np.asarray(self.m, dtype=complex)
        d = np.asarray(self.d, dtype=complex)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "d", d)
        if self.kind not in ("exponential", "linear"):
            raise AsymptoticsError(f"unknown kind {self.kind!r}")
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] != len(d):
            raise AsymptoticsError("M must be square and match the diagonal length")
        if np.any(np.diff(d.real) >= 0):
            raise AsymptoticsError("Re(d) must be strictly descending")
        if self.kind == "exponential":
            pi = leading_principal_minors(m)
            scale = max(np.abs(m).max(), 1.0)
            if np.abs(pi).min() <= MINOR_MARGIN * scale:
                raise AsymptoticsError("leading principal minor too close to zero")

    @property
    def size(self) -> int:
        return len(self.d)

    @property
    def mu(self) -> np.ndarray:
        """Consecutive gaps of the real parts of d."""
        return -np.diff(self.d.real)

    @property
    def gap(self) -> float:
        """R: the minimal gap."""
        return float(self.mu.min())


def m_coeffs(m) -> np.ndarray:
    """Leading-coefficient ratios: m_1 = M_11, m_j = pi_j / pi_{j-1}."""
    pi = leading_principal_minors(m)
    if np.abs(pi).min() == 0:
        raise AsymptoticsError("zero principal minor")
    return pi / np.concatenate([[1.0], pi[:-1]])


def p_coeffs(m) -> np.ndarray:
    """First-order remainder coefficients p_1 .. p_{N-1}:
    p_j = M(1..j-1, j+1) / M(1..j) - m_{j+1} / m_j (principal minors by index set)."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    pi = leading_principal_minors(m)
    if np.abs(pi).min() == 0:
        raise AsymptoticsError("zero principal minor")
    mj = m_coeffs(m)
    out = np.empty(n - 1, dtype=complex)
    for j in range(1, n):
        idx = list(range(j - 1)) + [j]
        out[j - 1] = minor(m, idx, idx) / pi[j - 1] - mj[j] / mj[j - 1]
    return out


def alpha_coeffs(m, d) -> np.ndarray:
    """Second-order perturbation sums alpha_j = sum_{k != j} M_jk M_kj / (d_j - d_k)."""
    m = np.asarray(m, dtype=complex)
    d = np.asarray(d, dtype=complex)
    n = len(d)
    diff = d[:, None] - d[None, :]
    if np.abs(diff[~np.eye(n, dtype=bool)]).min() < 1e-12:
        raise AsymptoticsError("repeated diagonal values")
    out = np.empty(n, dtype=complex)
    for j in range(n):
        out[j] = sum(m[j, k] * m[k, j] / diff[j, k] for k in range(n) if k != j)
    return out


def flow_eigenvalues(spec: FlowSpec, t: float) -> np.ndarray:
    """Eigenvalues of the flow matrix at time t, descending modulus.

    The exponential kind is centered by the mean of d before exponentiation
    (removing a scalar e^{t d_bar} factor) to stay in representable range.
    """
    t = float(t)
    if spec.kind == "exponential":
        d_bar = spec.d.mean()
        centered = spec.d - d_bar
        if abs(t) * (centered.real.max() - centered.real.min()) > EXP_CAP:
            raise AsymptoticsError("flow exponent exceeds overflow cap")
        w = general_eig(spec.m * np.exp(t * centered)[None, :]).eigenvalues
        mods = np.abs(w)
        if len(w) > 1:
            rel = -np.diff(mods) / mods[:-1]
            if rel.min() < ORDER_GAP_TOL:
                raise AsymptoticsError(
                    f"modulus ordering ambiguous (relative gap {rel.min():.2e}); t too small"
                )
        return w * np.exp(t * d_bar)
    return general_eig(spec.m + t * np.diag(spec.d)).eigenvalues


@dataclass(frozen=True)
class AsymptoticReport:
    kind: str
    t_grid: np.ndarray
    mu: np.ndarray
    gap: float
    m: np.ndarray
    p: np.ndarray | None
    alpha: np.ndarray | None
    remainder: np.ndarray  # shape (len(t), N): rho_j(t) or r_j(t)
    fitted_orders: np.ndarray  # per-j decay exponents
    verdicts: dict

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def to_json(self) -> str:
        def c(arr):
            a = np.asarray(arr, dtype=complex)
            return np.stack([a.real, a.imag], axis=-1).tolist()

        return json.dumps(
            {
                "kind": self.kind,
                "t_grid": list(self.t_grid),
                "mu": list(self.mu),
                "R": self.gap,
                "m": c(self.m),
                "p": c(self.p) if self.p is not None else None,
                "alpha": c(self.alpha) if self.alpha is not None else None,
                "remainder": c(self.remainder),
                "fitted_orders": [float(x) for x in self.fitted_orders],
                "verdicts": {k: bool(v) for k, v in self.verdicts.items()},
            }
        )


def _fit_order(
    t: np.ndarray, values: np.ndarray, log_t: bool = False, clamp: float = FIT_CLAMP
) -> float:
    """Slope of ln|values| against t (or ln t); nan when too few usable points."""
    usable = np.abs(values) > clamp
    if usable.sum() < 2:
        return float("nan")
    x = np.log(t[usable]) if log_t else t[usable]
    return float(np.polyfit(x, np.log(np.abs(values[usable])), 1)[0])


def verify_theorem_exponential(spec: FlowSpec, t_grid) -> AsymptoticReport:
    """Check the exponential-flow asymptotics on the grid: the relative
    remainders rho_j, their first-order model, and the post-subtraction
    second-order decay rate (expected about 2R, verified >= 1.8R)."""
    if spec.kind != "exponential":
        raise AsymptoticsError("spec is not of exponential kind")
    t_grid = np.asarray(t_grid, dtype=float)
    n = spec.size
    mj = m_coeffs(spec.m)
    pj = p_coeffs(spec.m)
    p_pad = np.concatenate([[0.0], pj, [0.0]])
    rho = np.empty((len(t_grid), n), dtype=complex)
    subtracted = np.empty_like(rho)
    for i, t in enumerate(t_grid):
        lam = flow_eigenvalues(spec, t)
        rho[i] = lam / (mj * np.exp(t * spec.d)) - 1.0
        eps = np.exp(t * np.diff(spec.d))  # eps_j = e^{t(d_{j+1} - d_j)}
        eps_pad = np.concatenate([eps, [0.0]])
        first_order = p_pad[1:] * eps_pad - p_pad[:-1] * np.concatenate([[0.0], eps])
        subtracted[i] = rho[i] - first_order
    # the second-order remainder reaches the eigensolver noise floor quickly;
    # clamp the decay fit above that floor so plateau points don't dilute it
    orders = np.array(
        [-_fit_order(t_grid, subtracted[:, j], clamp=1e-13) for j in range(n)]
    )
    usable = ~np.isnan(orders)
    # a component whose remainder sits entirely below the clamp decays faster
    # than we can measure; only measurable components constrain the verdict
    verdicts = {
        "post_subtraction_decay": bool(np.all(orders[usable] >= 1.8 * spec.gap)),
        "remainder_shrinks": bool(
            np.all(np.abs(rho[-1]) <= np.abs(rho[0]) + FIT_CLAMP)
        ),
    }
    return AsymptoticReport(
        kind="exponential", t_grid=t_grid, mu=spec.mu, gap=spec.gap,
        m=mj, p=pj, alpha=None, remainder=rho, fitted_orders=orders, verdicts=verdicts,
    )


def recover_p_two_point(spec: FlowSpec, t_pair=(8.0, 10.0)) -> np.ndarray:
    """Independent recovery of the p coefficients from two sampled remainders.

    For each j the model rho_j = p_j e^{-t mu_j} - p_{j-1} e^{-t mu_{j-1}} is a
    linear system in (p_j, p_{j-1}) over the two sample times.
    """
    t0, t1 = float(t_pair[0]), float(t_pair[1])
    n = spec.size
    mj = m_coeffs(spec.m)
    rho = {}
    for t in (t0, t1):
        lam = flow_eigenvalues(spec, t)
        rho[t] = lam / (mj * np.exp(t * spec.d)) - 1.0
    steps = np.diff(spec.d)  # d_{j+1} - d_j (negative real part)
    out = np.zeros(n - 1, dtype=complex)
    # j = 1 (0-based j=0): single-term model
    out[0] = rho[t1][0] / np.exp(t1 * steps[0])
    for j in range(1, n - 1):
        a = np.array(
            [
                [np.exp(t0 * steps[j]), -np.exp(t0 * steps[j - 1])],
                [np.exp(t1 * steps[j]), -np.exp(t1 * steps[j - 1])],
            ]
        )
        sol = np.linalg.solve(a, np.array([rho[t0][j], rho[t1][j]]))
        out[j] = sol[0]
    return out


def verify_theorem_linear(spec: FlowSpec, t_grid, include_alpha: bool = True) -> AsymptoticReport:
    """Check the linear-flow asymptotics: r_j(t) = lambda_j - M_jj - t d_j - alpha_j/t
    stays O(1/t^2) (t^2 |r_j| bounded over the grid); omitting the alpha term
    degrades the fitted order from about 2 to about 1."""
    if spec.kind != "linear":
        raise AsymptoticsError("spec is not of linear kind")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.min() <= 0:
        raise AsymptoticsError("linear-kind grids must be strictly positive")
    n = spec.size
    alpha = alpha_coeffs(spec.m, spec.d)
    diag = np.diag(spec.m)
    resid = np.empty((len(t_grid), n), dtype=complex)
    for i, t in enumerate(t_grid):
        lam = flow_eigenvalues(spec, t)
        pred = diag + t * spec.d + (alpha / t if include_alpha else 0.0)
        # nearest-prediction assignment
        dist = np.abs(lam[:, None] - pred[None, :])
        assign = np.argmin(dist, axis=0)
        if len(set(assign)) != n:
            raise AsymptoticsError(f"ambiguous eigenvalue matching at t={t}")
        resid[i] = lam[assign] - pred
    orders = np.array([-_fit_order(t_grid, resid[:, j], log_t=True) for j in range(n)])
    t2r = (t_grid[:, None] ** 2) * np.abs(resid)
    bound = t2r[0]
    verdicts = {
        "t2_bounded": bool(np.all(t2r <= 1.2 * np.maximum(bound, FIT_CLAMP) + 1e-12)),
    }
    return AsymptoticReport(
        kind="linear", t_grid=t_grid, mu=spec.mu, gap=spec.gap,
        m=diag, p=None, alpha=alpha, remainder=resid, fitted_orders=orders, verdicts=verdicts,
    )


def sample_spec(size: int, seed: int, kind: str = "exponential",
                min_gap: float = 1.5, gap_spread: float = 0.5,
                off_scale: float = 0.2) -> FlowSpec:
    """Deterministic well-conditioned flow spec.

    The diagonal gaps are drawn from evenly spread slots (pairwise distinct, so
    two-point coefficient recovery stays well-conditioned) and M = identity
    plus a scaled complex perturbation, resampled until every p coefficient is
    comfortably away from zero (relative recovery would otherwise divide by a
    near-cancellation).
    """
    for attempt in range(200):
        rng = np.random.default_rng(seed * 1009 + attempt)
        if size == 2:
            gaps = np.array([min_gap + gap_spread * rng.uniform()])
        else:
            slots = np.linspace(0.0, gap_spread, size - 1)
            jitter = 0.1 * gap_spread / (size - 2)
            gaps = min_gap + rng.permutation(slots) + jitter * rng.uniform(-1, 1, size - 1)
        d = np.concatenate([[0.0], -np.cumsum(gaps)])
        d = d - d.mean()
        m = np.eye(size) + off_scale * (
            rng.uniform(-1, 1, (size, size)) + 1j * rng.uniform(-1, 1, (size, size))
        )
        try:
            p = p_coeffs(m)
        except AsymptoticsError:
            continue
        if np.abs(p).min() >= 0.5 * off_scale ** 2:
            return FlowSpec(m=m, d=d.astype(complex), kind=kind)
    raise AsymptoticsError("could not realize a well-conditioned spec")
