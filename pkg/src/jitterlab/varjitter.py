"""Cross-correlated VAR(1) clock-jitter process: construction, validation,
second-order statistics, spectral density, and seeded simulation.

The hidden process is xi_n = V xi_{n-1} + eps_n with eps_n ~ N(0, sigma_eps)
independent in time; stability requires the spectral radius of V below one.
Jitter values are in seconds, covariances in seconds^2.
"""

import json
from dataclasses import dataclass

import numpy as np

from . import matcore
from .errors import SingularCovariance, UnstableModel


def _frozen(a, dtype=float):
    out = np.array(a, dtype=dtype)
    out.setflags(write=False)
    return out


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class VarModel:
    """Stationary VAR(1) jitter law: transition V and innovation covariance
    sigma_eps (seconds^2). Immutable after validation; safe to share across
    threads and worker processes."""

    V: np.ndarray
    sigma_eps: np.ndarray

    def __post_init__(self):
        v = _frozen(self.V)
        s = _frozen(self.sigma_eps)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"V must be square, got shape {v.shape}")
        if s.shape != v.shape:
            raise ValueError(f"sigma_eps shape {s.shape} does not match V {v.shape}")
        rho = matcore.spectral_radius(v)
        if rho >= 1.0:
            raise UnstableModel(f"spectral radius {rho:.12g} >= 1")
        matcore.psd_factor(s)  # raises IndefiniteMatrix if not PSD
        object.__setattr__(self, "V", v)
        object.__setattr__(self, "sigma_eps", s)

    @property
    def m(self):
        return self.V.shape[0]


@dataclass(frozen=True)
class JitterTrace:
    """One realization of the jitter process: xi is (N, M) in seconds."""

    xi: np.ndarray
    seed: object
    model: VarModel

    def __post_init__(self):
        object.__setattr__(self, "xi", _frozen(self.xi))

    @property
    def n(self):
        return self.xi.shape[0]


def steady_state_cov(model):
    """Stationary covariance of the process, solving X = V X V^T + sigma_eps."""
    return matcore.solve_lyapunov(model.V, model.sigma_eps)


def lag1_cov(model):
    """Stationary lag-1 cross-covariance E[xi_n xi_{n-1}^T] = V @ steady cov."""
    return model.V @ steady_state_cov(model)


def yule_walker_recover(xi0, xi1):
    """Recover the VAR(1) model from its lag-0 and lag-1 covariances.

    Parameters
    ----------
    xi0 : (M, M) array
        Stationary covariance, strictly positive definite.
    xi1 : (M, M) array
        Lag-1 cross-covariance.

    Returns
    -------
    VarModel
        With V = xi1 xi0^{-1} and sigma_eps = xi0 - xi1 xi0^{-1} xi1^T.

    Raises
    ------
    SingularCovariance
        If xi0 fails the strict positive-definiteness check.
    UnstableModel
        If the recovered transition has spectral radius >= 1.
    """
    xi0 = matcore.require_symmetric(xi0, "xi0")
    xi1 = np.asarray(xi1, dtype=float)
    if xi1.shape != xi0.shape:
        raise ValueError(f"xi1 shape {xi1.shape} does not match xi0 {xi0.shape}")
    try:
        matcore.cholesky(xi0)
    except matcore.IndefiniteMatrix as exc:
        raise SingularCovariance("xi0 is not strictly positive definite") from exc
    # xi0 symmetric, so V = xi1 xi0^{-1} = solve(xi0, xi1^T)^T
    v = np.linalg.solve(xi0, xi1.T).T
    sigma = matcore.symmetrize(xi0 - v @ xi1.T)
    return VarModel(V=v, sigma_eps=sigma)


def spectral_density(model, omega):
    """Spectral density matrix of the process at angular frequency omega
    (rad/sample).

    Returns the Hermitian PSD matrix
    S(w) = (1/2pi) (I - V e^{-iw})^{-1} sigma_eps (I - V^T e^{iw})^{-1};
    integrating over [-pi, pi] recovers the stationary covariance. Accepts a
    scalar omega (returns (M, M)) or an array (returns (..., M, M)).
    """
    w = np.asarray(omega, dtype=float)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)
    m = model.m
    eye = np.eye(m)
    a = eye[None, :, :] - model.V[None, :, :] * np.exp(-1j * w)[:, None, None]
    ainv = np.linalg.inv(a)
    s = ainv @ model.sigma_eps @ np.conj(np.swapaxes(ainv, -1, -2))
    # hermitize and apply the 1/(2 pi) normalization in one step
    s = (s + np.conj(np.swapaxes(s, -1, -2))) / (4.0 * np.pi)
    if scalar:
        return s[0]
    return s


def simulate(model, n, seed):
    """Simulate ``n`` samples of the jitter process, deterministic in ``seed``.

    The initial state is drawn from the stationary law N(0, steady cov) so the
    trace is stationary from the first sample.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _rng(seed)
    m = model.m
    root0 = matcore.psd_factor(steady_state_cov(model))
    root_eps = matcore.psd_factor(model.sigma_eps)
    xi = np.empty((n, m))
    x = root0 @ rng.standard_normal(m)
    xi[0] = x
    if n > 1:
        eps = rng.standard_normal((n - 1, m)) @ root_eps.T
        v = model.V
        for k in range(1, n):
            x = v @ x + eps[k - 1]
            xi[k] = x
    return JitterTrace(xi=xi, seed=seed, model=model)


def random_orthogonal(m, seed):
    """Seeded Haar-distributed real orthogonal matrix (QR of a Gaussian matrix
    with the R diagonal sign-fixed)."""
    rng = _rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((m, m)))
    d = np.sign(np.diag(r))
    d[d == 0] = 1.0
    return q * d


def build_correlated_model(xi0, a, seed):
    """Construct a VAR(1) model with exactly the prescribed stationary
    covariance.

    With L the Cholesky factor of xi0, U a seeded random orthogonal matrix and
    A = diag(a): V = L U A U^T L^{-1} and sigma_eps = L (I - U A^2 U^T) L^T.
    Conjugacy makes the steady-state covariance of the result equal xi0, while
    the a-values set the per-mode temporal correlation.

    Parameters
    ----------
    xi0 : (M, M) array
        Target stationary covariance, strictly positive definite.
    a : float or (M,) array
        Mode persistences, each with |a_j| < 1.
    seed : int, SeedSequence or Generator

    Raises
    ------
    SingularCovariance
        If xi0 is not strictly positive definite.
    UnstableModel
        If any |a_j| >= 1.
    """
    xi0 = matcore.require_symmetric(xi0, "xi0")
    m = xi0.shape[0]
    a = np.broadcast_to(np.asarray(a, dtype=float), (m,)).copy()
    if np.any(np.abs(a) >= 1.0):
        raise UnstableModel("all persistences must satisfy |a_j| < 1")
    try:
        low = matcore.cholesky(xi0)
    except matcore.IndefiniteMatrix as exc:
        raise SingularCovariance("xi0 is not strictly positive definite") from exc
    u = random_orthogonal(m, seed)
    w = low @ u  # w^{-1} = u^T L^{-1}, so V = w diag(a) w^{-1}
    v = np.linalg.solve(w.T, (w * a).T).T
    root = w * np.sqrt(1.0 - a**2)
    sigma = root @ root.T
    return VarModel(V=v, sigma_eps=sigma)


def uniform_correlation_cov(stds, corr):
    """Covariance with prescribed per-channel standard deviations and one
    common off-diagonal correlation coefficient."""
    stds = np.asarray(stds, dtype=float)
    m = stds.size
    if m > 1 and not (-1.0 / (m - 1) < corr < 1.0):
        raise ValueError(f"correlation {corr} is not positive definite for M={m}")
    c = np.full((m, m), corr)
    np.fill_diagonal(c, 1.0)
    return c * np.outer(stds, stds)


def model_to_json(model):
    """Serialize a model to its JSON wire form {"V": ..., "sigma_eps": ...}."""
    return json.dumps(
        {"V": model.V.tolist(), "sigma_eps": model.sigma_eps.tolist()}
    )


def model_from_json(text):
    data = json.loads(text)
    return VarModel(V=np.array(data["V"], dtype=float),
                    sigma_eps=np.array(data["sigma_eps"], dtype=float))
