"""Spiked population models and samplers.

The default construction is a single-component spiked covariance in
dimension d with sample size n:

* eigenvalues ``(d**alpha, 1, ..., 1)``;
* leading eigenvector u1 with ``m = floor(d**beta)`` non-zero entries, all
  equal to ``m**-0.5`` and occupying the first m coordinates;
* eigenvectors 2..m proportional to ``(1, ..., 1, -(k), 0, ..., 0)`` (k ones
  followed by -k), i.e. a Helmert-style completion of the head block;
* eigenvectors beyond m equal to coordinate vectors e_i.

Eigenvectors are materialized lazily from this pattern; no dense d x d
basis is ever stored.  Sampling accumulates the identity tail directly as
i.i.d. Gaussian noise, so the cost is O(n*d) plus O(n*m**2) for the head
block.

Randomness: all samplers take an integer seed or a ``numpy.random
.SeedSequence`` and drive a counter-based Philox generator through numpy's
``Generator`` (normals via numpy's ziggurat transform).  For a fixed numpy
version, identical seeds give bit-identical samples on any platform and
under any scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .exceptions import DegenerateInputError, DimensionError, DomainError

SeedLike = "int | np.random.SeedSequence"


def _make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        ss = seed
    else:
        ss = np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.Philox(ss))


def _seed_repr(seed) -> str:
    if isinstance(seed, np.random.SeedSequence):
        return f"{seed.entropy}:{tuple(seed.spawn_key)}"
    return str(int(seed))


@dataclass(frozen=True)
class Provenance:
    """Where a data matrix came from: model id, seed, replication index."""

    model: str
    seed: str
    replication: int | None = None


@dataclass(frozen=True)
class DataMatrix:
    """A d x n column-sample matrix plus generation provenance."""

    x: np.ndarray
    provenance: Provenance

    def __post_init__(self):
        if self.x.ndim != 2:
            raise DimensionError(f"data matrix must be 2-d, got shape {self.x.shape}")
        if not np.isfinite(self.x).all():
            raise DomainError("data matrix contains non-finite entries")

    @property
    def d(self) -> int:
        return self.x.shape[0]

    @property
    def n(self) -> int:
        return self.x.shape[1]


def as_matrix(x) -> np.ndarray:
    """Accept a DataMatrix or a plain array and return the ndarray view."""
    if isinstance(x, DataMatrix):
        return x.x
    return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class SpikedSpec:
    """Parameters of the spiked model.

    Attributes
    ----------
    d, n : int
        Ambient dimension and sample size.
    alpha : float
        Spike index; the leading eigenvalue is ``d**alpha``.
    beta : float
        Sparsity index; the leading eigenvector has ``floor(d**beta)``
        non-zero entries.
    theta : float
        Second-eigenvalue index (metadata for the threshold-range bounds;
        the default construction always uses unit tail eigenvalues).
    eta : float
        Minimum-loading index.  Derived as ``beta`` for this construction,
        since every non-zero loading equals ``m**-0.5 ~ d**(-beta/2)``.
    """

    d: int
    n: int
    alpha: float
    beta: float
    theta: float = 0.0
    eta: float | None = None

    def __post_init__(self):
        if self.d < 1:
            raise DomainError(f"d must be >= 1, got {self.d}")
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if not 0.0 <= self.alpha <= 1.5:
            raise DomainError(f"alpha must lie in [0, 1.5], got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise DomainError(f"beta must lie in [0, 1], got {self.beta}")
        if self.theta < 0.0:
            raise DomainError(f"theta must be >= 0, got {self.theta}")
        if self.eta is None:
            object.__setattr__(self, "eta", self.beta)
        m = self.support_size
        if not 1 <= m <= self.d:
            raise DomainError(f"support size {m} outside [1, {self.d}]")

    @property
    def support_size(self) -> int:
        """Number of non-zero entries of u1, floor(d**beta)."""
        return int(math.floor(self.d ** self.beta))

    @property
    def lambda1(self) -> float:
        return self.d ** self.alpha


@dataclass(frozen=True)
class EigenSystem:
    """Population eigensystem, materialized lazily from its pattern."""

    spec: SpikedSpec
    basis_description: str = field(default="", init=False)

    def __post_init__(self):
        m = self.spec.support_size
        object.__setattr__(
            self,
            "basis_description",
            f"helmert-head(m={m}) + identity-tail(d={self.spec.d})",
        )

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        lam = np.ones(self.spec.d)
        lam[0] = self.spec.lambda1
        return lam

    @property
    def u1_support(self) -> np.ndarray:
        return np.arange(self.spec.support_size)

    def eigenvector(self, i: int) -> np.ndarray:
        """Materialize the i-th population eigenvector (0-based)."""
        d = self.spec.d
        m = self.spec.support_size
        if not 0 <= i < d:
            raise DomainError(f"eigenvector index {i} outside [0, {d})")
        u = np.zeros(d)
        if i == 0:
            u[:m] = m ** -0.5
        elif i < m:
            c = 1.0 / math.sqrt(i * (i + 1.0))
            u[:i] = c
            u[i] = -i * c
        else:
            u[i] = 1.0
        return u

    @property
    def u1(self) -> np.ndarray:
        return self.eigenvector(0)

    def _helmert_head(self) -> np.ndarray:
        """Columns 2..m of the basis restricted to the head block."""
        m = self.spec.support_size
        h = np.zeros((m, m - 1))
        for k in range(1, m):
            c = 1.0 / math.sqrt(k * (k + 1.0))
            h[:k, k - 1] = c
            h[k, k - 1] = -k * c
        return h


def build_eigensystem(spec: SpikedSpec) -> EigenSystem:
    """Construct the population eigensystem for a spiked spec."""
    return EigenSystem(spec)


def sample_gaussian(system: EigenSystem, seed, replication: int | None = None) -> DataMatrix:
    """Draw X = d**(alpha/2) u1 z1^T + sum_{i>=2} u_i z_i^T.

    The z_i are i.i.d. standard normal n-vectors.  Draw order is fixed:
    z1 first, then the (m-1) x n head-completion block, then the
    (d-m) x n identity tail.  The tail contribution is accumulated as
    direct Gaussian noise (u_i = e_i there), keeping the cost O(n*d).
    """
    spec = system.spec
    d, n, m = spec.d, spec.n, spec.support_size
    rng = _make_rng(seed)

    z1 = rng.standard_normal(n)
    x = np.empty((d, n))
    head = (spec.lambda1 ** 0.5) * np.outer(system.u1[:m], z1)
    if m > 1:
        z_head = rng.standard_normal((m - 1, n))
        head = head + system._helmert_head() @ z_head
    x[:m] = head
    if m < d:
        x[m:] = rng.standard_normal((d - m, n))

    prov = Provenance(
        model=f"spiked(d={d},n={n},alpha={spec.alpha},beta={spec.beta})",
        seed=_seed_repr(seed),
        replication=replication,
    )
    return DataMatrix(x=x, provenance=prov)


def sample_gaussian_general(
    u1: np.ndarray,
    eigenvalues: np.ndarray,
    n: int,
    seed,
    replication: int | None = None,
) -> DataMatrix:
    """Extension hook: spiked sampler for a caller-supplied u1 and spectrum.

    The basis is completed implicitly by the Householder reflection mapping
    e1 to u1, so the population covariance has eigenvalues ``eigenvalues``
    and leading eigenvector ``u1``; the remaining eigenvectors are the
    reflected coordinate vectors.
    """
    u1 = np.asarray(u1, dtype=float)
    lam = np.asarray(eigenvalues, dtype=float)
    d = u1.shape[0]
    if u1.ndim != 1:
        raise DimensionError("u1 must be a vector")
    if lam.shape != (d,):
        raise DimensionError("eigenvalues must have the same length as u1")
    if abs(np.linalg.norm(u1) - 1.0) > 1e-10:
        raise DomainError("u1 must be unit-norm")
    if np.any(lam < 0) or np.any(np.diff(lam) > 0):
        raise DomainError("eigenvalues must be non-negative and descending")
    if n < 1:
        raise DomainError("n must be >= 1")

    rng = _make_rng(seed)
    z = rng.standard_normal((d, n))
    scaled = np.sqrt(lam)[:, None] * z
    w = u1.copy()
    w[0] -= 1.0  # Householder vector mapping e1 -> u1
    ww = float(w @ w)
    if ww > 0.0:
        x = scaled - np.outer(w, (2.0 / ww) * (w @ scaled))
    else:
        x = scaled
    prov = Provenance(
        model=f"general-spike(d={d},n={n})", seed=_seed_repr(seed), replication=replication
    )
    return DataMatrix(x=x, provenance=prov)


def sample_counterexample(d: int, alpha: float, n: int, seed, replication: int | None = None) -> DataMatrix:
    """Discrete heavy-coordinate sampler that defeats thresholding.

    Coordinates are independent: the first is +-d**(alpha/2) with equal
    probability, and each of the others is +-d**((alpha+1)/4) with
    probability d**(-(alpha+1)/2) each, else 0.

    Note: the tail coordinates have second moment exactly 2 (direct
    evaluation of the two-point mass), not 1.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    p = d ** (-(alpha + 1.0) / 2.0)
    if 2.0 * p > 1.0:
        raise DomainError(f"tail probabilities 2*d**-((alpha+1)/2) = {2 * p:.4f} exceed 1")

    rng = _make_rng(seed)
    u = rng.random((d, n))
    x = np.zeros((d, n))
    spike = d ** (alpha / 2.0)
    x[0] = np.where(u[0] < 0.5, spike, -spike)
    mag = d ** ((alpha + 1.0) / 4.0)
    x[1:] = np.where(u[1:] < p, mag, np.where(u[1:] < 2.0 * p, -mag, 0.0))
    prov = Provenance(
        model=f"counterexample(d={d},n={n},alpha={alpha})",
        seed=_seed_repr(seed),
        replication=replication,
    )
    return DataMatrix(x=x, provenance=prov)


def failure_probability(d: int, alpha: float) -> float:
    """Probability that the spike coordinate dominates, (1 - 2 d**-((a+1)/2))**(d-1).

    This is the chance that every tail coordinate of one draw from the
    counterexample model is zero, which is the only way the first
    coordinate can carry the largest |entry|.  It decays to 0 as d grows.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if d < 2:
        raise DomainError(f"d must be >= 2, got {d}")
    return float((1.0 - 2.0 * d ** (-(alpha + 1.0) / 2.0)) ** (d - 1))


class Sphericity(NamedTuple):
    """Sphericity epsilon and the statistic (d*epsilon)**-1."""

    epsilon: float
    inv_d_epsilon: float


def sphericity(eigenvalues) -> Sphericity:
    """Measure of sphericity (sum lam)^2 / (d * sum lam^2) of a spectrum.

    Also returns (d*eps)**-1 = sum(lam^2)/ (sum lam)^2, the quantity whose
    vanishing makes the dual matrix concentrate.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.ndim != 1 or lam.size == 0:
        raise DimensionError("eigenvalues must be a non-empty vector")
    if np.any(lam < 0):
        raise DomainError("eigenvalues must be non-negative")
    s1 = float(lam.sum())
    s2 = float(np.square(lam).sum())
    if s2 == 0.0:
        raise DegenerateInputError("all eigenvalues are zero")
    return Sphericity(epsilon=s1 * s1 / (lam.size * s2), inv_d_epsilon=s2 / (s1 * s1))
