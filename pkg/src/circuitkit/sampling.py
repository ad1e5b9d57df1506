"""Random-vector ensembles, Monte Carlo estimation of q(G;k), and exact predictions.

q(G;k) is the expectation over independent per-vertex random vectors of the
product over edges (u, v) of <x_u, x_v>, where the first argument is the
conjugated one. Estimates are plain Monte Carlo; predictions evaluate the
circuit partition polynomial with the per-vertex ensemble scalings.

Reproducibility contract: sampling is split into fixed-size chunks; chunk c
draws from a Philox generator keyed with the 128-bit value
(seed << 64) | c, and chunk results are reduced in chunk order. The chunk
layout depends only on n_samples, so a run is bit-identical for any worker
count, not just for a fixed one.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod, sqrt

import numpy as np

from .diagrams import Ensemble, ensure_ensemble_matches, xd_scaling
from .graphs import DirectedMultigraph, Multigraph, eulerian_check
from .partition import circuit_partition_polynomial

CHUNK_SIZE = 8192
_MASK64 = (1 << 64) - 1

# One length-k row per vertex; complex or real dtype per the ensemble.
VectorAssignment = np.ndarray


@dataclass(frozen=True)
class MCEstimate:
    """Monte Carlo estimate of q(G;k) with its reproduction recipe."""

    mean: complex
    std_error: float
    n_samples: int
    ensemble: Ensemble
    k: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "mean_re": self.mean.real,
            "mean_im": self.mean.imag,
            "std_error": self.std_error,
            "n": self.n_samples,
            "k": self.k,
            "ensemble": self.ensemble.value,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    key = ((seed & _MASK64) << 64) | (chunk_index & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


def draw_assignments(rng: np.random.Generator, count: int, vertex_count: int, k: int,
                     ensemble: Ensemble) -> np.ndarray:
    """(count, vertex_count, k) array of ensemble draws.

    Complex draws take one standard-normal block for all real parts, then one
    for all imaginary parts. Sphere ensembles normalize each vector; Gaussian
    ensembles scale componentwise to variance 1/k (split over the real and
    imaginary parts in the complex case), so E[|x|^2] = 1 throughout.
    """
    shape = (count, vertex_count, k)
    if ensemble.is_complex:
        x = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    else:
        x = rng.standard_normal(shape)
    if ensemble.is_gaussian:
        return x / sqrt(2 * k if ensemble.is_complex else k)
    norms = np.linalg.norm(x, axis=2, keepdims=True)
    return x / norms


def sample_vector(k: int, ensemble: Ensemble, rng: np.random.Generator) -> np.ndarray:
    """One length-k draw from the ensemble."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return draw_assignments(rng, 1, 1, k, ensemble)[0, 0]


def product_of_inner_products(g: Multigraph, vectors: VectorAssignment) -> complex:
    """prod over edges (u, v) of <x_u, x_v>, conjugating the tail vector x_u.

    Undirected edges use the plain symmetric inner product. The empty product
    (edgeless graph) is 1.
    """
    vectors = np.asarray(vectors)
    if vectors.ndim != 2 or vectors.shape[0] != g.vertex_count:
        raise ValueError(
            f"assignment shape {vectors.shape} does not provide one vector per {g.vertex_count} vertices"
        )
    conjugate_tail = isinstance(g, DirectedMultigraph)
    result = 1 + 0j
    for u, v in g.edges:
        tail = np.conj(vectors[u]) if conjugate_tail else vectors[u]
        result *= complex(np.dot(tail, vectors[v]))
    return result


def _batch_products(g: Multigraph, x: np.ndarray) -> np.ndarray:
    """Per-sample product of edge inner products for a (count, n, k) batch."""
    conjugate_tail = isinstance(g, DirectedMultigraph)
    values = np.ones(x.shape[0], dtype=x.dtype)
    for u, v in g.edges:
        tail = x[:, u, :].conj() if conjugate_tail else x[:, u, :]
        values = values * np.einsum("si,si->s", tail, x[:, v, :])
    return values


def estimate_q(g: Multigraph, k: int, ensemble: Ensemble, n_samples: int, seed: int,
               workers: int = 1) -> MCEstimate:
    """Monte Carlo mean of the edge product over n_samples assignments.

    Bit-reproducible for a fixed (seed, n_samples) regardless of workers; the
    standard error is the per-sample standard deviation of the complex values
    over sqrt(n_samples).
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    ensure_ensemble_matches(g, ensemble)

    n_chunks = (n_samples + CHUNK_SIZE - 1) // CHUNK_SIZE

    def run_chunk(c: int) -> tuple[complex, float]:
        size = min(CHUNK_SIZE, n_samples - c * CHUNK_SIZE)
        x = draw_assignments(_chunk_rng(seed, c), size, g.vertex_count, k, ensemble)
        values = _batch_products(g, x)
        return complex(np.sum(values)), float(np.sum(np.abs(values) ** 2))

    if workers > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunk_results = list(pool.map(run_chunk, range(n_chunks)))
    else:
        chunk_results = [run_chunk(c) for c in range(n_chunks)]

    total = 0j
    total_sq = 0.0
    for s, s2 in chunk_results:  # fixed reduction order, independent of workers
        total += s
        total_sq += s2
    mean = total / n_samples
    variance = max(total_sq - n_samples * abs(mean) ** 2, 0.0) / (n_samples - 1)
    return MCEstimate(mean, sqrt(variance / n_samples), n_samples, ensemble, k, seed)


def predicted_q(g: Multigraph, k: int, ensemble: Ensemble) -> Fraction:
    """Exact q(G;k): the circuit partition polynomial at z = k times the
    product of per-vertex scalings.

    A graph with unbalanced (directed) or odd (undirected) degrees has
    q(G;k) = 0 exactly: a uniform phase or sign flip at an unbalanced vertex
    preserves its ensemble but scales the product. That zero is returned
    directly instead of running the formula.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    ensure_ensemble_matches(g, ensemble)
    if not eulerian_check(g).is_eulerian:
        return Fraction(0)
    j = circuit_partition_polynomial(g)
    if isinstance(g, DirectedMultigraph):
        scaling = prod((xd_scaling(d, k, ensemble) for d in g.in_degrees()), start=Fraction(1))
    else:
        scaling = prod((xd_scaling(d // 2, k, ensemble) for d in g.degrees()), start=Fraction(1))
    return scaling * j.evaluate(k)


def norm_moment(d: int, k: int, ensemble: Ensemble) -> Fraction:
    """Exact E[|x|^(2d)] under the ensemble.

    Sphere vectors have unit norm, so 1. The real Gaussian moment equals the
    matching-diagram generating function over k^d (the Wick pairing sum with
    every covariance 1/k), which collapses to prod_{i<d} (k + 2i) / k^d.
    """
    if d < 0 or k < 1:
        raise ValueError("require d >= 0 and k >= 1")
    if not ensemble.is_gaussian:
        return Fraction(1)
    if ensemble is Ensemble.COMPLEX_GAUSSIAN:
        return Fraction(factorial(d + k - 1), k**d * factorial(k - 1))
    return Fraction(prod(k + 2 * i for i in range(d)), k**d)


def wick_pairing_sum(covariance, indices) -> Fraction:
    """Sum over pairings of products of covariances: E[x_{i1} ... x_{i2t}]
    for centered jointly Gaussian coordinates.

    covariance(a, b) must return the exact E[x_a x_b].
    """
    items = tuple(indices)
    if len(items) % 2 != 0:
        return Fraction(0)
    if not items:
        return Fraction(1)
    total = Fraction(0)
    a, rest = items[0], items[1:]
    for idx, b in enumerate(rest):
        remaining = rest[:idx] + rest[idx + 1:]
        total += covariance(a, b) * wick_pairing_sum(covariance, remaining)
    return total
