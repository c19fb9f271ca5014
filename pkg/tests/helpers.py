"""Shared random constructors for the test suite."""

from __future__ import annotations

import numpy as np

from kraustree.channels import KrausChannel, channel


def random_complex(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_unitary(rng, d):
    q, r = np.linalg.qr(random_complex(rng, d, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, d):
    a = random_complex(rng, d, d)
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_pure_state(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_channel(rng, d, rank, label="random") -> KrausChannel:
    """Random rank-`rank` channel from a Haar-ish (rank·d)×d isometry."""
    q, _ = np.linalg.qr(random_complex(rng, rank * d, d))
    ops = [q[j * d : (j + 1) * d, :] for j in range(rank)]
    return channel(ops, label=label)
