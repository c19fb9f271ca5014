"""Arbitrary-rank quantum operations via binary trees of rank-2 Kraus pairs.

Synthesis of adaptive measurement trees, ancilla dilation, stochastic
trajectory simulation under realistic error models, and SIC-POVM / process
tomography with diamond-distance certification.
"""

from __future__ import annotations

__version__ = "0.1.0"
