"""
Monte-Carlo package.

Modules:
- trials: Trial records, estimates with standard errors, the ordered worker pool
- checks: Edge frequency, spanning-tree bound and node capture checks
- sweep: Zero-one law sweeps over (n, c) grids
"""
