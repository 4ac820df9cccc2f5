"""
Simulation package for sampled key graphs.

Modules:
- sampler: Seeded random streams, key rings, edge construction and the text dump format
- analysis: Union-find, per-graph observables and key-coverage profiles
"""
