"""
Core package for the heterogeneous key predistribution library.

Modules:
- errors: Exception hierarchy shared by every layer
- model: Validated scheme parameters (class mix, ring sizes, pool size)
- exactprob: Closed-form probabilities, expectations and bounds
- scaling: Scaling presets, dimensioning and condition reports
"""
