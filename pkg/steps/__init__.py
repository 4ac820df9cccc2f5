"""
Step package for the sweep cell workflow.

Modules:
- dimension: Ring sizing for the cell's target c
- simulate: Monte-Carlo trials on the dimensioned scheme
- comparison: Agreement between the empirical and exact isolated-node counts
- report: Assembly of the cell's table row
"""
