"""
Workflow package for one zero-one sweep cell.

Contains:
- state: Cell state TypedDict definition
- routing: Conditional routing functions
- builder: StateGraph construction and compilation
"""
