"""
freeprim - certify that the primitive Lie algebra of a free graded connected bialgebra is free.
"""

__version__ = "0.1.0"
