"""
formdiv: divisor classes of x^2 + Ny^2 and x^2 - Ny^2, and a checker for
Euler's catalog of theorems about them.
"""

__version__ = "1.0.0"
