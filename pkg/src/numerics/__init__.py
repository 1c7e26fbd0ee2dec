"""
Numerical core: spectral helpers, the residual functional, its linearization,
reference oracles, the Levenberg-Marquardt solver and branch continuation.
"""
