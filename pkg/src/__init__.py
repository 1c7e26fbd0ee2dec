# VortexSheet - rotating vortex-sheet equilibria
__version__ = "1.0.0"
