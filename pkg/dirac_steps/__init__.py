"""dirac-steps - Electron scattering at potential steps in space and time"""

__version__ = "0.1.0"
