"""Core physics and numerics for dirac-steps"""
