"""
OATSim test suite (pytest + hypothesis). Slow acceptance runs: pytest -m slow
"""
