"""
AMIN Reliability

Exact reliability of acyclic multistate information networks:
- Node-based binary-addition tree (odometer and frontier DFS engines)
- Universal generating function method (cross-check and storage burst)
- Brute-force oracles over the raw probability space
- Semi-complete benchmark workbench and the amin-rel CLI
"""

from importlib.metadata import version, PackageNotFoundError

try:
    __version__ = version("amin-reliability")
except PackageNotFoundError:
    # Package not installed (development mode)
    __version__ = "0.0.0-dev"
