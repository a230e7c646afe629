"""Executable clone theory for periodic symmetric functions of three-valued logic.

Subpackages and modules:

- ``symfun``: layer/table representations, period detection, N-set algebra
- ``formulas``: formulas over named R-functions, realization, theta, rewriting
- ``closure``: exact closure oracle with derivation witnesses
- ``criteria``: arithmetic membership criteria with certificates
- ``families``: generator-family descriptors and basis classification
- ``verify``: seeded verification suites
- ``service``: FastAPI app exposing the above
- ``cli``: thin command-line client for the service
"""

__version__ = "0.1.0"
