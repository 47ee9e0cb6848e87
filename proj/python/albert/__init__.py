"""Cubic norm structures, Tits constructions and R-equivalence certificates.

Scalars are exchanged as strings ("1/2", "1+s") so values stay exact.
"""

from ._albert import AlbertError, Construction, check_certificate, construction, run_scenario

__all__ = ["AlbertError", "Construction", "check_certificate", "construction", "run_scenario"]
