"""Exact toric fans, monomial maps and algebraic stabilization."""
from .fan import Fan, SupportFunction, classify_fan, standard_fan, validate_fan
from .monomial import MonomialMap, check_1stable, verify_certificate

__all__ = ["Fan", "SupportFunction", "classify_fan", "standard_fan", "validate_fan",
           "MonomialMap", "check_1stable", "verify_certificate"]
