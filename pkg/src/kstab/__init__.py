"""Exact toric K-stability: Futaki invariants, chop expansions and LP searches."""

from .configs import AffineAction, TestConfig, base_change, dilate_config, make_config, twist
from .estimators import BlowupScan, DestabilizerSearch, ToricFutaki
from .fixtures import Fixture, load_fixture, parse_fixture
from .futaki import extremal_action, futaki_of, inner_product, relative_futaki
from .polytope import Polytope

__version__ = "0.1.0"

__all__ = [
    "AffineAction", "TestConfig", "Polytope", "Fixture",
    "make_config", "twist", "base_change", "dilate_config",
    "futaki_of", "inner_product", "extremal_action", "relative_futaki",
    "load_fixture", "parse_fixture",
    "ToricFutaki", "BlowupScan", "DestabilizerSearch",
]
