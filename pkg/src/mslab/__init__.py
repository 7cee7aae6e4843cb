"""Morse-Smale surface diffeomorphisms: model maps, numerically extracted
descriptors, and the exact decision whether a connected characteristic
orbit space exists."""
from .analysis import analyze, charspace_oracle, extract_descriptor, find_periodic_points
from .charspace import enumerate_valid_sigma, has_connected_charspace, summarize
from .descriptor import MSDescriptor, is_isomorphic, power, surface_of, validate
from .families import FAMILIES, build
from .fixtures import golden
from .models import MODEL_NAMES, conjugacy_residual, get_model
from .sums import connected_sum

__version__ = "0.1.0"

__all__ = [
    "FAMILIES", "MODEL_NAMES", "MSDescriptor", "analyze", "build", "charspace_oracle",
    "conjugacy_residual", "connected_sum", "enumerate_valid_sigma", "extract_descriptor",
    "find_periodic_points", "get_model", "golden", "has_connected_charspace", "is_isomorphic",
    "power", "summarize", "surface_of", "validate",
]
