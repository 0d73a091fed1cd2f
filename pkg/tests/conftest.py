import os
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

import pytest

from core.exact_arith import QQ, DvrDescriptor
from core.multipoly import Poly
from core.ratmap import AffineVariety


@pytest.fixture
def z5():
    return DvrDescriptor.integers(5)


@pytest.fixture
def xy():
    """x, y in QQ[x, y]."""
    return Poly.generators(("x", "y"), QQ)


@pytest.fixture
def line():
    """The affine line over QQ, asserted irreducible."""
    return AffineVariety(("x",), [], QQ, irreducible=True, name="A1")

