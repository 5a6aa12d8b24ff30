"""
.. include:: ./documentation.md
"""

__version__ = "0.1.0"

from .graph import *
from .engine import *
from .solver import *
from .audit import *
from .constructions import *
