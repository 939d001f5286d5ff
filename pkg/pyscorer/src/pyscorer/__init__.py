"""pyscorer: reference stdio adapter for the external-scorer protocol."""

from .backends import MockBackend, make_backend
from .server import PROTOCOL_VERSION, serve

__version__ = "0.1.0"

__all__ = ["MockBackend", "PROTOCOL_VERSION", "make_backend", "serve"]
