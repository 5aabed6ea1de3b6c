"""Deterministic handshake/download timing benchmark for classical and
hybrid post-quantum cipher suite shapes over an emulated impaired link."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__doc__ = _core_doc
