"""Unextendible product bases: exact construction, certification and planning."""

__version__ = "0.1.0"

from .catalog import BASES, CompleteBasis, export_upb, import_upb, load_upb, tiles_3x3  # noqa: E402
from .combinators import direct_sum_a, direct_sum_b, four_square, lift, tensor  # noqa: E402
from .states import ProductState, SystemDims, UpbCandidate, UpbError, ket, product  # noqa: E402
from .verifier import verify_bruteforce, verify_exact  # noqa: E402

__all__ = [
    "BASES",
    "CompleteBasis",
    "ProductState",
    "SystemDims",
    "UpbCandidate",
    "UpbError",
    "direct_sum_a",
    "direct_sum_b",
    "export_upb",
    "four_square",
    "import_upb",
    "ket",
    "lift",
    "load_upb",
    "product",
    "tensor",
    "tiles_3x3",
    "verify_bruteforce",
    "verify_exact",
]
