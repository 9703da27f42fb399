"""Design-space exploration for RQL superconducting double-SHA-256 engines."""
from ._rqlsha import (  # noqa: F401
    Session,
    analyze_netlist,
    csa_latency,
    default_cell_library_json,
    double_sha256_hex,
    mining_loss_probability,
    published_json,
    sha256_hex,
)

__all__ = [
    "Session",
    "analyze_netlist",
    "csa_latency",
    "default_cell_library_json",
    "double_sha256_hex",
    "mining_loss_probability",
    "published_json",
    "sha256_hex",
]
