"""Mercer decompositions of matrix-valued kernels on finite measure spaces."""

import json as _json
import os as _os
import pkgutil as _pkgutil

# The compiled module may live in a build tree next to an in-source checkout.
__path__ = _pkgutil.extend_path(__path__, __name__)

from ._core import (  # noqa: E402
    Analysis,
    AtomSpace,
    ConvergenceError,
    DegenerateInput,
    IoError,
    Kernel,
    KernelError,
    ValidationError,
    VkmError,
    analyze,
    kernel_from_json,
    load_kernel,
    read_atoms,
    synthesize,
    validate_kernel,
    verify_diagonal_blocks,
    write_atoms,
)

__all__ = [
    "Analysis",
    "AtomSpace",
    "ConvergenceError",
    "DegenerateInput",
    "IoError",
    "Kernel",
    "KernelError",
    "ValidationError",
    "VkmError",
    "analyze",
    "kernel",
    "kernel_from_json",
    "load_kernel",
    "read_atoms",
    "synthesize",
    "validate_kernel",
    "verify_diagonal_blocks",
    "write_atoms",
]

__version__ = "0.1.0"


def kernel(spec, base_dir=""):
    """Build a kernel from a spec dict, a JSON string or a path to a JSON file."""
    if isinstance(spec, dict):
        return kernel_from_json(_json.dumps(spec), base_dir)
    if isinstance(spec, (str, _os.PathLike)) and _os.path.isfile(spec):
        return load_kernel(spec)
    return kernel_from_json(str(spec), base_dir)
