"""Hot kernels: compiled extension when built, pure Python otherwise.

Set ``BACKEND`` to inspect which implementation is active.
"""

try:
    from ._ckernels import canonical_form, closure, compose, inverse, orbit, propagate

    BACKEND = "cython"
except ImportError:  # extension not built
    from .pure import canonical_form, closure, compose, inverse, orbit, propagate

    BACKEND = "python"

__all__ = ["BACKEND", "canonical_form", "closure", "compose", "inverse", "orbit", "propagate"]
