"""Kernel selection: compiled Cython module when built, pure Python otherwise.

Set BJKNOT_PURE=1 in the environment to force the pure backend.
"""

import os

from . import pure as _pure

face_count = _pure.face_count
code_from_sequence = _pure.code_from_sequence
canonical_code = _pure.canonical_code
is_canonical_code = _pure.is_canonical_code
bracket_statesum = _pure.bracket_statesum
BACKEND = _pure.BACKEND

if not os.environ.get("BJKNOT_PURE"):
    try:
        from bjknot import _ckernels as _c

        face_count = _c.face_count
        canonical_code = _c.canonical_code
        is_canonical_code = _c.is_canonical_code
        bracket_statesum = _c.bracket_statesum
        BACKEND = _c.BACKEND
    except ImportError:
        pass

__all__ = [
    "face_count",
    "code_from_sequence",
    "canonical_code",
    "is_canonical_code",
    "bracket_statesum",
    "BACKEND",
]
