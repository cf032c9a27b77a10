from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .ast import Script
from .printer import print_script

ALGORITHM = "sha256"


@dataclass(frozen=True, order=True)
class Digest:
    hexdigest: str
    algorithm: str = ALGORITHM

    @property
    def bytes(self) -> bytes:
        return bytes.fromhex(self.hexdigest)

    def __str__(self) -> str:
        return f"{self.algorithm}:{self.hexdigest}"


def canonical_text(s: Script) -> str:
    """Printed form without set-info lines; comments and layout never survive parsing."""
    return print_script(s, metadata=False)


def canonical_fingerprint(s: Script) -> Digest:
    h = hashlib.new(ALGORITHM, canonical_text(s).encode("utf-8"))
    return Digest(h.hexdigest())
