"""Compactly supported kernels K(u) on [0, 1]."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class KernelSpec:
    """A kernel supported on [0, 1).

    ``kind`` is ``"gaussian"`` for ``exp(-a u^2)`` truncated to the unit
    interval (``a = 5`` is the default used throughout) or ``"epanechnikov"``
    for ``1 - u^2``.
    """

    kind: str = "gaussian"
    a: float = 5.0

    def __post_init__(self):
        if self.kind not in ("gaussian", "epanechnikov"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "gaussian" and not self.a > 0:
            raise ValueError("gaussian kernel needs a > 0")

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        inside = (u >= 0) & (u < 1)
        if self.kind == "gaussian":
            vals = np.exp(-self.a * u * u)
        else:
            vals = 1.0 - u * u
        return np.where(inside, vals, 0.0)

    @property
    def name(self) -> str:
        if self.kind == "gaussian":
            return f"gaussian({self.a:g})"
        return "epanechnikov"

    @classmethod
    def parse(cls, text: str) -> "KernelSpec":
        """Parse ``"gaussian"``, ``"gaussian(5)"`` or ``"epanechnikov"``."""
        text = text.strip().lower()
        if text in ("epanechnikov", "epan"):
            return cls("epanechnikov")
        if text.startswith("gaussian"):
            rest = text[len("gaussian"):]
            if not rest:
                return cls("gaussian")
            if rest.startswith("(") and rest.endswith(")"):
                return cls("gaussian", float(rest[1:-1]))
        raise ValueError(f"cannot parse kernel {text!r}")


DEFAULT_KERNEL = KernelSpec("gaussian", 5.0)
