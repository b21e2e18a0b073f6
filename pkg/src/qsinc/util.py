"""Small numeric helpers: compensated accumulation and complex parsing."""

from __future__ import annotations

import math
import re


class KahanSum:
    """Neumaier-compensated accumulator for complex values."""

    __slots__ = ("_sr", "_cr", "_si", "_ci")

    def __init__(self) -> None:
        self._sr = 0.0
        self._cr = 0.0
        self._si = 0.0
        self._ci = 0.0

    def add(self, value: complex) -> None:
        v = complex(value)
        self._sr, self._cr = _neumaier_step(self._sr, self._cr, v.real)
        self._si, self._ci = _neumaier_step(self._si, self._ci, v.imag)

    @property
    def value(self) -> complex:
        return complex(self._sr + self._cr, self._si + self._ci)


def _neumaier_step(s: float, c: float, x: float) -> tuple[float, float]:
    t = s + x
    if abs(s) >= abs(x):
        c += (s - t) + x
    else:
        c += (x - t) + s
    return t, c


def fsum_complex(values) -> complex:
    """Exact-ish sum of an iterable of complex values (fsum on each part)."""
    vals = [complex(v) for v in values]
    return complex(math.fsum(v.real for v in vals),
                   math.fsum(v.imag for v in vals))


_COMPLEX_RE = re.compile(
    r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"(?:\s*([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i)?\s*$"
)


def parse_complex(text: str) -> complex:
    """Parse 'a', 'a+bi' or 'a-bi' (no spaces required) into a complex."""
    m = _COMPLEX_RE.match(text)
    if m is None:
        raise ValueError(f"cannot parse complex value {text!r}")
    re_part = float(m.group(1))
    if m.group(2) is None:
        return complex(re_part, 0.0)
    im_part = float(m.group(3))
    if m.group(2) == "-":
        im_part = -im_part
    return complex(re_part, im_part)


def format_real(x: float) -> str:
    """Fixed 17-significant-digit formatting; round-trips exactly."""
    return f"{x:.17g}"


def format_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0.0:
        return format_real(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{format_real(z.real)}{sign}{format_real(abs(z.imag))}i"
