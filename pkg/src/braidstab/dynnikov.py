"""Integer coordinates for measured laminations on the n-punctured disk.

A lamination is encoded by 2n-4 integers (a_1..a_{n-2}, b_1..b_{n-2}): with
the punctures on a horizontal axis, b_i counts left-loops minus right-loops
around the axis in the gap right of puncture i+1, and a_i is half the excess
of above-axis over below-axis through-strands at that gap.  Generator
actions are exact piecewise-linear maps over the integers, so the braid
group acts by bijections of Z^{2n-4} and word actions can be iterated with
arbitrary-precision arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass


def _interior_pos(x1, y1, x2, y2):
    d = x1 - x2
    dp = max(d, 0)
    m1 = max(0, y1 + dp)
    m2 = max(0, dp - y2)
    e = max(0, -d + m1 + m2)
    f = max(0, y2 - y1 - dp + e)
    return x1 - m1, y2 - f, x2 + m2, y1 + f


def _interior(x1, y1, x2, y2, sign):
    # sigma_i^{-1} is conjugate to sigma_i^{+1} by the a |-> -a mirror
    if sign > 0:
        return _interior_pos(x1, y1, x2, y2)
    x1, y1, x2, y2 = _interior_pos(-x1, y1, -x2, y2)
    return -x1, y1, -x2, y2


def _lo(a, b, sign):
    bp = max(b, 0)
    if sign > 0:
        return -b + max(0, a + bp), a + bp
    return b - max(0, -a + bp), -a + bp


def _hi(a, b, sign):
    bm = min(b, 0)
    if sign > 0:
        return -b - max(0, -a - bm), a + bm
    return b + max(0, a - bm), -a + bm


@dataclass(frozen=True)
class DynnikovState:
    """Coordinate vector for a lamination on the n-punctured disk, n >= 3."""
    a: tuple
    b: tuple

    def __post_init__(self):
        if len(self.a) != len(self.b) or len(self.a) < 1:
            raise ValueError("need n-2 >= 1 coordinates per row")
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))

    @property
    def n(self):
        return len(self.a) + 2

    @classmethod
    def reference(cls, n):
        """A curve family meeting every generator: a_i = 1, b_i = 0."""
        m = n - 2
        return cls(a=(1,) * m, b=(0,) * m)

    def norm(self):
        return sum(abs(v) for v in self.a) + sum(abs(v) for v in self.b)

    def apply_generator(self, g):
        """Act by sigma_|g| with the sign of g (g in {+-1..+-(n-1)})."""
        i, sign = abs(g), (1 if g > 0 else -1)
        n = self.n
        if not 1 <= i <= n - 1:
            raise ValueError("generator index %d out of range for n=%d" % (i, n))
        a, b = list(self.a), list(self.b)
        if i == 1:
            a[0], b[0] = _lo(a[0], b[0], sign)
        elif i == n - 1:
            a[-1], b[-1] = _hi(a[-1], b[-1], sign)
        else:
            j = i - 2
            a[j], b[j], a[j + 1], b[j + 1] = _interior(
                a[j], b[j], a[j + 1], b[j + 1], sign)
        return DynnikovState(a=tuple(a), b=tuple(b))

    def apply_word(self, word):
        s = self
        for g in word:
            s = s.apply_generator(g)
        return s
