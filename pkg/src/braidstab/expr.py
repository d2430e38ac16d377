"""Small symbolic expression layer for map stages and Hamiltonians.

Config files carry expressions in a restricted arithmetic grammar over the
variables {x, y, t, A} and the functions {sin, cos, exp, sqrt, bump,
smoothstep}.  Everything is parsed into sympy so that first and second
derivatives are analytic; compiled numeric callables are cached.

``bump`` is a smooth function supported exactly on (0.1, 0.9) with maximum
value 1 at x = 1/2 -- identically zero on boundary collars of width <= 0.1,
which is what makes bump-built Hamiltonians collar-constant on the annulus
model.  ``smoothstep`` rises smoothly from 0 on (-inf, 0.1] to 1 on
[0.9, inf).
"""
from __future__ import annotations

import sympy as sp

_x, _y, _t, _A = sp.symbols("x y t A", real=True)

VARS = {"x": _x, "y": _y, "t": _t, "A": _A}


def bump(u):
    """Smooth bump, support (0.1, 0.9), max 1 at u = 1/2."""
    u = sp.sympify(u)
    s = (u - sp.Rational(1, 2)) / sp.Rational(2, 5)
    core = sp.exp(1 - 1 / (1 - s**2))
    return sp.Piecewise((core, sp.Abs(s) < 1), (0, True))


def smoothstep(u):
    """Smooth monotone 0 -> 1 transition across (0.1, 0.9)."""
    u = sp.sympify(u)
    v = (u - sp.Rational(1, 10)) / sp.Rational(4, 5)
    g = sp.exp(-1 / v)
    h = sp.exp(-1 / (1 - v))
    return sp.Piecewise((0, v <= 0), (1, v >= 1), (g / (g + h), True))


_LOCALS = dict(VARS)
_LOCALS.update({
    "sin": sp.sin, "cos": sp.cos, "exp": sp.exp, "sqrt": sp.sqrt,
    "pi": sp.pi, "Abs": sp.Abs, "abs": sp.Abs,
    "bump": bump, "smoothstep": smoothstep,
})


def parse(text):
    """Parse an expression string of the config grammar into sympy."""
    try:
        e = sp.sympify(text, locals=_LOCALS)
    except (sp.SympifyError, SyntaxError, TypeError) as exc:
        raise ValueError("cannot parse expression %r: %s" % (text, exc))
    extra = e.free_symbols - set(VARS.values())
    if extra:
        raise ValueError("unknown symbols %s in %r" % (sorted(map(str, extra)), text))
    return e


_compiled = {}


def compile_expr(e, variables=("x", "y", "t")):
    """Compile a sympy expression to a scalar callable of the given variables."""
    key = (sp.srepr(e), variables)
    if key not in _compiled:
        syms = [VARS[v] for v in variables]
        _compiled[key] = sp.lambdify(syms, e, modules=["math"])
    return _compiled[key]


def diff(e, var):
    return sp.diff(e, VARS[var]).doit()


def substitute(e, **kwargs):
    return e.subs({VARS[k]: v for k, v in kwargs.items()})


def is_rational_constant(e):
    """True if the expression is a constant that sympy can certify rational."""
    if e.free_symbols:
        return False
    r = sp.simplify(e).is_rational
    return bool(r)
