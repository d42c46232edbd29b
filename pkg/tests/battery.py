"""Fixed integrand pairs shared by the integral, iteration and q-integral tests."""

from meanbounds.expr import compile_expr

# (f, g, a, b), all strictly positive on [a, b]
POSITIVE = [
    ("1+x", "2-x", 0.0, 1.0),
    ("exp(x)", "1", 0.0, 1.0),
    ("1+x^2", "exp(-x)", 0.0, 1.0),
    ("2+sin(3*x)", "2+cos(2*x)", 0.0, 1.0),
    ("sqrt(1+x)", "1/(1+x)", 0.0, 1.0),
    ("x+0.1", "1.1-x", 0.0, 1.0),
    ("x", "1/x", 1.0, 2.0),
    ("x^2", "3-x", 1.0, 2.0),
    ("exp(-x)", "ln(x)+0.5", 1.0, 2.0),
    ("2+sin(5*x)", "x", 1.0, 2.0),
    ("sqrt(x)", "exp(x-1.5)", 1.0, 2.0),
    ("1+cos(x)", "x^3/4", 1.0, 2.0),
]

# f or g changes sign on [a, b] while f + g >= 0
SIGN_CHANGING = [
    ("x-0.4", "0.6-x", 0.0, 1.0),
    ("2*x-1", "1-x", 0.0, 1.0),
    ("sin(6*x)", "1.5-sin(6*x)", 0.0, 1.0),
    ("x-0.5", "1", 0.0, 1.0),
]

ENVELOPE = ("x", "1-x", 0.0, 1.0)


def pair(entry):
    f, g, a, b = entry
    return compile_expr(f), compile_expr(g), a, b


def unit_interval(entries):
    return [e for e in entries if e[2] == 0.0 and e[3] == 1.0]
