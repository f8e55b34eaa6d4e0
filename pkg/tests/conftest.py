import sys
from fractions import Fraction

import sympy as sp

from parsym.rational import FactoredFunction1D, P1Point

X, Y = sp.symbols("x y")


def sym_1d(f: FactoredFunction1D, var=X):
    expr = sp.Rational(f.constant.numerator, f.constant.denominator)
    for r, e in f.factors:
        expr *= (var - sp.Rational(r.numerator, r.denominator)) ** e
    return expr


def _mult(poly, a):
    k = 0
    while not poly.is_zero and poly.eval(a) == 0:
        poly = sp.quo(poly, sp.Poly(poly.gen - a, poly.gen))
        k += 1
    return k


def sym_unit_part(expr, var, P: P1Point):
    """Order and leading Laurent coefficient of expr at P (sympy oracle)."""
    if P.is_inf:
        u = sp.Symbol("u")
        expr = expr.subs(var, 1 / u)
        var, a = u, sp.Integer(0)
    else:
        a = sp.Rational(P.value.numerator, P.value.denominator)
    num, den = sp.fraction(sp.cancel(sp.together(expr)))
    k = _mult(sp.Poly(num, var), a) - _mult(sp.Poly(den, var), a)
    c = sp.cancel(expr / (var - a) ** k).subs(var, a)
    return k, Fraction(int(sp.fraction(c)[0]), int(sp.fraction(c)[1]))




def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k].line())
