"""
User-supplied functions of one variable, parsed with sympy and lambdified to numpy.
"""
from typing import Callable

import numpy as np
import sympy

from src.core.exceptions import InvalidArgumentError


def parse_function(expression: str, variable: str = "x") -> Callable[[np.ndarray], np.ndarray]:
    """
    Turn e.g. "cos(pi*y)**2" or "Piecewise((1, x < 1/2), (0, True))" into a
    vectorized callable.

    Raises:
        InvalidArgumentError: If the expression is empty, does not parse, or
            uses symbols other than `variable`
    """
    if not expression:
        raise InvalidArgumentError(f"need an expression in {variable}")
    symbol = sympy.Symbol(variable, real=True)
    try:
        parsed = sympy.sympify(expression, locals={variable: symbol})
    except (sympy.SympifyError, TypeError, SyntaxError) as e:
        raise InvalidArgumentError(f"cannot parse expression {expression!r}: {e}") from None
    extra = parsed.free_symbols - {symbol}
    if extra:
        names = ", ".join(sorted(str(s) for s in extra))
        raise InvalidArgumentError(f"expression may only use {variable} (found {names})")
    fn = sympy.lambdify(symbol, parsed, modules="numpy")
    return lambda points: np.zeros(np.shape(points)) + np.asarray(fn(np.asarray(points, dtype=float)), dtype=float)
