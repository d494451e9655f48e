"""
Writing symbols as expressions
==============================

Symbols are parsed from strings: ``n`` for sequences, ``x``, ``y`` and
``z = x + iy`` on the plane. Integer powers are exact products.
"""

import numpy as np

from formkit import evaluate, evaluate_array, parse, to_text
from formkit.errors import ContextError, ParseError

for text in ("1+2*3^2", "2^3^2", "-2^2", "sign(0)", "sqrt(-4)", "exp(i*pi)"):
    print(f"{text:<10} = {evaluate(parse(text))}")

tree = parse("(-1)^n * n^2")
print(to_text(tree))
print(evaluate_array(tree, {"n": np.arange(1, 7)}).real)

###############################################################################
# Errors point at the byte offset of the problem.

for text, context in (("2n", "sequence"), ("n + z", "sequence")):
    try:
        parse(text, context)
    except (ParseError, ContextError) as exc:
        print(type(exc).__name__, exc)
