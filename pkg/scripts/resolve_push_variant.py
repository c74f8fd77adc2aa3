#!/usr/bin/env python3
"""Enumerate the sign/direction variants of the quadratic coordinate change
relating the two bundled R^4 Poisson structures.

The change "x2 += (x4^2 / 2) * x1" is only determined up to the sign of the
quadratic term and the direction it is applied in; this script runs the
symbolic pushforward on all four combinations and prints which ones carry
one structure exactly onto the other.  The winning variant for the
pi1 -> pi2 direction is the one frozen in scenarios/ex_r4_push.json.
"""

from poisdirac.bivector_fields import BivectorField, pushforward
from poisdirac.polynomials import PolyMap

X4 = ("x1", "x2", "x3", "x4")

PI1 = BivectorField.from_upper(X4, {(0, 1): "x1^2", (2, 3): "1"})
PI2 = BivectorField.from_upper(X4, {(0, 1): "x1^2", (2, 3): "1", (1, 2): "x1*x4"})

PLUS = PolyMap.parse(["x1", "x2 + 1/2*x4^2*x1", "x3", "x4"], X4)
MINUS = PolyMap.parse(["x1", "x2 - 1/2*x4^2*x1", "x3", "x4"], X4)


def main() -> None:
    cases = [
        ("+", "pi1 -> pi2", PI1, PLUS, MINUS, PI2),
        ("-", "pi1 -> pi2", PI1, MINUS, PLUS, PI2),
        ("+", "pi2 -> pi1", PI2, PLUS, MINUS, PI1),
        ("-", "pi2 -> pi1", PI2, MINUS, PLUS, PI1),
    ]
    for sign, direction, source, forward, backward, target in cases:
        pushed = pushforward(source, forward, backward)
        verdict = "MATCHES" if pushed.entries == target.entries else "differs"
        print(f"sign {sign}, {direction}: {verdict}")
        if verdict == "differs":
            entries = {(i + 1, j + 1): str(p) for (i, j), p in pushed.upper_entries().items()}
            print(f"    pushforward = {entries}")


if __name__ == "__main__":
    main()
