"""Regenerate tests/data/lambda_golden.txt from a standalone tuple-based abstraction.

Terms are strings (atoms) or 2-tuples (application). Output lines are
``variable<TAB>term<TAB>abstraction`` in left-associated juxtaposition syntax.
"""
from __future__ import annotations

import random
from pathlib import Path

ATOMS = ("x", "y", "z", "k", "s", "#0", "#2")


def abstract(y, t):
    if isinstance(t, tuple):
        return (("s", abstract(y, t[0])), abstract(y, t[1]))
    if t == y:
        return (("s", "k"), "k")
    return ("k", t)


def show(t):
    if not isinstance(t, tuple):
        return t
    f, a = t
    return f"{show(f)} ({show(a)})" if isinstance(a, tuple) else f"{show(f)} {show(a)}"


def draw(rng, d):
    if d <= 1 or rng.random() < 0.25:
        return rng.choice(ATOMS)
    return (draw(rng, d - 1), draw(rng, d - 1))


def cases():
    fixed = [("y", "y"), ("y", "x"), ("y", "k"), ("y", "#0"), ("y", ("x", "y")), ("x", ("x", "y")),
             ("y", ("y", "y")), ("z", (("z", "x"), "y")), ("y", ("s", ("k", "y")))]
    rng = random.Random(20240611)
    out = list(fixed)
    while len(out) < 50:
        case = (rng.choice("xyz"), draw(rng, rng.randint(2, 5)))
        if case not in out:
            out.append(case)
    return out


if __name__ == "__main__":
    lines = [f"{y}\t{show(t)}\t{show(abstract(y, t))}" for y, t in cases()]
    path = Path(__file__).parent / "data" / "lambda_golden.txt"
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} cases to {path}")
