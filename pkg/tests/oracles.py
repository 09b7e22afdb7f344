"""Independent reference computations used to freeze expected values.

Nothing here imports the package's invariant code: the bracket is a plain
enumeration of all 2^c smoothings with loops counted by graph search, and
polynomials are sympy expressions.
"""

from __future__ import annotations

import itertools

import sympy as sp

A, t = sp.symbols("A t")


def _count_loops(crossings, choice):
    # nodes are (crossing, slot); edges join the two ends of each label and
    # the slot pairs chosen by the smoothing
    adj = {}

    def link(u, v):
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)

    where = {}
    for ci, cr in enumerate(crossings):
        for slot, lab in enumerate(cr):
            where.setdefault(lab, []).append((ci, slot))
    for ends in where.values():
        link(ends[0], ends[1])
    for ci, s in enumerate(choice):
        if s == 0:  # A-smoothing: (a,b) and (c,d)
            link((ci, 0), (ci, 1))
            link((ci, 2), (ci, 3))
        else:  # B-smoothing: (a,d) and (b,c)
            link((ci, 0), (ci, 3))
            link((ci, 1), (ci, 2))
    seen = set()
    loops = 0
    for node in adj:
        if node in seen:
            continue
        loops += 1
        stack = [node]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(adj[u])
    return loops


def brute_bracket(crossings):
    """Kauffman bracket <D> in A by enumerating every state."""
    if not crossings:
        return sp.Integer(1)
    delta = -A**2 - A**-2
    total = sp.Integer(0)
    for choice in itertools.product((0, 1), repeat=len(crossings)):
        a = choice.count(0)
        b = choice.count(1)
        total += A ** (a - b) * delta ** (_count_loops(crossings, choice) - 1)
    return sp.expand(total)


def sympy_coeffs(expr, var):
    """Exponent -> integer coefficient map of a Laurent expression."""
    expr = sp.expand(expr)
    out = {}
    for term in sp.Add.make_args(expr):
        coeff, power = term.as_coeff_exponent(var)
        out[int(power)] = out.get(int(power), 0) + int(coeff)
    return {e: c for e, c in out.items() if c}


def seifert_alexander(q):
    """det(V - t V^T) for the (q-1)x(q-1) Seifert matrix of T(2,q), via sympy."""
    size = q - 1
    V = sp.zeros(size, size)
    for i in range(size):
        V[i, i] = -1
        if i + 1 < size:
            V[i, i + 1] = 1
    return sp.expand((V - t * V.T).det())
