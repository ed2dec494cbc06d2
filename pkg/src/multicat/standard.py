"""Standard multicategories used throughout the test corpus and fixtures.

The associative family is built on the word model: an n-ary operation is
a word using each of n letters exactly once, composition is block
substitution of words, and the symmetric action relabels letters.  The
commutative family has a single operation per arity.
"""

from itertools import permutations

from . import perms
from .core import FiniteCollection, TableMulticategory


def unit_multicategory(color="u"):
    """One color, only the identity; the tensor unit."""
    s = ((color,), color)
    ops = {s: ("1",)}
    action = {(s, (0,)): {"1": "1"}}
    return TableMulticategory(
        collection=FiniteCollection((color,), ops, action),
        units={color: "1"}, comp={(s, "1", 0, s, "1"): "1"},
        name="unit")


def word_id(w):
    return "w" + "".join(str(x) for x in w)


def word_substitute(w, i, u):
    m = len(u)
    out = []
    for letter in w:
        if letter < i:
            out.append(letter)
        elif letter == i:
            out.extend(i + x for x in u)
        else:
            out.append(letter + m - 1)
    return tuple(out)


def word_relabel(w, sigma):
    """Symmetric action on words: acted(z) reads input sigma[t] at t, so
    each letter l is renamed to inverse(sigma)[l]."""
    inv = perms.inverse(sigma)
    return tuple(inv[l] for l in w)


def assoc_multicategory(max_arity=3, color="x", include_nullary=True):
    """Monoid laws, truncated: n-ary operations are the n! orderings.

    With include_nullary=False the empty word is dropped (the arity
    -positive part), which keeps bar-type constructions face-stable."""
    lo = 0 if include_nullary else 1
    words = {n: sorted(permutations(range(n)))
             for n in range(lo, max_arity + 1)}
    ops = {}
    for n, ws in words.items():
        ops[((color,) * n, color)] = tuple(word_id(w) for w in ws)
    action = {}
    for n, ws in words.items():
        s = ((color,) * n, color)
        for p in perms.all_perms(n):
            action[s, p] = {word_id(w): word_id(word_relabel(w, p))
                            for w in ws}
    comp = {}
    for n, ws in words.items():
        s = ((color,) * n, color)
        for m, us in words.items():
            if n == 0 or n + m - 1 > max_arity:
                continue
            qs = ((color,) * m, color)
            for w in ws:
                for i in range(n):
                    for u in us:
                        comp[s, word_id(w), i, qs, word_id(u)] = word_id(
                            word_substitute(w, i, u))
    return TableMulticategory(
        collection=FiniteCollection((color,), ops, action),
        units={color: word_id((0,))}, comp=comp,
        name=f"assoc{max_arity}")


def comm_multicategory(max_arity=3, color="x"):
    """Commutative monoid laws, truncated: one operation per arity."""
    ops = {((color,) * n, color): (f"m{n}",) for n in range(max_arity + 1)}
    action = {}
    for n in range(max_arity + 1):
        s = ((color,) * n, color)
        for p in perms.all_perms(n):
            action[s, p] = {f"m{n}": f"m{n}"}
    comp = {}
    for n in range(1, max_arity + 1):
        s = ((color,) * n, color)
        for m in range(max_arity + 1):
            if n + m - 1 > max_arity:
                continue
            qs = ((color,) * m, color)
            r = f"m{n + m - 1}"
            for i in range(n):
                comp[s, f"m{n}", i, qs, f"m{m}"] = r
    return TableMulticategory(
        collection=FiniteCollection((color,), ops, action),
        units={color: "m1"}, comp=comp,
        name=f"comm{max_arity}")


def indiscrete_pair(colors=("a", "b")):
    """Two isomorphic colors: exactly one morphism in every unary hom,
    nothing in higher arities."""
    ops = {}
    action = {}
    for a in colors:
        for b in colors:
            s = ((a,), b)
            ops[s] = ("f",)
            action[s, (0,)] = {"f": "f"}
    comp = {}
    for a in colors:
        for b in colors:
            for c in colors:
                comp[((b,), c), "f", 0, ((a,), b), "f"] = "f"
    units = {c: "f" for c in colors}
    return TableMulticategory(
        collection=FiniteCollection(tuple(colors), ops, action),
        units=units, comp=comp, name="indiscrete2")


def discrete_pair(colors=("a", "b")):
    """Two colors with only identities; the colors are not isomorphic."""
    ops = {((c,), c): ("1",) for c in colors}
    action = {(((c,), c), (0,)): {"1": "1"} for c in colors}
    comp = {((((c,), c)), "1", 0, (((c,), c)), "1"): "1" for c in colors}
    return TableMulticategory(
        collection=FiniteCollection(tuple(colors), ops, action),
        units={c: "1" for c in colors},
        comp=comp, name="discrete2")


def corrupt_unit(M):
    """Copy of M with the unit's composition row twisted by a transposition
    at one binary signature, used to validate the law checker."""
    swap = (1, 0)
    for s in M.signatures():
        if len(s[0]) != 2 or len(set(s[0])) != 1:
            continue
        comp = dict(M.comp)
        color = s[0][0]
        usig = ((color,), color)
        unit = M.units[color]
        changed = False
        for p in M.ops_at(s):
            twisted = M.act((s, p), swap)[1]
            if twisted == p:
                continue
            for slot in (0, 1):
                comp[s, p, slot, usig, unit] = twisted
                changed = True
        if changed:
            return TableMulticategory(
                collection=M.collection, units=dict(M.units), comp=comp,
                complete=M.complete, name=M.name + "-corrupt")
    raise ValueError("no binary signature with a nontrivial action")
