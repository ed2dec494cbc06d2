"""Planar rooted trees: grafting, the tree multicategory on arities, free
multicategories, and the circle product of collections.

Two tree encodings live here, both as nested tuples so that structural
equality is tuple equality:

* generator terms (for free constructions):
  ``('L', color, index)`` is a leaf edge carrying its input position,
  ``('N', gen_signature, gen_id, children)`` a vertex labeled by a
  generator.  A planar rooted tree has no nontrivial planar automorphism,
  so the encoding is a complete invariant of the numbered tree; symmetric
  equality (identifying per-vertex twists by the generator actions) is
  handled by :func:`canonical_term`.

* arity trees (operations of the tree multicategory):
  ``('L', index)`` a numbered input edge, ``('V', vnum, children)`` a
  vertex carrying its number.  The bare edge ``('L', 0)`` is the unique
  operation with no vertices and one input.
"""

from dataclasses import dataclass
from itertools import product

from . import perms
from .core import (FiniteCollection, TableMulticategory, composed_sig, sig_key)
from .errors import (CompositionError, StructuralError, SubstitutionError,
                     TruncationError)


# ---------------------------------------------------------------------------
# generator terms


def identity_term(color):
    return ("L", color, 0)


def corolla(gsig, gid):
    children = tuple(("L", c, i) for i, c in enumerate(gsig[0]))
    return ("N", gsig, gid, children)


def term_leaves(t):
    if t[0] == "L":
        yield t
    else:
        for child in t[3]:
            yield from term_leaves(child)


def term_arity(t):
    return sum(1 for _ in term_leaves(t))


def term_vertices(t):
    if t[0] == "L":
        return 0
    return 1 + sum(term_vertices(c) for c in t[3])


def term_signature(t):
    leaves = list(term_leaves(t))
    inputs = [None] * len(leaves)
    for _, color, idx in leaves:
        if inputs[idx] is not None:
            raise StructuralError(f"duplicate leaf index {idx}")
        inputs[idx] = color
    if any(c is None for c in inputs):
        raise StructuralError("leaf indices are not 0..n-1")
    out = t[1] if t[0] == "L" else t[1][1]
    return (tuple(inputs), out)


def term_out_color(t):
    return t[1] if t[0] == "L" else t[1][1]


def graft(t, index, s):
    """Replace the leaf numbered `index` of t by the term s.

    Leaves of t keep their numbers below `index`, shift up by arity(s)-1
    above it; leaves of s land at index..index+arity(s)-1.
    """
    m = term_arity(s)

    def go(node):
        if node[0] == "L":
            _, color, idx = node
            if idx == index:
                if term_out_color(s) != color:
                    raise SubstitutionError(
                        f"cannot graft output {term_out_color(s)} onto a "
                        f"{color} leaf")
                return shift_leaves(s, index)
            if idx > index:
                return ("L", color, idx + m - 1)
            return node
        return ("N", node[1], node[2], tuple(go(c) for c in node[3]))

    found = any(idx == index for _, _, idx in term_leaves(t))
    if not found:
        raise SubstitutionError(f"no leaf numbered {index}")
    return go(t)


def shift_leaves(t, offset):
    if t[0] == "L":
        return ("L", t[1], t[2] + offset)
    return ("N", t[1], t[2], tuple(shift_leaves(c, offset) for c in t[3]))


def renumber_term(t, sigma):
    """The symmetric action: input t of the result reads input sigma[t]."""
    inv = perms.inverse(sigma)

    def go(node):
        if node[0] == "L":
            return ("L", node[1], inv[node[2]])
        return ("N", node[1], node[2], tuple(go(c) for c in node[3]))

    return go(t)


def canonical_term(t, gens):
    """Minimal representative modulo the per-vertex generator actions.

    At each vertex the generator may be replaced by any of its symmetric
    images with the children permuted accordingly; minimizing bottom-up
    over these local moves picks one representative per equivalence class.
    """
    if t[0] == "L":
        return t
    children = tuple(canonical_term(c, gens) for c in t[3])
    gsig, gid = t[1], t[2]
    best = None
    for p in perms.all_perms(len(children)):
        new_sig, new_id = gens.act((gsig, gid), p)
        cand = ("N", new_sig, new_id,
                tuple(children[p[i]] for i in range(len(children))))
        if best is None or cand < best:
            best = cand
    return best


def term_text(t):
    """Deterministic bracketed encoding, also used in DSL literals."""
    if t[0] == "L":
        return f"${t[2] + 1}"
    if not t[3]:
        return t[2] + "()"
    return t[2] + "(" + ",".join(term_text(c) for c in t[3]) + ")"


# ---------------------------------------------------------------------------
# arity trees (operations of the tree multicategory)


def op_identity(n):
    return ("V", 0, tuple(("L", i) for i in range(n)))


BARE_EDGE = ("L", 0)


def op_vertex_count(t):
    if t[0] == "L":
        return 0
    return 1 + sum(op_vertex_count(c) for c in t[2])


def op_valences(t):
    """Valence of each vertex, listed by vertex number."""
    out = {}

    def go(node):
        if node[0] == "L":
            return
        _, vnum, children = node
        if vnum in out:
            raise StructuralError(f"duplicate vertex number {vnum}")
        out[vnum] = len(children)
        for c in children:
            go(c)

    go(t)
    if sorted(out) != list(range(len(out))):
        raise StructuralError("vertex numbers are not 0..k-1")
    return tuple(out[i] for i in range(len(out)))


def op_leaf_count(t):
    if t[0] == "L":
        return 1
    return sum(op_leaf_count(c) for c in t[2])


def op_signature(t):
    """Signature in the tree multicategory: inputs are the vertex valences
    in vertex-number order, the output is the leaf count; all as strings."""
    vals = op_valences(t)
    leaves = []

    def go(node):
        if node[0] == "L":
            leaves.append(node[1])
        else:
            for c in node[2]:
                go(c)

    go(t)
    if sorted(leaves) != list(range(len(leaves))):
        raise StructuralError("leaf numbers are not 0..n-1")
    return (tuple(str(v) for v in vals), str(len(leaves)))


def op_compose(outer, inners):
    """Substitute inners[i] for the vertex numbered i of the outer tree.

    Vertex numbers of the result are blockwise: the vertices of inners[0]
    keep their order first, then inners[1], and so on; input numbering is
    carried through the leaf matchings of the inner trees.
    """
    vals = op_valences(outer)
    if len(inners) != len(vals):
        raise CompositionError(
            f"need {len(vals)} arguments, got {len(inners)}")
    offsets = []
    total = 0
    for i, inner in enumerate(inners):
        if op_leaf_count(inner) != vals[i]:
            raise CompositionError(
                f"argument {i} has {op_leaf_count(inner)} inputs, vertex "
                f"{i} has valence {vals[i]}")
        offsets.append(total)
        total += op_vertex_count(inner)

    def plug(inner_node, children, offset):
        # replace leaf l of the inner tree by children[l], shifting vnums
        if inner_node[0] == "L":
            return children[inner_node[1]]
        return ("V", inner_node[1] + offset,
                tuple(plug(c, children, offset) for c in inner_node[2]))

    def go(node):
        if node[0] == "L":
            return node
        _, vnum, children = node
        done = tuple(go(c) for c in children)
        return plug(inners[vnum], done, offsets[vnum])

    return go(outer)


def op_act(t, alpha):
    """Vertex renumbering action: the vertex numbered alpha[i] becomes i."""
    inv = perms.inverse(alpha)

    def go(node):
        if node[0] == "L":
            return node
        return ("V", inv[node[1]], tuple(go(c) for c in node[2]))

    return go(t)


def op_text(t):
    if t[0] == "L":
        return f"*{t[1] + 1}"
    return f"v{t[1] + 1}(" + ",".join(op_text(c) for c in t[2]) + ")"


def op_hom_set(valences, n_inputs, cap=20000):
    """All numbered trees with the given vertex valences and input count.

    Empty when no tree shape fits (the leaf count of a tree is determined
    by its valences).  Raises TruncationError when more than `cap` trees
    would be produced.
    """
    k = len(valences)
    if k == 0:
        return [BARE_EDGE] if n_inputs == 1 else []
    if n_inputs != sum(valences) - k + 1 or n_inputs < 0:
        return []

    def splits(items, bins):
        # ordered partitions of a set of vertex numbers into `bins` subsets
        if bins == 0:
            if not items:
                yield ()
            return
        if bins == 1:
            yield (frozenset(items),)
            return
        items = list(items)
        for assign in product(range(bins), repeat=len(items)):
            yield tuple(frozenset(x for x, b in zip(items, assign) if b == j)
                        for j in range(bins))

    def shapes(root, others):
        # trees over vertex set {root} | others; leaves unnumbered (None)
        val = valences[root]
        for parts in splits(others, val):
            child_lists = []
            for part in parts:
                if not part:
                    child_lists.append([("L", None)])
                else:
                    subs = []
                    for sub_root in part:
                        subs.extend(shapes(sub_root, part - {sub_root}))
                    child_lists.append(subs)
            for combo in product(*child_lists):
                yield ("V", root, combo)

    out = []
    all_vs = frozenset(range(k))
    for root in range(k):
        for shape in shapes(root, all_vs - {root}):
            # number the leaves in every possible way
            slots = []

            def walk(node):
                if node[0] == "L":
                    slots.append(None)
                else:
                    for c in node[2]:
                        walk(c)

            walk(shape)

            def fill(node, numbering, pos):
                if node[0] == "L":
                    v = ("L", numbering[pos[0]])
                    pos[0] += 1
                    return v
                return ("V", node[1],
                        tuple(fill(c, numbering, pos) for c in node[2]))

            for numbering in perms.all_perms(len(slots)):
                out.append(fill(shape, numbering, [0]))
                if len(out) > cap:
                    raise TruncationError(
                        f"tree enumeration exceeded cap {cap}",
                        partial=len(out))
    return sorted(set(out))


def build_tree_multicategory(max_arity=3, max_vertices=2, cap=200000):
    """The multicategory on arities whose operations are numbered trees.

    Colors are the arities 0..max_arity as strings; operations at
    (n_1..n_k; n) are the numbered trees with k vertices of the given
    valences and n inputs, for k <= max_vertices.  Compositions whose
    vertex count escapes the cap are omitted and the table is marked
    partial (the full structure is infinite).
    """
    ops = {}
    structure = {}
    colors = tuple(str(n) for n in range(max_arity + 1))

    def valence_lists(k):
        yield from product(range(max_arity + 1), repeat=k)

    for k in range(max_vertices + 1):
        for vals in valence_lists(k):
            n = (sum(vals) - k + 1) if k else 1
            if n < 0 or n > max_arity:
                continue
            trees = op_hom_set(list(vals), n, cap=cap)
            if not trees:
                continue
            s = (tuple(str(v) for v in vals), str(n))
            ids = []
            for t in trees:
                tid = op_text(t)
                ids.append(tid)
                structure[s, tid] = t
            ops[s] = tuple(sorted(ids))

    action = {}
    for s in ops:
        k = len(s[0])
        for p in perms.all_perms(k):
            table = {}
            for tid in ops[s]:
                acted = op_act(structure[s, tid], p)
                table[tid] = op_text(acted)
            action[s, p] = table

    units = {str(n): op_text(op_identity(n)) for n in range(max_arity + 1)}

    comp = {}
    complete = True
    for s in ops:
        k = len(s[0])
        for tid in ops[s]:
            t = structure[s, tid]
            for slot in range(k):
                for qs in ops:
                    if qs[1] != s[0][slot]:
                        continue
                    rsig = composed_sig(s, slot, qs)
                    for qid in ops[qs]:
                        q = structure[qs, qid]
                        inners = [op_identity(int(v)) for v in s[0]]
                        inners[slot] = q
                        result = op_compose(t, inners)
                        if rsig not in ops:
                            complete = False
                            continue
                        comp[s, tid, slot, qs, qid] = op_text(result)

    table = TableMulticategory(
        collection=FiniteCollection(colors, ops, action),
        units=units, comp=comp, complete=complete, name="trees")
    return table, structure


# ---------------------------------------------------------------------------
# free multicategories


@dataclass
class FreeReport:
    complete: bool
    escapes: int
    term_count: int


def enumerate_terms(gens, max_arity, max_vertices, symmetric):
    """All well-typed generator terms within the caps, canonical forms.

    Non-symmetric terms carry the planar leaf numbering; symmetric terms
    are closed under renumbering and reduced modulo per-vertex actions.
    """
    by_shape = {}  # (vertices, out_color) -> set of planar-numbered terms

    for c in gens.colors:
        by_shape.setdefault((0, c), set()).add(identity_term(c))

    def with_planar_numbering(gsig, gid, children):
        # children come with local numberings; re-offset left to right
        offset = 0
        fixed = []
        for ch in children:
            fixed.append(shift_leaves(ch, offset))
            offset += term_arity(ch)
        return ("N", gsig, gid, tuple(fixed))

    def compositions(total, k):
        if k == 0:
            if total == 0:
                yield ()
            return
        for first in range(total + 1):
            for rest in compositions(total - first, k - 1):
                yield (first,) + rest

    for v in range(1, max_vertices + 1):
        for s in gens.signatures():
            k = len(s[0])
            for gid in gens.ops_at(s):
                for split in compositions(v - 1, k):
                    pools = []
                    for childv, color in zip(split, s[0]):
                        pool = [t for t in by_shape.get((childv, color), ())]
                        pools.append(pool)
                    for combo in product(*pools):
                        t = with_planar_numbering(s, gid, combo)
                        if term_arity(t) <= max_arity:
                            by_shape.setdefault((v, s[1]), set()).add(t)

    planar = set()
    for pool in by_shape.values():
        planar |= pool
    if not symmetric:
        return sorted(planar)
    out = set()
    for t in planar:
        n = term_arity(t)
        for p in perms.all_perms(n):
            out.add(canonical_term(renumber_term(t, p), gens))
    return sorted(out)


def free_multicategory(gens, symmetric, max_arity=3, max_vertices=4,
                       require_complete=False):
    """The free (symmetric) multicategory on a finite collection, within
    caps: terms as operations, grafting as composition, leaf renumbering
    as the symmetric action.  With require_complete, a composition that
    escapes the vertex cap raises instead of marking the table partial."""
    terms = enumerate_terms(gens, max_arity, max_vertices, symmetric)
    by_sig = {}
    structure = {}
    for t in terms:
        s = term_signature(t)
        tid = term_text(t)
        by_sig.setdefault(s, []).append(tid)
        structure[s, tid] = t
    ops = {s: tuple(sorted(v)) for s, v in by_sig.items()}
    term_set = set(terms)

    def canon(t):
        return canonical_term(t, gens) if symmetric else t

    action = {}
    for s in ops:
        n = len(s[0])
        ps = perms.all_perms(n) if symmetric else [perms.identity(n)]
        for p in ps:
            table = {}
            for tid in ops[s]:
                acted = canon(renumber_term(structure[s, tid], p))
                if acted not in term_set:
                    raise StructuralError("renumbering left the term pool")
                table[tid] = term_text(acted)
            action[s, p] = table

    units = {c: term_text(identity_term(c)) for c in gens.colors}

    comp = {}
    escapes = 0
    for s in ops:
        for tid in ops[s]:
            t = structure[s, tid]
            for slot, color in enumerate(s[0]):
                for qs in ops:
                    if qs[1] != color:
                        continue
                    rsig = composed_sig(s, slot, qs)
                    if len(rsig[0]) > max_arity:
                        continue
                    for qid in ops[qs]:
                        w = canon(graft(t, slot, structure[qs, qid]))
                        if w in term_set:
                            comp[s, tid, slot, qs, qid] = term_text(w)
                        else:
                            escapes += 1

    if escapes and require_complete:
        raise TruncationError(
            f"{escapes} compositions escape the vertex cap {max_vertices}")
    table = TableMulticategory(
        collection=FiniteCollection(tuple(sorted(gens.colors)), ops, action),
        units=units, comp=comp, complete=(escapes == 0),
        name="free", symmetric=symmetric)
    return table, FreeReport(escapes == 0, escapes, len(terms))


# ---------------------------------------------------------------------------
# circle product of collections


class LayeredSet:
    """A finite family of elements indexed by signature, with a symmetric
    action; the common interface of base collections and circle products."""

    def __init__(self, by_sig, act_fn, name=""):
        self.by_sig = {s: tuple(sorted(v)) for s, v in by_sig.items() if v}
        self._act = act_fn
        self.name = name

    def signatures(self):
        return sorted(self.by_sig, key=sig_key)

    def elements(self, s):
        return self.by_sig.get(s, ())

    def act(self, elem, p):
        if p == perms.identity(len(p)):
            return elem
        return self._act(elem, p)


def base_layer(coll):
    """Wrap a FiniteCollection: elements are ('op', sig, id)."""
    by_sig = {s: [("op", s, op) for op in coll.ops_at(s)]
              for s in coll.signatures()}

    def act(elem, p):
        _, s, op = elem
        ns, nop = coll.act((s, op), p)
        return ("op", ns, nop)

    return LayeredSet(by_sig, act, name="base")


def elem_signature(elem):
    if elem[0] == "op":
        return elem[1]
    _, root, blocks = elem
    out = elem_signature(root)[1]
    n = sum(len(S) for S, _ in blocks)
    inputs = [None] * n
    for (S, child) in blocks:
        child_sig = elem_signature(child)
        for local, pos in enumerate(sorted(S)):
            inputs[pos] = child_sig[0][local]
    return (tuple(inputs), out)


def canonical_circle(root_elem, blocks, m_layer):
    """Orbit-minimal form of (root, blocks) under permuting blocks
    simultaneously with the action on the root."""
    k = len(blocks)
    best = None
    for p in perms.all_perms(k):
        r = m_layer.act(root_elem, p)
        bs = tuple(blocks[p[j]] for j in range(k))
        cand = ("circ", r, bs)
        if best is None or cand < best:
            best = cand
    return best


def circle_layer(m_layer, n_layer, max_arity):
    """The circle product: one m-element at the root, n-elements on its
    inputs, modulo the simultaneous block permutation."""
    by_sig = {}
    for ms in m_layer.signatures():
        k = len(ms[0])
        for n in range(max_arity + 1):
            for assign in product(range(k), repeat=n) if k else ([()] if n == 0 else []):
                blocks_pos = tuple(
                    tuple(p for p in range(n) if assign[p] == j)
                    for j in range(k))
                for root in m_layer.elements(ms):
                    pools = []
                    ok = True
                    for j, S in enumerate(blocks_pos):
                        wanted_out = ms[0][j]
                        cands = []
                        for cs in n_layer.signatures():
                            if cs[1] == wanted_out and len(cs[0]) == len(S):
                                cands.extend(
                                    (cs, e) for e in n_layer.elements(cs))
                        if not cands:
                            ok = False
                            break
                        pools.append(cands)
                    if not ok and k:
                        continue
                    for combo in product(*pools):
                        blocks = tuple(
                            (blocks_pos[j], combo[j][1]) for j in range(k))
                        e = canonical_circle(root, blocks, m_layer)
                        s = elem_signature(e)
                        by_sig.setdefault(s, set()).add(e)

    def act(elem, p):
        _, root, blocks = elem
        inv = perms.inverse(p)
        new_blocks = []
        for S, child in blocks:
            newS = tuple(sorted(inv[x] for x in S))
            old_sorted = sorted(S)
            # relative order of the block's inputs after the global
            # renumbering: local position t of the new block reads the
            # old local position of the input it came from
            rho = tuple(old_sorted.index(p[x]) for x in newS)
            new_blocks.append((newS, n_layer.act(child, rho)))
        return canonical_circle(root, tuple(new_blocks), m_layer)

    return LayeredSet({s: sorted(v) for s, v in by_sig.items()}, act,
                      name=f"{m_layer.name}∘{n_layer.name}")


def circle_product(m_coll, n_coll, max_arity=3):
    """Circle product of two finite collections, as a collection whose
    operation ids encode the canonical two-level trees."""
    layer = circle_layer(base_layer(m_coll), base_layer(n_coll), max_arity)
    return layered_to_collection(layer)


def elem_text(e):
    if e[0] == "op":
        return f"{sig_key(e[1])}:{e[2]}"
    _, root, blocks = e
    parts = []
    for S, child in blocks:
        positions = "+".join(str(x + 1) for x in S)
        parts.append("{" + positions + "}" + elem_text(child))
    return "(" + elem_text(root) + ")[" + ";".join(parts) + "]"


def layered_to_collection(layer):
    """Present a layered set as a FiniteCollection with encoded ids."""
    ops = {}
    decode = {}
    for s in layer.signatures():
        ids = []
        for e in layer.elements(s):
            eid = elem_text(e)
            ids.append(eid)
            decode[s, eid] = e
        ops[s] = tuple(sorted(ids))
    colors = set()
    for s in ops:
        colors |= set(s[0]) | {s[1]}
    action = {}
    for s in ops:
        n = len(s[0])
        for p in perms.all_perms(n):
            action[s, p] = {
                eid: elem_text(layer.act(decode[s, eid], p))
                for eid in ops[s]}
    return FiniteCollection(tuple(sorted(colors)), ops, action), decode
