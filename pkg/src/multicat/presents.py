"""Multicategories by generators and relations, and the constructions that
produce them: bounded congruence-closure saturation, coproducts, the
Boardman-Vogt tensor product, the arrow family, and pushouts.

Saturation enumerates all well-typed terms within explicit caps (arity and
vertex count), seeds a union-find with the relation pairs, and closes under
three inference moves until a full round adds no merges:

* rewriting any subtree to its class representative,
* substituting a representative into a leaf of both members of a merged
  pair,
* the leaf-renumbering symmetric actions.

Representatives are minimal in (vertex count, encoding), so rewriting
never escapes the caps.  The computed quotient is a sound lower bound for
the presented congruence; ``stabilized`` is reported only when every
relation seed fits inside the caps and the closure reached a merge-free
round, and facts should only be asserted of stabilized results.
"""

from dataclasses import dataclass, field

from . import perms
from .core import (FiniteCollection, TableMulticategory, composed_sig,
                   sig_key)
from .errors import DomainError, PartialInputError, StructuralError
from .trees import (canonical_term, corolla, enumerate_terms, graft,
                    identity_term, renumber_term, term_arity,
                    term_signature, term_text, term_vertices)


@dataclass(frozen=True)
class Presentation:
    generators: FiniteCollection
    relations: tuple  # pairs of terms with equal signatures
    name: str = ""

    def __post_init__(self):
        for left, right in self.relations:
            ls, rs = term_signature(left), term_signature(right)
            if ls != rs:
                raise StructuralError(
                    f"relation sides have different signatures: "
                    f"{sig_key(ls)} vs {sig_key(rs)}")


@dataclass
class SaturationReport:
    stabilized: bool
    rounds: int
    term_count: int
    class_counts: dict
    seed_escapes: int
    comp_escapes: int
    caps: tuple

    def to_json(self):
        return {
            "stabilized": self.stabilized,
            "rounds": self.rounds,
            "terms": self.term_count,
            "classes": {k: v for k, v in sorted(self.class_counts.items())},
            "seed_escapes": self.seed_escapes,
            "comp_escapes": self.comp_escapes,
            "caps": {"max_arity": self.caps[0], "max_vertices": self.caps[1]},
        }


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True

    def classes(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def _term_key(t):
    return (term_vertices(t), t)


def subtree_sites(t, path=()):
    """Proper vertex subtrees of t, as (path, node) pairs."""
    if t[0] == "L":
        return
    for i, child in enumerate(t[3]):
        if child[0] == "N":
            yield path + (i,), child
            yield from subtree_sites(child, path + (i,))


def extract_standalone(node):
    """Rank-normalize the leaf numbers of a subtree; returns the standalone
    term and the rank -> original index mapping."""
    indices = sorted(idx for _, _, idx in _leaves(node))
    rank = {g: r for r, g in enumerate(indices)}

    def go(n):
        if n[0] == "L":
            return ("L", n[1], rank[n[2]])
        return ("N", n[1], n[2], tuple(go(c) for c in n[3]))

    return go(node), indices


def _leaves(node):
    if node[0] == "L":
        yield node
    else:
        for c in node[3]:
            yield from _leaves(c)


def embed_standalone(node, mapping):
    def go(n):
        if n[0] == "L":
            return ("L", n[1], mapping[n[2]])
        return ("N", n[1], n[2], tuple(go(c) for c in n[3]))

    return go(node)


def replace_path(t, path, new_node):
    if not path:
        return new_node
    i = path[0]
    children = list(t[3])
    children[i] = replace_path(children[i], path[1:], new_node)
    return ("N", t[1], t[2], tuple(children))


@dataclass
class Saturation:
    """A saturated presentation: the quotient table plus class lookup."""

    table: TableMulticategory
    report: SaturationReport
    presentation: Presentation
    rep_of: dict = field(repr=False, default_factory=dict)
    max_arity: int = 3
    max_vertices: int = 4

    def class_of(self, term):
        """Representative of a term's congruence class, reducing oversized
        terms by rewriting subtrees to representatives; None when the term
        cannot be brought inside the caps."""
        gens = self.presentation.generators
        t = canonical_term(term, gens)
        if t in self.rep_of:
            return self.rep_of[t]
        if t[0] == "L":
            return t
        children = []
        for child in t[3]:
            if child[0] == "L":
                children.append(child)
                continue
            std, mapping = extract_standalone(child)
            red = self.class_of(std)
            if red is None:
                return None
            children.append(embed_standalone(red, mapping))
        t2 = canonical_term(("N", t[1], t[2], tuple(children)), gens)
        return self.rep_of.get(t2)


def saturate(presentation, max_arity=3, max_vertices=4, max_rounds=200):
    """Bounded congruence closure of a presentation; see module docstring."""
    gens = presentation.generators
    terms = enumerate_terms(gens, max_arity, max_vertices, symmetric=True)
    term_set = set(terms)
    uf = _UnionFind(terms)

    canon_cache = {}

    def canon(t):
        got = canon_cache.get(t)
        if got is None:
            got = canonical_term(t, gens)
            canon_cache[t] = got
        return got

    vert = {t: term_vertices(t) for t in terms}
    sig_of = {t: term_signature(t) for t in terms}

    seed_escapes = 0
    for left, right in presentation.relations:
        l, r = canon(left), canon(right)
        if l in term_set and r in term_set:
            uf.union(l, r)
        else:
            seed_escapes += 1

    def rep_map():
        reps = {}
        for root, members in uf.classes().items():
            rep = min(members, key=_term_key)
            for m in members:
                reps[m] = rep
        return reps

    rounds = 0
    stabilized = False
    graft_done = set()
    sites = {t: tuple(subtree_sites(t)) for t in terms}
    extracted = {}
    for t in terms:
        ex = []
        for path, node in sites[t]:
            std, mapping = extract_standalone(node)
            ex.append((path, canon(std), tuple(mapping)))
        extracted[t] = tuple(ex)

    while rounds < max_rounds:
        rounds += 1
        reps = rep_map()
        merged = False

        # rewrite subtrees to their representatives
        for u in terms:
            for path, std_c, mapping in extracted[u]:
                rep = reps.get(std_c)
                if rep is None or rep == std_c:
                    continue
                u2 = canon(replace_path(u, path,
                                        embed_standalone(rep, list(mapping))))
                if u2 in term_set:
                    merged |= uf.union(u, u2)

        # substitute representatives into the leaves of merged pairs;
        # each (term, slot, argument) instance runs once over the whole run
        by_color = {}
        for rep in set(reps.values()):
            by_color.setdefault(sig_of[rep][1], []).append(rep)
        for u in terms:
            ru = reps[u]
            if ru == u:
                continue
            s = sig_of[u]
            for i, color in enumerate(s[0]):
                for r in by_color.get(color, ()):
                    key = (u, i, r)
                    if key in graft_done:
                        continue
                    if (len(s[0]) + len(sig_of[r][0]) - 1 > max_arity
                            or vert[u] + vert[r] > max_vertices):
                        continue
                    graft_done.add(key)
                    w1 = canon(graft(u, i, r))
                    w2 = canon(graft(ru, i, r))
                    if w1 in term_set and w2 in term_set:
                        merged |= uf.union(w1, w2)

        # close under the symmetric actions
        for u in terms:
            ru = reps[u]
            if ru == u:
                continue
            n = term_arity(u)
            for p in perms.all_perms(n):
                merged |= uf.union(canon(renumber_term(u, p)),
                                   canon(renumber_term(ru, p)))

        if not merged:
            stabilized = True
            break

    reps = rep_map()
    rep_of = dict(reps)

    classes_by_sig = {}
    for rep in sorted(set(reps.values()), key=_term_key):
        classes_by_sig.setdefault(term_signature(rep), []).append(rep)

    ops = {}
    structure = {}
    for s, rs in classes_by_sig.items():
        ids = []
        for rep in rs:
            tid = term_text(rep)
            ids.append(tid)
            structure[s, tid] = rep
        ops[s] = tuple(sorted(ids))

    action = {}
    for s in ops:
        n = len(s[0])
        for p in perms.all_perms(n):
            table = {}
            for tid in ops[s]:
                acted = reps[canon(renumber_term(structure[s, tid], p))]
                table[tid] = term_text(acted)
            action[s, p] = table

    units = {}
    for c in gens.colors:
        units[c] = term_text(reps[identity_term(c)])

    sat = Saturation(
        table=None, report=None, presentation=presentation,
        rep_of=rep_of, max_arity=max_arity, max_vertices=max_vertices)

    comp = {}
    comp_escapes = 0
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
                        w = graft(t, slot, structure[qs, qid])
                        red = sat.class_of(w)
                        if red is None:
                            comp_escapes += 1
                            continue
                        comp[s, tid, slot, qs, qid] = term_text(red)

    table = TableMulticategory(
        collection=FiniteCollection(tuple(sorted(gens.colors)), ops, action),
        units=units, comp=comp, complete=(comp_escapes == 0),
        name=presentation.name or "saturated")
    report = SaturationReport(
        stabilized=stabilized and seed_escapes == 0,
        rounds=rounds,
        term_count=len(terms),
        class_counts={sig_key(s): len(v) for s, v in ops.items()},
        seed_escapes=seed_escapes,
        comp_escapes=comp_escapes,
        caps=(max_arity, max_vertices))
    sat.table = table
    sat.report = report
    return sat


# ---------------------------------------------------------------------------
# coproduct and tensor presentations


def _pair_color(a, b):
    return f"{a}.{b}"


def _left_id(pid, b):
    return f"p:{pid}:{b}"


def _right_id(a, qid):
    return f"q:{a}:{qid}"


def _require_complete(M):
    if not M.complete:
        raise PartialInputError(
            f"{M.name or 'input'} is marked partial; refusing")


def _tensor_generators(P, Q):
    """Generator collection on paired colors: every non-unit operation of P
    at a fixed color of Q and vice versa, actions inherited."""
    ops = {}
    action = {}

    def add_side(M, other_colors, fixed_right):
        for s in M.signatures():
            for op in M.ops_at(s):
                if M.is_unit((s, op)):
                    continue
                for c in other_colors:
                    if fixed_right:
                        gsig = (tuple(_pair_color(x, c) for x in s[0]),
                                _pair_color(s[1], c))
                        gid = _left_id(op, c)
                    else:
                        gsig = (tuple(_pair_color(c, x) for x in s[0]),
                                _pair_color(c, s[1]))
                        gid = _right_id(c, op)
                    ops.setdefault(gsig, []).append(gid)

    add_side(P, Q.colors, True)
    add_side(Q, P.colors, False)
    ops = {s: tuple(sorted(v)) for s, v in ops.items()}

    def act_tables(M, other_colors, fixed_right):
        for s in M.signatures():
            n = len(s[0])
            for p in perms.all_perms(n):
                base = M.collection.action[s, p]
                for c in other_colors:
                    if fixed_right:
                        gsig = (tuple(_pair_color(x, c) for x in s[0]),
                                _pair_color(s[1], c))
                        table = {_left_id(op, c): _left_id(im, c)
                                 for op, im in base.items()
                                 if not M.is_unit((s, op))}
                    else:
                        gsig = (tuple(_pair_color(c, x) for x in s[0]),
                                _pair_color(c, s[1]))
                        table = {_right_id(c, op): _right_id(c, im)
                                 for op, im in base.items()
                                 if not M.is_unit((s, op))}
                    if gsig in ops:
                        action.setdefault((gsig, p), {}).update(table)

    act_tables(P, Q.colors, True)
    act_tables(Q, P.colors, False)
    colors = tuple(sorted(
        _pair_color(a, b) for a in P.colors for b in Q.colors))
    return FiniteCollection(colors, ops, action)


def _side_relations(M, other_colors, fixed_right, gens):
    """Multifunctoriality of each slice: the composition table of one side
    becomes term relations at every fixed color of the other side."""
    rels = []

    def gref(s, op, c):
        if M.is_unit((s, op)):
            color = (_pair_color(s[1], c) if fixed_right
                     else _pair_color(c, s[1]))
            return identity_term(color)
        if fixed_right:
            gsig = (tuple(_pair_color(x, c) for x in s[0]),
                    _pair_color(s[1], c))
            return corolla(gsig, _left_id(op, c))
        gsig = (tuple(_pair_color(c, x) for x in s[0]),
                _pair_color(c, s[1]))
        return corolla(gsig, _right_id(c, op))

    for (psig, p, slot, qsig, q), r in M.comp.items():
        rsig = composed_sig(psig, slot, qsig)
        if M.is_unit((psig, p)) or M.is_unit((qsig, q)):
            continue
        for c in other_colors:
            left = graft(gref(psig, p, c), slot, gref(qsig, q, c))
            right = gref(rsig, r, c)
            rels.append((canonical_term(left, gens),
                         canonical_term(right, gens)))
    return rels


def coproduct(P, Q, allow_partial=False):
    """The presentation whose saturation is the coproduct: slices of P and
    Q at each other's colors, with no interchange relations."""
    if not allow_partial:
        _require_complete(P)
        _require_complete(Q)
    gens = _tensor_generators(P, Q)
    rels = []
    rels += _side_relations(P, Q.colors, True, gens)
    rels += _side_relations(Q, P.colors, False, gens)
    return Presentation(gens, tuple(rels),
                        name=f"{P.name or 'P'}+{Q.name or 'Q'}")


def interchange_relations(P, Q, gens):
    """For every pair of non-unit operations, the two composites around the
    bilinearity square agree up to the block transposition."""
    rels = []
    for ps in P.signatures():
        m = len(ps[0])
        for phi in P.ops_at(ps):
            if P.is_unit((ps, phi)):
                continue
            for qs in Q.signatures():
                n = len(qs[0])
                for psi in Q.ops_at(qs):
                    if Q.is_unit((qs, psi)):
                        continue
                    a, b = ps[1], qs[1]
                    # root a x psi with phi x b_j grafted on each slot
                    root_r = (tuple(_pair_color(a, y) for y in qs[0]),
                              _pair_color(a, b))
                    left = corolla(root_r, _right_id(a, psi))
                    for j in reversed(range(n)):
                        arg_sig = (tuple(_pair_color(x, qs[0][j])
                                         for x in ps[0]),
                                   _pair_color(a, qs[0][j]))
                        left = graft(left, j,
                                     corolla(arg_sig, _left_id(phi, qs[0][j])))
                    # root phi x b with a_i x psi grafted on each slot
                    root_l = (tuple(_pair_color(x, b) for x in ps[0]),
                              _pair_color(a, b))
                    right = corolla(root_l, _left_id(phi, b))
                    for i in reversed(range(m)):
                        arg_sig = (tuple(_pair_color(ps[0][i], y)
                                         for y in qs[0]),
                                   _pair_color(ps[0][i], b))
                        right = graft(right, i,
                                      corolla(arg_sig, _right_id(ps[0][i], psi)))
                    shuffled = renumber_term(
                        right, perms.transpose_shuffle(n, m))
                    rels.append((canonical_term(left, gens),
                                 canonical_term(shuffled, gens)))
    return rels


def bv_tensor(P, Q, max_arity=3, max_vertices=4, allow_partial=False):
    """The universal bilinear target: the coproduct presentation extended
    by the interchange relations, saturated within caps."""
    pres = coproduct(P, Q, allow_partial=allow_partial)
    rels = list(pres.relations)
    rels += interchange_relations(P, Q, pres.generators)
    full = Presentation(pres.generators, tuple(rels),
                        name=f"{P.name or 'P'}(x){Q.name or 'Q'}")
    return saturate(full, max_arity=max_arity, max_vertices=max_vertices)


# ---------------------------------------------------------------------------
# the arrow family


def arrow_multicategory(P, n):
    """Colors 0..n; a k-ary operation from x_1..x_k to x exists for every
    k-ary operation of the single-colored P whenever max(x_i) <= x, with
    composition and actions read off P."""
    if len(P.colors) != 1:
        raise DomainError("the arrow construction needs a single color")
    if n < 0:
        raise DomainError("level must be >= 0")
    if n == 0:
        return P
    base = P.colors[0]
    colors = tuple(str(i) for i in range(n + 1))

    def allowed(s):
        return all(int(c) <= int(s[1]) for c in s[0])

    ops = {}
    action = {}
    from itertools import product as _product

    for s in P.signatures():
        k = len(s[0])
        for combo in _product(colors, repeat=k):
            for out in colors:
                new_sig = (combo, out)
                if not allowed(new_sig):
                    continue
                ops[new_sig] = tuple(P.ops_at(s))
                for p in perms.all_perms(k):
                    base_table = P.collection.action[s, p]
                    action[new_sig, p] = dict(base_table)

    units = {c: P.units[base] for c in colors}
    comp = {}
    for (psig, p, slot, qsig, q), r in P.comp.items():
        k = len(psig[0])
        kq = len(qsig[0])
        for combo in _product(colors, repeat=k):
            for out in colors:
                new_p = (combo, out)
                if not allowed(new_p):
                    continue
                for qcombo in _product(colors, repeat=kq):
                    new_q = (qcombo, combo[slot])
                    if not allowed(new_q):
                        continue
                    comp[new_p, p, slot, new_q, q] = r
    return TableMulticategory(
        collection=FiniteCollection(colors, ops, action),
        units=units, comp=comp, complete=P.complete,
        name=f"{P.name or 'P'}^{n}")


# ---------------------------------------------------------------------------
# pushouts of multifunctor spans


def pushout(F, G, allow_partial=False):
    """Presentation of the pushout of B <- A -> C along multifunctors F, G:
    generators from B and C, their composition relations, and one relation
    identifying the two images of every operation of A."""
    A, B, C = F.source, F.target, G.target
    if G.source is not A:
        raise DomainError("the span must share its source")
    if not allow_partial:
        for M in (A, B, C):
            _require_complete(M)

    # colors: quotient of the disjoint union by F(a) ~ G(a)
    items = [("b", c) for c in B.colors] + [("c", c) for c in C.colors]
    uf = _UnionFind(items)
    for a in A.colors:
        uf.union(("b", F.object_map[a]), ("c", G.object_map[a]))
    color_name = {}
    for item in items:
        root = uf.find(item)
        cls = sorted(x for x in items if uf.find(x) == root)
        color_name[item] = ".".join(f"{side}_{c}" for side, c in cls)

    def side_sig(side, s):
        return (tuple(color_name[side, c] for c in s[0]),
                color_name[side, s[1]])

    ops = {}
    action = {}

    def gid(side, op):
        return f"{side}:{op}"

    for side, M in (("b", B), ("c", C)):
        for s in M.signatures():
            new_sig = side_sig(side, s)
            ids = [gid(side, op) for op in M.ops_at(s)
                   if not M.is_unit((s, op))]
            if ids:
                ops.setdefault(new_sig, []).extend(ids)
        for s in M.ops:
            n = len(s[0])
            new_sig = side_sig(side, s)
            for p in perms.all_perms(n):
                table = {gid(side, op): gid(side, im)
                         for op, im in M.collection.action[s, p].items()
                         if not M.is_unit((s, op))}
                if table:
                    action.setdefault((new_sig, p), {}).update(table)
    ops = {s: tuple(sorted(v)) for s, v in ops.items()}
    colors = tuple(sorted(set(color_name.values())))
    gens = FiniteCollection(colors, ops, action)

    def gref(side, M, s, op):
        if M.is_unit((s, op)):
            return identity_term(color_name[side, s[1]])
        return corolla(side_sig(side, s), gid(side, op))

    rels = []
    for side, M in (("b", B), ("c", C)):
        for (psig, p, slot, qsig, q), r in M.comp.items():
            if M.is_unit((psig, p)) or M.is_unit((qsig, q)):
                continue
            rsig = composed_sig(psig, slot, qsig)
            left = graft(gref(side, M, psig, p), slot, gref(side, M, qsig, q))
            rels.append((canonical_term(left, gens),
                         canonical_term(gref(side, M, rsig, r), gens)))
    for s in A.signatures():
        for op in A.ops_at(s):
            fs = (tuple(F.object_map[c] for c in s[0]), F.object_map[s[1]])
            gs = (tuple(G.object_map[c] for c in s[0]), G.object_map[s[1]])
            fop = F.op_maps[s][op] if not A.is_unit((s, op)) else None
            if A.is_unit((s, op)):
                continue
            gop = G.op_maps[s][op]
            rels.append((
                canonical_term(gref("b", B, fs, fop), gens),
                canonical_term(gref("c", C, gs, gop), gens)))
    return Presentation(gens, tuple(rels), name="pushout")
