"""Two-sided module structures on collections, bar-style resolutions, and
the endomorphism multicategory of a right module.

A bimodule has inputs colored by the right-acting multicategory and
outputs by the left-acting one.  The right action substitutes operations
into single inputs; the left action composes an operation onto a tuple of
module elements.  The compatibility axiom relates the two whenever both
sides are defined inside the declared support.

Bar truncations are nested circle-product elements; face maps merge two
adjacent layers (the module actions at the ends, composition in the
middle), degeneracy maps insert a unit layer.
"""

from dataclasses import dataclass, field
from itertools import product

from . import perms
from .core import (FiniteCollection, LawReport, TableMulticategory,
                   TruncatedSimplicialSet, composed_sig, sig_key)
from .errors import BudgetExceededError, StructuralError
from .homcalc import Multifunctor
from .presents import _UnionFind
from .trees import base_layer, canonical_circle, circle_layer


@dataclass
class Bimodule:
    left: TableMulticategory
    right: TableMulticategory
    collection: FiniteCollection
    left_table: dict = field(repr=False, default_factory=dict)
    right_table: dict = field(repr=False, default_factory=dict)
    name: str = ""

    def signatures(self):
        return self.collection.signatures()

    def refs(self):
        return self.collection.refs()

    def act(self, mref, p):
        return self.collection.act(mref, p)

    def act_right1(self, mref, slot, qref):
        if self.right.is_unit(qref):
            return mref
        got = self.right_table.get((mref, slot, qref))
        if got is None:
            raise StructuralError(
                f"missing right action {mref} o_{slot} {qref}")
        return got

    def try_act_right1(self, mref, slot, qref):
        try:
            return self.act_right1(mref, slot, qref)
        except StructuralError:
            return None

    def act_right(self, mref, qrefs):
        from .core import _gamma_by_size

        return _gamma_by_size(self.act_right1, mref, qrefs)

    def act_left(self, pref, mrefs):
        if self.left.is_unit(pref):
            return mrefs[0]
        got = self.left_table.get((pref, tuple(mrefs)))
        if got is None:
            raise StructuralError(f"missing left action {pref} on {mrefs}")
        return got

    def try_act_left(self, pref, mrefs):
        try:
            return self.act_left(pref, mrefs)
        except StructuralError:
            return None


def module_from_multicategory(M, max_arity=None):
    """M as a bimodule over itself on both sides; actions are composition."""
    cap = max_arity if max_arity is not None else M.max_arity()
    coll = M.collection
    right_table = {}
    for (psig, p, slot, qsig, q), r in M.comp.items():
        rsig = composed_sig(psig, slot, qsig)
        right_table[((psig, p), slot, (qsig, q))] = (rsig, r)
    left_table = {}
    refs = list(coll.refs())
    for s in M.signatures():
        for p in M.ops_at(s):
            pools = [[m for m in refs if m[0][1] == c] for c in s[0]]
            for mrefs in product(*pools):
                if sum(len(m[0][0]) for m in mrefs) > cap:
                    continue
                try:
                    left_table[(s, p), tuple(mrefs)] = M.gamma(
                        (s, p), list(mrefs))
                except StructuralError:
                    continue
    return Bimodule(left=M, right=M, collection=coll,
                    left_table=left_table, right_table=right_table,
                    name=f"{M.name}-bimod")


def check_bimodule(M, max_violations=25):
    """Left laws, right laws, the symmetric-action laws, and the two-sided
    compatibility axiom, exhaustively over the declared support; instances
    whose intermediate values fall outside the support are skipped."""
    report = LawReport()
    coll = M.collection

    for s in coll.signatures():
        n = len(s[0])
        for p in perms.all_perms(n):
            table = coll.action.get((s, p))
            if table is None or set(table) != set(coll.ops[s]):
                report.fail("action-total", f"{sig_key(s)} perm {p}")
            report.note("action-total")
    if report.violations:
        return report

    mrefs_all = list(coll.refs())

    def q_ops(color):
        for qs in M.right.signatures():
            if qs[1] == color:
                for q in M.right.ops_at(qs):
                    yield (qs, q)

    # right unit law
    for mref in mrefs_all:
        s = mref[0]
        for slot, color in enumerate(s[0]):
            got = M.try_act_right1(mref, slot, M.right.unit_ref(color))
            report.note("right-unit")
            if got is not None and got != mref:
                report.fail("right-unit", f"{mref} slot {slot}")

    # right associativity, both families
    for mref in mrefs_all:
        if len(report.violations) >= max_violations:
            return report
        s = mref[0]
        for i, color in enumerate(s[0]):
            for qref in q_ops(color):
                mq = M.try_act_right1(mref, i, qref)
                if mq is None:
                    continue
                k = len(qref[0][0])
                for j, color2 in enumerate(qref[0][0]):
                    for rref in q_ops(color2):
                        qr = M.right.try_compose1(qref, j, rref)
                        left = M.try_act_right1(mq, i + j, rref)
                        right = (None if qr is None
                                 else M.try_act_right1(mref, i, qr))
                        report.note("right-assoc")
                        if (left is not None and right is not None
                                and left != right):
                            report.fail("right-assoc",
                                        f"{mref} o_{i} {qref} o_{j} {rref}")
                for j, color2 in enumerate(s[0]):
                    if j <= i:
                        continue
                    for rref in q_ops(color2):
                        mr = M.try_act_right1(mref, j, rref)
                        left = M.try_act_right1(mq, j + k - 1, rref)
                        right = (None if mr is None
                                 else M.try_act_right1(mr, i, qref))
                        report.note("right-parallel")
                        if (left is not None and right is not None
                                and left != right):
                            report.fail("right-parallel",
                                        f"{mref} slots {i},{j}")

    # right equivariance
    for mref in mrefs_all:
        s = mref[0]
        n = len(s[0])
        for sigma in perms.all_perms(n):
            acted = M.act(mref, sigma)
            for i in range(n):
                for qref in q_ops(s[0][sigma[i]]):
                    base = M.try_act_right1(mref, sigma[i], qref)
                    left = M.try_act_right1(acted, i, qref)
                    report.note("right-equivariance")
                    if base is not None and left is not None:
                        k = len(qref[0][0])
                        want = M.act(base, perms.expand_outer(sigma, i, k))
                        if left != want:
                            report.fail("right-equivariance",
                                        f"{mref} perm {sigma} slot {i}")

    def m_tuples(colors):
        pools = [[m for m in mrefs_all if m[0][1] == c] for c in colors]
        yield from product(*pools)

    # left associativity and equivariance
    for s in M.left.signatures():
        if len(report.violations) >= max_violations:
            return report
        n = len(s[0])
        for p in M.left.ops_at(s):
            pref = (s, p)
            for mrefs in m_tuples(s[0]):
                pm = M.try_act_left(pref, mrefs)
                if pm is None:
                    continue
                for slot, color in enumerate(s[0]):
                    for qs in M.left.signatures():
                        if qs[1] != color:
                            continue
                        for q in M.left.ops_at(qs):
                            pq = M.left.try_compose1(pref, slot, (qs, q))
                            if pq is None:
                                continue
                            for inner in m_tuples(qs[0]):
                                qm = M.try_act_left((qs, q), inner)
                                if qm is None:
                                    continue
                                nested = (mrefs[:slot] + (qm,)
                                          + mrefs[slot + 1:])
                                left_side = M.try_act_left(pref, nested)
                                flat = (mrefs[:slot] + tuple(inner)
                                        + mrefs[slot + 1:])
                                right_side = M.try_act_left(pq, flat)
                                report.note("left-assoc")
                                if (left_side is not None
                                        and right_side is not None
                                        and left_side != right_side):
                                    report.fail(
                                        "left-assoc",
                                        f"{pref} o_{slot} {(qs, q)}")
                for sigma in perms.all_perms(n):
                    p2 = M.left.act(pref, sigma)
                    permuted = tuple(mrefs[sigma[t]] for t in range(n))
                    left_side = M.try_act_left(p2, permuted)
                    report.note("left-equivariance")
                    if left_side is not None:
                        sizes = [len(m[0][0]) for m in mrefs]
                        want = M.act(pm, perms.block_permutation(sigma, sizes))
                        if left_side != want:
                            report.fail("left-equivariance",
                                        f"{pref} perm {sigma}")

    # compatibility of the two actions
    for s in M.left.signatures():
        if len(report.violations) >= max_violations:
            return report
        for p in M.left.ops_at(s):
            pref = (s, p)
            for mrefs in m_tuples(s[0]):
                pm = M.try_act_left(pref, mrefs)
                if pm is None:
                    continue
                pools = [list(product(*[list(q_ops(c)) for c in m[0][0]]))
                         for m in mrefs]
                for combo in product(*pools):
                    flat = [q for block in combo for q in block]
                    try:
                        left_side = M.act_right(pm, flat)
                    except StructuralError:
                        left_side = None
                    acted = []
                    good = True
                    for m, block in zip(mrefs, combo):
                        try:
                            acted.append(M.act_right(m, list(block)))
                        except StructuralError:
                            good = False
                            break
                    right_side = (M.try_act_left(pref, tuple(acted))
                                  if good else None)
                    report.note("compatibility")
                    if (left_side is not None and right_side is not None
                            and left_side != right_side):
                        report.fail("compatibility", f"{pref} on {mrefs}")
                        if len(report.violations) >= max_violations:
                            return report
    return report


# ---------------------------------------------------------------------------
# bar truncations


@dataclass
class BarComplexTruncation:
    simplicial: TruncatedSimplicialSet
    augmentation: dict  # level-0 element -> coequalizer class representative
    basepoint: dict = field(default_factory=dict)  # (n, level-0 elem) -> elem

    def check_identities(self):
        return self.simplicial.check_identities()


def _reposition(blocks):
    """Inline the sub-blocks of circle children using the enclosing block
    positions; order follows the merged root's input order."""
    out = []
    for S, child in blocks:
        mapping = sorted(S)
        _, _, subblocks = child
        for S2, grand in subblocks:
            out.append((tuple(mapping[t] for t in sorted(S2)), grand))
    return tuple(out)


def bar_complex(X, P, Y, n_max=3, max_arity=2):
    """Levels 0..n_max of the two-sided bar construction on a right module
    X, the multicategory P, and a left module Y: level n is the circle
    product with n middle layers, faces act or compose adjacent layers,
    degeneracies insert units, and the augmentation is the coequalizer of
    the two faces off level 1."""
    p_layer = base_layer(P.collection)
    x_layer = base_layer(X.collection)
    y_layer = base_layer(Y.collection)

    towers = [y_layer]
    for _ in range(n_max):
        towers.append(circle_layer(p_layer, towers[-1], max_arity))
    levels = [circle_layer(x_layer, towers[n], max_arity)
              for n in range(n_max + 1)]

    def x_act(root_elem, p_elems):
        rs, rop = X.act_right((root_elem[1], root_elem[2]),
                              [(e[1], e[2]) for e in p_elems])
        return ("op", rs, rop)

    def p_act(root_elem, p_elems):
        rs, rop = P.gamma((root_elem[1], root_elem[2]),
                          [(e[1], e[2]) for e in p_elems])
        return ("op", rs, rop)

    def y_merge(elem):
        # ('circ', p, blocks of bare Y) -> bare Y element, inputs
        # renumbered back to ascending position order
        _, root, blocks = elem
        order = []
        for S, _ in blocks:
            order.extend(sorted(S))
        rs, rop = Y.act_left((root[1], root[2]),
                             [(c[1], c[2]) for _, c in blocks])
        if order:
            rho = perms.inverse(tuple(order))
            if rho != perms.identity(len(rho)):
                rs, rop = Y.act((rs, rop), rho)
        return ("op", rs, rop)

    def merge_head(elem, act, m_layer):
        _, root, blocks = elem
        new_root = act(root, [child[1] for _, child in blocks])
        return canonical_circle(new_root, _reposition(blocks), m_layer)

    def face_at(elem, i, n):
        if i == 0:
            return merge_head(elem, x_act, x_layer)

        def descend(e, depth):
            # e's root is the middle layer numbered depth
            if depth == i:
                if i == n:
                    return y_merge(e)
                return merge_head(e, p_act, p_layer)
            _, r, bs = e
            new_bs = tuple((S, descend(child, depth + 1)) for S, child in bs)
            return canonical_circle(r, new_bs, p_layer)

        _, root, blocks = elem
        new_blocks = tuple((S, descend(child, 1)) for S, child in blocks)
        return canonical_circle(root, new_blocks, x_layer)

    def elem_out(e):
        if e[0] == "op":
            return e[1][1]
        return elem_out(e[1])

    def elem_arity(e):
        if e[0] == "op":
            return len(e[1][0])
        _, _, bs = e
        return sum(len(S) for S, _ in bs)

    def wrap_unit(e):
        unit = P.unit_ref(elem_out(e))
        positions = tuple(range(elem_arity(e)))
        return ("circ", ("op",) + unit, ((positions, e),))

    def degeneracy_at(elem, j, n):
        def descend(e, depth, layer):
            # wrap the children of the layer-j heads (depth counts the
            # middle layer of e's root; the outer root is depth 0)
            _, r, bs = e
            if depth == j:
                new_bs = tuple((S, wrap_unit(child)) for S, child in bs)
            else:
                new_bs = tuple((S, descend(child, depth + 1, p_layer))
                               for S, child in bs)
            return canonical_circle(r, new_bs, layer)

        return descend(elem, 0, x_layer)

    level_elems = []
    for n in range(n_max + 1):
        elems = []
        for s in levels[n].signatures():
            elems.extend(levels[n].elements(s))
        level_elems.append(tuple(sorted(elems)))

    faces = {}
    for n in range(1, n_max + 1):
        for i in range(n + 1):
            faces[n, i] = {e: face_at(e, i, n) for e in level_elems[n]}
    degeneracies = {}
    for n in range(n_max):
        for j in range(n + 1):
            degeneracies[n, j] = {e: degeneracy_at(e, j, n)
                                  for e in level_elems[n]}

    simplicial = TruncatedSimplicialSet(
        depth=n_max, levels=tuple(level_elems),
        faces=faces, degeneracies=degeneracies)

    uf = _UnionFind(list(level_elems[0]))
    if n_max >= 1:
        for e in level_elems[1]:
            uf.union(faces[1, 0][e], faces[1, 1][e])
    augmentation = {}
    for root, members in uf.classes().items():
        rep = min(members)
        for m in members:
            augmentation[m] = rep

    return BarComplexTruncation(simplicial=simplicial,
                                augmentation=augmentation)


def hochschild(P, n_max=3, max_arity=2):
    """The bar construction of P on itself, plus the degeneracy basepoint
    from level 0 into every computed level."""
    mod = module_from_multicategory(P, max_arity=max_arity)
    bar = bar_complex(mod, P, mod, n_max=n_max, max_arity=max_arity)
    basepoint = {}
    for e in bar.simplicial.levels[0]:
        cur = e
        basepoint[0, e] = cur
        for n in range(n_max):
            cur = bar.simplicial.degeneracies[n, 0][cur]
            basepoint[n + 1, e] = cur
    bar.basepoint = basepoint
    return bar


def hochschild_comparison(P, bar):
    """Level-0 elements composed down to operations of P; constant on the
    coequalizer classes and bijective onto P when P is complete."""
    out = {}
    for e in bar.simplicial.levels[0]:
        _, root, blocks = e
        order = []
        for S, _ in blocks:
            order.extend(sorted(S))
        ref = P.gamma((root[1], root[2]),
                      [(c[1], c[2]) for _, c in blocks])
        if order:
            rho = perms.inverse(tuple(order))
            if rho != perms.identity(len(rho)):
                ref = P.act(ref, rho)
        out[e] = ref
    return out


# ---------------------------------------------------------------------------
# right modules, restriction


@dataclass
class RightModule:
    over: TableMulticategory
    collection: FiniteCollection
    table: dict = field(repr=False, default_factory=dict)
    name: str = ""

    def act1(self, mref, slot, qref):
        if self.over.is_unit(qref):
            return mref
        got = self.table.get((mref, slot, qref))
        if got is None:
            raise StructuralError(
                f"missing right action {mref} o_{slot} {qref}")
        return got

    def try_act1(self, mref, slot, qref):
        try:
            return self.act1(mref, slot, qref)
        except StructuralError:
            return None

    def act(self, mref, p):
        return self.collection.act(mref, p)

    def refs(self):
        return self.collection.refs()

    def out_colors(self):
        return tuple(sorted({s[1] for s in self.collection.ops}))


def right_module_from(M):
    if isinstance(M, RightModule):
        return M
    if isinstance(M, Bimodule):
        return RightModule(over=M.right, collection=M.collection,
                           table=M.right_table, name=M.name)
    mod = module_from_multicategory(M)
    return RightModule(over=M, collection=M.collection,
                       table=mod.right_table, name=M.name)


def restrict_module(N, psi):
    """Reindex a right module along a multifunctor into its acting
    multicategory: same elements, inputs recolored through the object map,
    action through the operation maps."""
    R = psi.source
    S = psi.target
    fibers = {c: [d for d in R.colors if psi.object_map[d] == c]
              for c in S.colors}
    ops = {}
    origin = {}
    for s in N.collection.signatures():
        for combo in product(*[fibers[c] for c in s[0]]):
            new_sig = (tuple(combo), s[1])
            ops[new_sig] = tuple(N.collection.ops_at(s))
            origin[new_sig] = s
    ops = {s: v for s, v in ops.items() if v}
    action = {}
    for s in ops:
        n = len(s[0])
        for p in perms.all_perms(n):
            action[s, p] = dict(N.collection.action[(origin[s], p)])
    colors = tuple(sorted(set(R.colors) | {s[1] for s in ops}))
    coll = FiniteCollection(colors, ops, action)

    table = {}
    for s in ops:
        for m in ops[s]:
            for slot, color in enumerate(s[0]):
                for qs in R.signatures():
                    if qs[1] != color:
                        continue
                    for q in R.ops_at(qs):
                        base = N.try_act1((origin[s], m), slot,
                                          psi.map_ref((qs, q)))
                        if base is None:
                            continue
                        rsig = composed_sig(s, slot, qs)
                        table[((s, m), slot, (qs, q))] = (rsig, base[1])
    return RightModule(over=R, collection=coll, table=table,
                       name=f"restrict({N.name})")


# ---------------------------------------------------------------------------
# tensor powers of a right module and module homomorphisms


def tensor_elements(N, factors, max_arity):
    """Elements of the ordered tensor of the slices N(-; b_j): a shuffle
    decomposition of the input positions with one element per factor.
    Keys are (input colors, factors)."""
    out = {}
    k = len(factors)
    for n in range(max_arity + 1):
        assigns = product(range(k), repeat=n) if k else (
            [()] if n == 0 else [])
        for assign in assigns:
            blocks_pos = tuple(tuple(p for p in range(n) if assign[p] == j)
                               for j in range(k))
            pools = []
            ok = True
            for j, S in enumerate(blocks_pos):
                cands = []
                for s in N.collection.signatures():
                    if s[1] == factors[j] and len(s[0]) == len(S):
                        cands.extend((s, m) for m in N.collection.ops_at(s))
                if not cands:
                    ok = False
                    break
                pools.append(cands)
            if not ok and k:
                continue
            for combo in product(*pools):
                blocks = tuple((blocks_pos[j], combo[j]) for j in range(k))
                inputs = [None] * n
                for (S, (ms, _)) in blocks:
                    for local, pos in enumerate(sorted(S)):
                        inputs[pos] = ms[0][local]
                sig = (tuple(inputs), tuple(factors))
                out.setdefault(sig, []).append(("tens", blocks))
    return {s: sorted(set(v)) for s, v in out.items()}


def tensor_act_sigma(N, elem, p):
    _, blocks = elem
    inv = perms.inverse(p)
    new_blocks = []
    for S, mref in blocks:
        newS = tuple(sorted(inv[x] for x in S))
        old_sorted = sorted(S)
        rho = tuple(old_sorted.index(p[x]) for x in newS)
        new_blocks.append(
            (newS, N.act(mref, rho) if rho != perms.identity(len(rho))
             else mref))
    return ("tens", tuple(new_blocks))


def tensor_act_right(N, elem, slot, qref):
    _, blocks = elem
    k = len(qref[0][0])
    new_blocks = []
    for S, mref in blocks:
        if slot in S:
            local = sorted(S).index(slot)
            acted = N.try_act1(mref, local, qref)
            if acted is None:
                return None
            newS = []
            for pos in sorted(S):
                if pos < slot:
                    newS.append(pos)
                elif pos == slot:
                    newS.extend(range(slot, slot + k))
                else:
                    newS.append(pos + k - 1)
            new_blocks.append((tuple(newS), acted))
        else:
            newS = tuple(pos if pos < slot else pos + k - 1 for pos in S)
            new_blocks.append((newS, mref))
    return ("tens", tuple(new_blocks))


def enumerate_module_homs(N, factors, target, max_arity, budget=200000):
    """Right-module homomorphisms from an ordered tensor of slices into
    the slice at `target`, by backtracking with forward propagation along
    the symmetric actions and the right action."""
    elems = tensor_elements(N, factors, max_arity)
    elem_sets = {s: set(v) for s, v in elems.items()}
    order = [(s, e)
             for s in sorted(elems, key=lambda s: (len(s[0]), str(s)))
             for e in elems[s]]
    target_ops = {s: [((s[0], target), m)
                      for m in N.collection.ops_at((s[0], target))]
                  for s in elems}

    results = []
    tried = [0]

    def propagate(assign, queue):
        while queue:
            key = queue.pop()
            s, e = key
            value = assign[key]
            n = len(s[0])
            for p in perms.all_perms(n):
                e2 = tensor_act_sigma(N, e, p)
                s2 = (perms.permute(s[0], p), s[1])
                k2 = (s2, e2)
                if e2 not in elem_sets.get(s2, ()):
                    continue
                v2 = N.act(value, p)
                if k2 in assign:
                    if assign[k2] != v2:
                        return False
                else:
                    assign[k2] = v2
                    queue.append(k2)
            for slot, color in enumerate(s[0]):
                for qs in N.over.signatures():
                    if qs[1] != color:
                        continue
                    if len(s[0]) + len(qs[0]) - 1 > max_arity:
                        continue
                    for q in N.over.ops_at(qs):
                        qref = (qs, q)
                        e2 = tensor_act_right(N, e, slot, qref)
                        if e2 is None:
                            continue
                        v2 = N.try_act1(value, slot, qref)
                        if v2 is None:
                            continue
                        s2 = (composed_sig((s[0], "*"), slot, qs)[0], s[1])
                        k2 = (s2, e2)
                        if e2 not in elem_sets.get(s2, ()):
                            continue
                        if k2 in assign:
                            if assign[k2] != v2:
                                return False
                        else:
                            assign[k2] = v2
                            queue.append(k2)
        return True

    def rec(assign):
        pending = [key for key in order if key not in assign]
        if not pending:
            results.append(dict(assign))
            return
        key = pending[0]
        s, _ = key
        for cand in target_ops[s]:
            tried[0] += 1
            if tried[0] > budget:
                raise BudgetExceededError(
                    "module homomorphism search exceeded budget",
                    count=len(results))
            trial = dict(assign)
            trial[key] = cand
            if propagate(trial, [key]):
                rec(trial)

    rec({})
    return results


def _tens_id(e):
    _, blocks = e
    return "+".join(
        f"({','.join(str(x) for x in S)}:{m[1]})" for S, m in blocks)


def _hom_id(hom):
    parts = []
    for (s, e), v in sorted(hom.items(),
                            key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
        parts.append(f"{','.join(s[0])}|{_tens_id(e)}->{v[1]}")
    return "h{" + ";".join(parts) + "}"


def end_right_module(M, arity_cap=None, budget=200000):
    """The endomorphism multicategory of a right module: objects are the
    output colors, an operation from b_1..b_k to b is a right-module
    homomorphism from the ordered tensor of the slices at the b_j into the
    slice at b; composition substitutes homomorphisms, the actions permute
    the tensor factors.

    Everything is read inside the module's declared support: tensor
    elements beyond its maximal arity are not part of the comparison, and
    the default arity cap is that same maximum, which keeps the canonical
    comparison meaningful for arity-truncated modules."""
    N = right_module_from(M)
    out_colors = N.out_colors()
    max_arity = max((len(s[0]) for s in N.collection.ops), default=0)
    if arity_cap is None:
        arity_cap = max_arity

    ops = {}
    homs = {}
    for k in range(arity_cap + 1):
        for factors in product(out_colors, repeat=k):
            for b in out_colors:
                found = enumerate_module_homs(
                    N, list(factors), b, max_arity, budget=budget)
                if not found:
                    continue
                sig = (tuple(factors), b)
                ids = []
                for h in found:
                    hid = _hom_id(h)
                    ids.append(hid)
                    homs[sig, hid] = h
                ops[sig] = tuple(sorted(ids))

    def act_hom(sig, h, p):
        k = len(sig[0])
        new_factors = perms.permute(sig[0], p)
        out = {}
        for (s, e), v in h.items():
            _, blocks = e
            new_blocks = tuple(blocks[p[j]] for j in range(k))
            out[(s[0], new_factors), ("tens", new_blocks)] = v
        return out

    action = {}
    for sig in ops:
        k = len(sig[0])
        for p in perms.all_perms(k):
            action[sig, p] = {
                hid: _hom_id(act_hom(sig, homs[sig, hid], p))
                for hid in ops[sig]}

    units = {}
    for b in out_colors:
        h = {}
        for s, es in tensor_elements(N, [b], max_arity).items():
            for e in es:
                (_, ((_, mref),)) = e
                h[s, e] = mref
        units[b] = _hom_id(h)

    def compose_homs(sig, h, slot, qsig, g):
        l = len(qsig[0])
        new_factors = sig[0][:slot] + qsig[0] + sig[0][slot + 1:]
        out = {}
        for s, es in tensor_elements(N, list(new_factors),
                                     max_arity).items():
            for e in es:
                _, blocks = e
                inner = blocks[slot:slot + l]
                inner_positions = sorted(x for S, _ in inner for x in S)
                rank = {x: r for r, x in enumerate(inner_positions)}
                inner_norm = tuple(
                    (tuple(rank[x] for x in S), m) for S, m in inner)
                inner_cols = tuple(s[0][x] for x in inner_positions)
                mid = g[(inner_cols, tuple(qsig[0])), ("tens", inner_norm)]
                new_blocks = (blocks[:slot]
                              + ((tuple(inner_positions), mid),)
                              + blocks[slot + l:])
                out[s, e] = h[(s[0], tuple(sig[0])), ("tens", new_blocks)]
        return out

    comp = {}
    for sig in ops:
        k = len(sig[0])
        for slot in range(k):
            for qsig in ops:
                if qsig[1] != sig[0][slot]:
                    continue
                if k + len(qsig[0]) - 1 > arity_cap:
                    continue
                for hid in ops[sig]:
                    for gid in ops[qsig]:
                        composite = compose_homs(
                            sig, homs[sig, hid], slot, qsig, homs[qsig, gid])
                        comp[sig, hid, slot, qsig, gid] = _hom_id(composite)

    table = TableMulticategory(
        collection=FiniteCollection(tuple(out_colors), ops, action),
        units=units, comp=comp, name=f"End_mod({N.name})")
    return table, homs


# ---------------------------------------------------------------------------
# pointedness and the quasi-free condition


def analyze_pointed(M, arity_cap=None, budget=200000):
    """Search for a basepoint (a right-module map out of the acting
    multicategory, determined by its unary values) and, when the two
    acting multicategories coincide, evaluate the quasi-free comparison
    from the right-acting multicategory to the module endomorphisms."""
    Q = M.right
    basepoints = []
    unary = {}
    for a in Q.colors:
        unary[a] = [(s, m) for s in M.collection.ops
                    for m in M.collection.ops_at(s) if s[0] == (a,)]
    pools = [unary[a] for a in sorted(Q.colors)]
    for combo in product(*pools):
        family = dict(zip(sorted(Q.colors), combo))
        o = {a: family[a][0][1] for a in family}
        ok = True
        for qs in Q.signatures():
            for q in Q.ops_at(qs):
                img = M.try_act_right1(family[qs[1]], 0, (qs, q))
                if img is None or img[0][1] != o[qs[1]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            basepoints.append(dict(family))
    pointed = bool(basepoints)

    quasi_free = None
    witness = None
    if pointed and M.left is M.right:
        N = right_module_from(M)
        max_arity = max((len(s[0]) for s in N.collection.ops), default=0)
        if arity_cap is None:
            arity_cap = max(max_arity, Q.max_arity())
        table, _homs = end_right_module(M, arity_cap=arity_cap,
                                        budget=budget)
        op_maps = {}
        ok = True
        for qs in Q.signatures():
            if len(qs[0]) > arity_cap:
                continue
            table_q = {}
            for q in Q.ops_at(qs):
                h = {}
                factors = tuple(qs[0])
                for s, es in tensor_elements(N, list(factors),
                                             max_arity).items():
                    for e in es:
                        _, blocks = e
                        order = []
                        for S, _ in blocks:
                            order.extend(sorted(S))
                        val = M.try_act_left((qs, q),
                                             tuple(m for _, m in blocks))
                        if val is None:
                            ok = False
                            break
                        if order:
                            rho = perms.inverse(tuple(order))
                            if rho != perms.identity(len(rho)):
                                val = M.act(val, rho)
                        h[s, e] = val
                    if not ok:
                        break
                if not ok:
                    break
                table_q[q] = _hom_id(h)
            if not ok:
                break
            op_maps[qs] = table_q
        if ok:
            chi = Multifunctor(source=Q, target=table,
                               object_map={a: a for a in Q.colors},
                               op_maps=op_maps)
            from .core import is_equivalence

            rep = is_equivalence(chi)
            quasi_free = rep.is_equivalence
            witness = rep.witnesses[:3]
        else:
            quasi_free = False
            witness = ["comparison undefined inside the caps"]
    return {
        "pointed": pointed,
        "basepoints": basepoints,
        "quasi_free": quasi_free,
        "witness": witness,
    }
