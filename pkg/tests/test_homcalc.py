"""Multifunctors, multilinear transformations, the hom multicategory, and
the tensor-hom adjunction."""

import pytest

from multicat.algebras import EndView, ObjectFamily
from multicat.core import check_multicategory_laws
from multicat.errors import DomainError
from multicat.homcalc import (KNatTransformation, Multifunctor,
                              adjunction_check, check_multifunctor,
                              compose_multifunctors, enumerate_multifunctors,
                              generated_ops, identity_multifunctor,
                              internal_hom, is_k_natural,
                              naturality_on_generators)
from multicat.standard import (assoc_multicategory, comm_multicategory,
                               indiscrete_pair, unit_multicategory)

I = unit_multicategory()
AS2 = assoc_multicategory(2)
AS3 = assoc_multicategory(3)
COM2 = comm_multicategory(2)
COM3 = comm_multicategory(3)
A2 = ObjectFamily({"x": ("a", "b")})


def terminal_to_com(P, com):
    return Multifunctor(
        source=P, target=com,
        object_map={c: "x" for c in P.colors},
        op_maps={s: {op: f"m{len(s[0])}" for op in P.ops_at(s)}
                 for s in P.signatures()})


class TestMultifunctor:
    def test_identity_passes(self):
        assert check_multifunctor(identity_multifunctor(AS3)).ok

    def test_terminal_passes(self):
        assert check_multifunctor(terminal_to_com(AS3, COM3)).ok

    def test_seeded_equivariance_violation(self):
        F = terminal_to_com(AS3, COM3)
        # send the two binary orderings to the single commutative target,
        # then corrupt the unary image table with a non-functorial swap
        bad = Multifunctor(
            source=AS3, target=AS3,
            object_map={"x": "x"},
            op_maps={s: {op: op for op in AS3.ops_at(s)}
                     for s in AS3.signatures()})
        bad.op_maps[(("x", "x"), "x")] = {"w01": "w01", "w10": "w01"}
        report = check_multifunctor(bad)
        assert not report.ok
        assert any(law == "equivariance" for law, _ in report.violations)

    def test_composition(self):
        F = terminal_to_com(AS3, COM3)
        G = identity_multifunctor(COM3)
        assert compose_multifunctors(F, G).key() == F.key()


class TestEnumerate:
    def test_from_unit_matches_objects(self):
        ind = indiscrete_pair()
        assert len(enumerate_multifunctors(I, ind)) == len(ind.colors)

    def test_terminal_target_unique(self):
        assert len(enumerate_multifunctors(AS3, COM3)) == 1
        assert len(enumerate_multifunctors(AS2, COM2)) == 1

    def test_monoid_count_into_end(self, fx):
        view = EndView(A2, arity_cap=3)
        fs = enumerate_multifunctors(AS3, view, fix_objects={"x": "x"})
        assert len(fs) == fx["monoids"]["2"]


class TestNaturality:
    def test_identity_components_natural(self):
        F = identity_multifunctor(AS3)
        xi = KNatTransformation((F,), F, {"x": AS3.units["x"]})
        ok, _ = is_k_natural(xi)
        assert ok

    def test_terminal_target_always_natural(self):
        F = terminal_to_com(AS3, COM3)
        for comp in COM3.ops_at((("x", "x"), "x")):
            xi = KNatTransformation((F, F), F, {"x": comp})
            ok, _ = is_k_natural(xi)
            assert ok

    def test_seeded_failure_with_witness(self):
        view = EndView(A2, arity_cap=4)
        fs = enumerate_multifunctors(AS3, view, fix_objects={"x": "x"})
        failures = 0
        for F in fs:
            for comp in view.ops_at((("x", "x"), "x")):
                xi = KNatTransformation((F, F), F, {"x": comp})
                ok, witnesses = is_k_natural(xi)
                if not ok:
                    failures += 1
                    assert witnesses
        assert failures > 0

    def test_generator_verdicts_match_full(self):
        S = [(((), "x"), "w")] + [((("x", "x"), "x"), w)
                                  for w in AS3.ops_at((("x", "x"), "x"))]
        assert generated_ops(AS3, S) == set(AS3.refs())
        view = EndView(A2, arity_cap=4)
        fs = enumerate_multifunctors(AS3, view, fix_objects={"x": "x"})
        for F in fs:
            for G in fs:
                for comp in view.iter_ops((("x",), "x")):
                    xi = KNatTransformation((F,), G, {"x": comp})
                    full, _ = is_k_natural(xi)
                    gen, _ = naturality_on_generators(xi, S)
                    assert full == gen

    def test_non_generating_set_rejected(self):
        S = [(((), "x"), "w")]
        F = identity_multifunctor(AS3)
        xi = KNatTransformation((F,), F, {"x": AS3.units["x"]})
        with pytest.raises(DomainError):
            naturality_on_generators(xi, S)


class TestInternalHom:
    def test_hom_from_unit_is_target(self):
        ind = indiscrete_pair()
        hom = internal_hom(I, ind, arity_cap=2)
        assert len(hom.functors) == len(ind.colors)
        for s in hom.table.signatures():
            # each hom set matches the corresponding set of the target
            sources = [hom.functors[c].object_map["u"] for c in s[0]]
            target = hom.functors[s[1]].object_map["u"]
            want = ind.ops_at((tuple(sources), target))
            assert len(hom.table.ops_at(s)) == len(want)
        assert check_multicategory_laws(hom.table).ok

    def test_hom_to_terminal_is_terminal(self):
        hom = internal_hom(AS2, COM2, arity_cap=2)
        assert len(hom.functors) == 1
        for s in hom.table.signatures():
            assert len(hom.table.ops_at(s)) == 1
        assert check_multicategory_laws(hom.table).ok

    def test_object_count_definitional(self):
        view = EndView(A2, arity_cap=2)
        hom = internal_hom(COM2, view, arity_cap=1)
        assert len(hom.functors) == len(
            enumerate_multifunctors(COM2, view))


class TestAdjunction:
    def test_unit_unit(self):
        rep = adjunction_check(I, I, AS2, max_arity=2, max_vertices=2)
        assert rep.ok and rep.tensor_side == 1

    def test_unit_com_end(self):
        view = EndView(A2, arity_cap=3)
        rep = adjunction_check(I, COM2, view, max_arity=2, max_vertices=3)
        assert rep.ok
        assert rep.tensor_side == rep.hom_side == 4

    def test_com_com_end(self):
        view = EndView(A2, arity_cap=4)
        rep = adjunction_check(COM2, COM2, view, max_arity=4,
                               max_vertices=4)
        assert rep.ok and rep.tensor_side == 4

    def test_naturality_in_the_target(self):
        # transposing after postcomposition equals pushing the hom side
        # forward: the square of sets commutes along End(A) -> Com2
        from multicat.homcalc import tensor_to_hom
        from multicat.presents import bv_tensor

        view = EndView(A2, arity_cap=2)
        sat = bv_tensor(I, COM2, max_arity=2, max_vertices=3)
        hom_r = internal_hom(COM2, view, arity_cap=1)
        hom_r2 = internal_hom(COM2, COM2, arity_cap=1)
        rho = Multifunctor(
            source=view, target=COM2, object_map={"x": "x"},
            op_maps={s: {op: f"m{len(s[0])}" for op in view.ops_at(s)}
                     for s in view.signatures()})

        def hom_push(K):
            object_map = {}
            for a, fid in K.object_map.items():
                pushed = compose_multifunctors(hom_r.functors[fid], rho)
                object_map[a] = hom_r2.functor_id(pushed)
            op_maps = {}
            for s, table in K.op_maps.items():
                new = {}
                for op, oid in table.items():
                    xi = hom_r.knats[K.map_sig(s), oid]
                    comps = {
                        b: rho.map_ref(xi.component_ref(b))[1]
                        for b in xi.components}
                    new[op] = "{" + ",".join(
                        f"{b}:{comps[b]}" for b in sorted(comps)) + "}"
                op_maps[s] = new
            return Multifunctor(source=K.source, target=hom_r2.table,
                                object_map=object_map, op_maps=op_maps)

        for H in enumerate_multifunctors(sat.table, view):
            K = tensor_to_hom(H, I, COM2, view, sat, hom_r)
            direct = tensor_to_hom(compose_multifunctors(H, rho),
                                   I, COM2, COM2, sat, hom_r2)
            assert K is not None and direct is not None
            assert hom_push(K).key() == direct.key()
