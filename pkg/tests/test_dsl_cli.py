"""The document format, diagnostics, the driver, and determinism."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from multicat import dsl
from multicat.cli import COMMAND_TABLE, SUBCOMMANDS, main


def run_cli(*argv):
    return main(list(argv))


class TestParse:
    def test_trivial_document(self):
        text = ("multicategory I\n  color u\n  ops (u;u) = 1\n"
                "  unit u = 1\n  comp (u;u) 1 1 (u;u) 1 = 1\n")
        ast, diags = dsl.parse(text)
        assert ast is not None and not diags
        objects, ediags = dsl.elaborate(ast)
        assert not ediags and "I" in objects

    def test_unknown_block_kind(self):
        ast, diags = dsl.parse("widget W\n  color u\n")
        assert ast is None
        assert any(d.code == "SYNTAX" and d.line == 1 for d in diags)

    def test_unresolved_color_reference(self):
        text = ("multicategory M\n  color u\n  ops (u;v) = f\n"
                "  unit u = 1\n")
        ast, _ = dsl.parse(text)
        _, diags = dsl.elaborate(ast)
        assert any(d.code == "RESOLVE" and "v" in d.message for d in diags)

    def test_mismatched_relation_signature(self):
        text = ("collection G\n  color x\n  ops (x,x;x) = m\n"
                "  act (x,x;x) m [2,1] = m\n\n"
                "presentation P over G\n"
                "  rel (x,x;x) m($1,$2) = m(m($1,$2),$3)\n")
        ast, _ = dsl.parse(text)
        _, diags = dsl.elaborate(ast)
        assert any(d.code in ("STRUCT", "SYNTAX") for d in diags)

    def test_bimodule_missing_action_row(self):
        text = ("multicategory I\n  color u\n  ops (u;u) = 1\n"
                "  unit u = 1\n  comp (u;u) 1 1 (u;u) 1 = 1\n\n"
                "bimodule B : I | I\n  ops (u,u;u) = m\n"
                "  act (u,u;u) m [2,1] = m\n")
        ast, _ = dsl.parse(text)
        _, diags = dsl.elaborate(ast)
        assert any(d.code == "STRUCT" and "action row" in d.message
                   for d in diags)

    def test_diagnostics_carry_positions(self):
        ast, diags = dsl.parse("multicategory\n")
        assert ast is None
        assert diags[0].line == 1 and diags[0].col >= 1


class TestRoundTrip:
    def test_all_fixture_documents(self, docs_dir):
        for path in sorted(docs_dir.glob("*.mcat")):
            text = path.read_text()
            ast, diags = dsl.parse(text)
            assert ast is not None, (path, diags)
            printed = dsl.print_ast(ast)
            ast2, _ = dsl.parse(printed)
            assert dsl.print_ast(ast2) == printed, path
            objects, ediags = dsl.elaborate(ast)
            assert not [d for d in ediags if d.code != "LAW"], (path, ediags)
            assert not [d for d in ediags if d.code == "LAW"], path

    def test_fixture_documents_are_normalized(self, docs_dir):
        # parse o print is the identity on the shipped files themselves
        for path in sorted(docs_dir.glob("*.mcat")):
            text = path.read_text()
            ast, _ = dsl.parse(text)
            assert dsl.print_ast(ast) == text, path


class TestCli:
    def test_check_ok(self, docs_dir):
        assert run_cli("check", str(docs_dir / "as3.mcat")) == 0

    def test_check_law_failure_exit_one(self, tmp_path, docs_dir):
        text = (docs_dir / "as2.mcat").read_text()
        bad = text.replace("comp (x;x) w0 1 (x,x;x) w01 = w01",
                           "comp (x;x) w0 1 (x,x;x) w01 = w10")
        path = tmp_path / "bad.mcat"
        path.write_text(bad)
        assert run_cli("check", str(path)) == 1

    def test_unknown_flag_exit_two(self, docs_dir):
        proc = subprocess.run(
            [sys.executable, "-m", "multicat.cli", "check",
             str(docs_dir / "i.mcat"), "--no-such-flag"],
            capture_output=True)
        assert proc.returncode == 2

    def test_compose_artifact(self, docs_dir, tmp_path, capsys):
        out = tmp_path / "c.json"
        code = run_cli("compose", str(docs_dir / "as3.mcat"),
                       "--name", "As3", "--op-sig", "(x,x;x)", "--op",
                       "w01", "--slot", "1", "--arg-sig", "(x,x;x)",
                       "--arg", "w10", "--out", str(out))
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["result"] == "w102"

    def test_tensor_unit_law(self, docs_dir, tmp_path):
        out = tmp_path / "t.json"
        code = run_cli("tensor", str(docs_dir / "com2.mcat"),
                       "Com2", "Com2", "--cap-arity", "4",
                       "--cap-vertices", "4", "--out", str(out))
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["saturation"]["stabilized"]
        assert all(n == 1 for n in doc["saturation"]["classes"].values())

    def test_exports_byte_identical(self, docs_dir, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            assert run_cli("export", str(docs_dir / "as3.mcat"),
                           "--name", "As3", "--out", str(out)) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_equiv_exit_codes(self, docs_dir):
        assert run_cli("equiv", str(docs_dir / "twocolor.mcat"),
                       "--name", "Skel") == 0
        assert run_cli("equiv", str(docs_dir / "twocolor.mcat"),
                       "--name", "Collapse") == 1

    def test_saturate_presentation(self, docs_dir, tmp_path):
        out = tmp_path / "s.json"
        code = run_cli("saturate", str(docs_dir / "magma.mcat"),
                       "--name", "Magma", "--cap-arity", "4",
                       "--cap-vertices", "3", "--out", str(out))
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["saturation"]["stabilized"]

    def test_missing_block_usage_error(self, docs_dir):
        assert run_cli("export", str(docs_dir / "i.mcat"),
                       "--name", "NoSuch") == 2


class TestCommandTable:
    def test_every_operation_has_exactly_one_subcommand(self):
        ops = {
            "parse", "elaborate", "run",
            "check_multicategory_laws", "compose", "underlying_category",
            "is_equivalence", "nerve", "restrict_objects",
            "extend_objects_injective",
            "graft", "op_compose", "op_hom_set", "free_multicategory",
            "circle_product",
            "saturate", "coproduct", "bv_tensor", "arrow_multicategory",
            "pushout",
            "check_multifunctor", "enumerate_multifunctors", "is_k_natural",
            "naturality_on_generators", "internal_hom", "adjunction_check",
            "end_multicategory", "free_algebra", "enumerate_algebras",
            "end_module", "end_of_map", "op_algebra_to_operad",
            "p1_algebras_as_triples",
            "check_bimodule", "end_right_module", "analyze_pointed",
            "bar_complex", "hochschild", "restrict_module",
            "export",
        }
        ops.discard("run")  # the driver itself
        for op in ops:
            assert op in COMMAND_TABLE, op
            assert COMMAND_TABLE[op] in SUBCOMMANDS
        # and nothing maps to several subcommands: the table is a function
        assert len(COMMAND_TABLE) == len(set(COMMAND_TABLE))
