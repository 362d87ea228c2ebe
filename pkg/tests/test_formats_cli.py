import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from citeinfluence.cli import main
from citeinfluence.counting import h_index, citation_multiset
from citeinfluence.formats import (
    ParseError,
    Report,
    emit_database,
    parse_database,
    parse_database_text,
    read_csv_report,
)
from citeinfluence.generators import fixture, generate_random_db
from citeinfluence.model import Database

from conftest import domain_databases

GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestDatabaseDocuments:
    def test_minimal_file_is_mutual_pair(self):
        text = '{"authors": [{"id": "a", "papers": ["p"]}, {"id": "b", "papers": ["q"]}],' \
               ' "citations": [{"citing": "p", "cited": "q"}, {"citing": "q", "cited": "p"}]}'
        assert parse_database_text(text).database == fixture("mutual-pair")

    @given(domain_databases())
    def test_round_trip(self, d):
        text = emit_database(d)
        assert parse_database_text(text).database == d
        assert emit_database(parse_database_text(text).database) == text

    @given(st.integers(2, 40), st.integers(1, 3), st.integers(0, 1000))
    def test_round_trip_generated(self, n, fields, seed):
        if n < 2 * fields:
            return
        d = generate_random_db(n, n_fields=fields, seed=seed)
        assert parse_database_text(emit_database(d)).database == d

    def test_shares_and_activity_round_trip(self):
        d = fixture("mutual-pair")
        text = emit_database(d, shares={"p": {"a": 0.1, "b": 0.9}}, activity={"a": 3, "b": 0.5})
        loaded = parse_database_text(text)
        assert loaded.weights.shares == {"p": {"a": 0.1, "b": 0.9}}
        assert loaded.activity == {"a": 3.0, "b": 0.5}
        assert emit_database(loaded.database, loaded.weights.shares, loaded.activity) == text
        assert '"a": 0.10000000000000001' in text  # 17 significant digits

    def test_duplicate_pair_named(self):
        text = '{"authors": [{"id": "a", "papers": ["p"]}, {"id": "b", "papers": ["q"]}],' \
               ' "citations": [{"citing": "p", "cited": "q"}, {"citing": "p", "cited": "q"}]}'
        with pytest.raises(ParseError, match=r"citations\[1\].*'p' cites 'q' twice"):
            parse_database_text(text)

    def test_shares_sum(self):
        text = '{"authors": [{"id": "a", "papers": ["p"]}, {"id": "b", "papers": ["q"]}], "citations": [],' \
               ' "shares": {"p": {"a": 0.6, "b": 0.5}}}'
        with pytest.raises(ParseError, match="shares sum 1.1 ≠ 1"):
            parse_database_text(text)

    @pytest.mark.parametrize(
        "text,match",
        [
            ('{"authors": [{"id": "a", "papers": ["p"]}], "citations": [{"citing": "p", "cited": "zz"}]}',
             r"citations\[0\]\.cited: unknown paper 'zz'"),
            ('{"authors": [', "line 1"),
            ('{"authors": {}}', "authors: expected a list"),
            ('{"authors": [{"id": "a", "papers": ["p"]}, {"id": "b", "papers": ["p"]}]}', "already belongs"),
            ('{"authors": [], "extra": 1}', "unknown keys"),
            ('{"authors": [{"id": "a", "papers": ["p"], "activity": "x"}]}', "activity: expected a number"),
        ],
    )  # fmt: skip
    def test_malformed(self, text, match):
        with pytest.raises(ParseError, match=match):
            parse_database_text(text)

    def test_stdin(self, monkeypatch):
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO(emit_database(fixture("chain-3"))))
        assert parse_database("-").database == fixture("chain-3")


class TestReports:
    def test_csv_and_json(self):
        r = Report(["author", "x"], [["a", 1 / 3], ["b", 2]], {"delta": 0.5})
        meta, rows = read_csv_report(r.render("csv"))
        assert meta == {"delta": 0.5}
        assert rows == [{"author": "a", "x": "0.333333333333"}, {"author": "b", "x": "2"}]
        doc = json.loads(r.render("json"))
        assert doc["rows"][0] == {"author": "a", "x": 0.333333333333}
        with pytest.raises(ValueError):
            r.render("xml")


class TestCompute:
    def test_golden(self, capsys):
        code, out, _ = run(["compute", str(GOLDEN / "mutual_pair.json")], capsys)
        assert code == 0
        assert out == (GOLDEN / "mutual_pair_compute.csv").read_text()

    def test_values_sum_to_author_count(self, tmp_path, capsys):
        path = tmp_path / "db.json"
        path.write_text(emit_database(generate_random_db(40, n_fields=3, seed=5)))
        code, out, _ = run(["compute", str(path), "--delta", "0.7", "--format", "json"], capsys)
        doc = json.loads(out)
        total = sum(r["influence"] for r in doc["rows"])
        # values are printed to 12 significant digits
        assert abs(total - 40) <= doc["metadata"]["reported_tolerance"] + 40 * 1e-11
        assert doc["metadata"]["delta"] == 0.7
        assert [r["author"] for r in doc["rows"]] == sorted(r["author"] for r in doc["rows"])
        assert {r["component"] for r in doc["rows"]} == {0, 1, 2}

    def test_noself_notes_erased(self, tmp_path, capsys):
        d = Database({"a": ["p"], "b": ["q"], "s": ["s1", "s2"]}, [("p", "q"), ("q", "p"), ("s1", "s2"), ("s1", "p")])
        path = tmp_path / "db.json"
        path.write_text(emit_database(d))
        code, out, _ = run(["compute", str(path), "--mode", "noself"], capsys)
        meta, rows = read_csv_report(out)
        assert code == 0 and meta["erased"] == ["s"]
        assert [r["author"] for r in rows] == ["a", "b"]

    def test_validation_failure(self, tmp_path, capsys):
        path = tmp_path / "chain.json"
        path.write_text(emit_database(fixture("chain-3")))
        code, out, err = run(["compute", str(path)], capsys)
        assert code == 1 and out == ""
        assert "no-external-reference: a" in err

    def test_parse_failure(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{")
        code, _, err = run(["compute", str(path)], capsys)
        assert code == 1 and "line 1" in err

    def test_alpha_from_activity(self, tmp_path, capsys):
        path = tmp_path / "db.json"
        path.write_text(emit_database(fixture("mutual-pair"), activity={"a": 2, "b": 3}))
        _, out, _ = run(["compute", str(path), "--alpha-from-activity", "--format", "json"], capsys)
        doc = json.loads(out)
        assert sum(r["influence"] for r in doc["rows"]) == pytest.approx(5.0)

    def test_concave_column_and_guard(self, tmp_path, capsys):
        path = tmp_path / "db.json"
        path.write_text(emit_database(generate_random_db(10, seed=1)))
        code, out, _ = run(["compute", str(path), "--concave", "0.5", "--format", "json"], capsys)
        assert code == 0
        assert sum(r["concave"] for r in json.loads(out)["rows"]) == pytest.approx(10.0, abs=1e-8)
        code, _, err = run(["compute", str(path), "--concave", "0.5", "--max-papers", "3"], capsys)
        assert code == 3 and "--max-papers" in err


class TestCompare:
    def test_h_and_euclid(self, tmp_path, capsys):
        # author a: papers cited 3 and 4 times
        d = Database(
            {"a": ["x", "y"], "b": ["b1", "b2", "b3", "b4"]},
            [("x", f"b{i}") for i in (1, 2, 3)] + [("y", f"b{i}") for i in (1, 2, 3, 4)] + [("b1", "x")],
        )
        path = tmp_path / "db.json"
        path.write_text(emit_database(d))
        code, out, _ = run(["compare", str(path), "--indices", "h,euclid"], capsys)
        meta, rows = read_csv_report(out)
        assert rows[0]["author"] == "a" and rows[0]["h"] == "2" and float(rows[0]["euclid"]) == 5.0
        assert rows[0]["rank_h"] == "1.00000000000"
        assert "h~euclid" in meta["footrule"]

    def test_golden_subtotals(self, capsys):
        code, out, _ = run(
            ["compare", str(GOLDEN / "two_field.json"), "--indices", "fractional,comparable-direct,euclid,influence"],
            capsys,
        )
        assert out == (GOLDEN / "two_field_compare.csv").read_text()
        meta, _ = read_csv_report(out)
        assert meta["component_totals"]["comparable-direct"] == [2.0, 2.0]
        e1, e2 = meta["component_totals"]["euclid"]
        assert e1 == 2 * e2

    def test_unknown_index(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["compare", str(GOLDEN / "mutual_pair.json"), "--indices", "foo"])
        assert exc.value.code == 2
        err = capsys.readouterr().err
        assert "unknown index foo" in err and "euclid" in err


class TestAxiomsCommand:
    def test_separability_holds(self, capsys):
        code, out, _ = run(["axioms", "--index", "influence", "--axioms", "separability", "--trials", "200"], capsys)
        _, rows = read_csv_report(out)
        assert code == 0 and rows[0]["outcome"] == "holds-on-sample" and rows[0]["trials"] == "200"

    def test_euclid_field_comparability(self, capsys):
        code, out, _ = run(
            ["axioms", str(GOLDEN / "two_field.json"), "--index", "euclid", "--axioms", "field-comparability", "--format", "json"],
            capsys,
        )
        row = json.loads(out)["rows"][0]
        assert row["outcome"] == "violated" and row["detail"]["ratio"] == 2.0
        assert row["witness"]["database"]["authors"][0]["id"] == "s"

    def test_splitting_witness_replayable(self, capsys, tmp_path):
        code, out, _ = run(["axioms", "--index", "influence", "--axioms", "splitting", "--seed", "4", "--format", "json"], capsys)
        row = json.loads(out)["rows"][0]
        assert row["outcome"] == "violated"
        before = parse_database_text(json.dumps(row["witness"]["database"])).database
        after = parse_database_text(json.dumps(row["witness"]["transformed"])).database
        from citeinfluence import influence_index

        a = row["author"]
        assert influence_index(before).per_author[a] == pytest.approx(row["before"], rel=1e-10)
        assert influence_index(after).per_author[a] == pytest.approx(row["after"], rel=1e-10)
        assert influence_index(before).per_author[a] != pytest.approx(influence_index(after).per_author[a], abs=1e-9)

    @pytest.mark.parametrize("argv", [["--index", "nope"], ["--index", "h", "--axioms", "bogus"]])
    def test_invalid_names(self, argv, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["axioms", *argv])
        assert exc.value.code == 2


class TestFileCommands:
    def test_generate_deterministic(self, tmp_path, capsys):
        for name in ("g1.json", "g2.json"):
            assert main(["generate", "--authors", "100", "--fields", "4", "--seed", "7", "-o", str(tmp_path / name)]) == 0
        assert (tmp_path / "g1.json").read_bytes() == (tmp_path / "g2.json").read_bytes()
        assert parse_database(tmp_path / "g1.json").database.n_authors == 100

    def test_reduce_then_h(self, tmp_path, capsys):
        src = tmp_path / "d.json"
        src.write_text(emit_database(generate_random_db(15, seed=3)))
        d = parse_database(src).database
        a = next(a for a in d.authors if any(d.n_citations(p) for p in d.portfolio[a]))
        assert main(["reduce", str(src), "--author", a, "-o", str(tmp_path / "r.json")]) == 0
        r = parse_database(tmp_path / "r.json").database
        assert h_index(citation_multiset(r, a)) == h_index(citation_multiset(d, a))
        _, out, _ = run(["compare", str(tmp_path / "r.json"), "--indices", "h"], capsys)
        _, rows = read_csv_report(out)
        assert {row["author"]: row["h"] for row in rows}[a] == str(h_index(citation_multiset(d, a)))

    def test_validate(self, tmp_path, capsys):
        path = tmp_path / "imp.json"
        assert main(["generate", "--fixture", "impossibility-d", "-o", str(path)]) == 0
        code, out, _ = run(["validate", str(path)], capsys)
        assert code == 0 and "in the domain" in out
        path.write_text(emit_database(fixture("chain-3")))
        code, out, _ = run(["validate", str(path)], capsys)
        assert code == 1 and "no-external-reference" in out

    def test_generate_needs_size(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["generate"])
        assert exc.value.code == 2


def test_module_entry_point_uses_streams(tmp_path):
    doc = emit_database(fixture("mutual-pair"))
    proc = subprocess.run(
        [sys.executable, "-m", "citeinfluence", "compute", "-", "--format", "json"],
        input=doc, capture_output=True, text=True, check=False,
    )  # fmt: skip
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["metadata"]["total"] == pytest.approx(2.0)
