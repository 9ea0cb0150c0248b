import io

import pytest

from contingent import fixtures, modelfile
from contingent.cli import Config, build_parser, main
from contingent.search import DEFAULT_SEED
from contingent.semantics import evaluate
from contingent.syntax import parse


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def fx(kind, name):
    return str(fixtures.path(kind, name))


@pytest.mark.parametrize("name, formula, state, expected, code", [
    ("item_v", "Dp", "s", "true", 0),
    ("item_vii", "D(p|q)", "s", "false", 1),
    ("item_vi", "T", "u", "true", 0),
])
def test_eval(name, formula, state, expected, code):
    assert run("eval", fx("models", name), formula, state) == (code, expected + "\n")


def test_eval_verbose_and_truth_set():
    code, out = run("eval", fx("models", "item_v"), "Dp", "s", "--verbose")
    assert out == "true\ntruth set: {s}\n"
    assert run("eval", fx("models", "item_v"), "Dp") == (1, "{s}\n")
    code, out = run("eval", fx("models", "item_v"), "Dp", "s", "--format", "machine")
    assert out == "state=s formula=Dp value=true\n"


def test_eval_errors(tmp_path, capsys):
    assert run("eval", fx("models", "item_v"), "D(p", "s")[0] == 2
    assert "column 4" in capsys.readouterr().err
    assert run("eval", fx("models", "item_v"), "p", "w")[0] == 2
    bad = tmp_path / "bad.model"
    bad.write_text("states: s\nN s: {x}\n")
    assert run("eval", str(bad), "p", "s")[0] == 2
    assert "bad.model:2" in capsys.readouterr().err
    assert run("eval", str(tmp_path / "missing.model"), "p", "s")[0] == 2


def test_props(tmp_path):
    assert run("props", fx("models", "item_vii")) == (0, "m=true c=true n=true z=false filter\n")
    assert run("props", fx("models", "item_v")) == (0, "m=false c=true n=false z=false\n")
    full = tmp_path / "full.model"
    full.write_text("states: s t\nN s: {} {s} {t} {s t}\nN t: {} {s} {t} {s t}\n")
    assert run("props", str(full)) == (0, "m=true c=true n=true z=true filter\n")


def test_check(tmp_path):
    assert run("check", fx("derivations", "dc_to_dc_prime")) == (0, "ok (R^Δ)\n")
    text = fixtures.derivation_text("dc_to_dc_prime").replace("2. (q -> p) & (~q -> p) <-> p", "2. (q -> p) | (~q -> p) <-> p")
    mutated = tmp_path / "m.drv"
    mutated.write_text(text)
    code, out = run("check", str(mutated))
    assert code == 1 and out.startswith("error at line 2")
    wrong = tmp_path / "w.drv"
    wrong.write_text("system: E-delta\n1. Dp & Dq -> D(p & q)  axiom dC phi=p; psi=q\n")
    code, out = run("check", str(wrong))
    assert code == 1 and "not in" in out
    code, out = run("check", str(wrong), "--format", "machine")
    assert out.startswith("verdict=error line=1 ")
    unknown = tmp_path / "u.drv"
    unknown.write_text("system: Q-delta\n1. p -> p  taut\n")
    assert run("check", str(unknown))[0] == 2


def test_search_witness_round_trip(tmp_path):
    out_file = tmp_path / "w.model"
    code, out = run("search", "dC", "--props", "c", "--max", "2", "--exhaustive", "--out", str(out_file))
    assert code == 1 and "countermodel" in out
    text = out_file.read_text()
    state = text.splitlines()[0].rsplit(" ", 1)[1]
    code, out = run("eval", str(out_file), "Dp & Dq -> D(p & q)", state)
    assert (code, out) == (1, "false\n")
    m = modelfile.load(out_file)
    assert not evaluate(m, state, parse("Dp & Dq -> D(p & q)"))


def test_search_default_witness_name(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run("search", "dC", "--props", "c")[0] == 1
    assert (tmp_path / "dC.witness.model").exists()


@pytest.mark.parametrize("schema, props", [("dN", "n"), ("sdM", "mz")])
def test_search_valid(schema, props):
    code, out = run("search", schema, "--props", props, "--max", "2", "--exhaustive")
    assert code == 0 and "valid up to bound" in out


def test_search_formula_and_bounds():
    assert run("search", "Dp -> Dp", "--max", "1")[0] == 0
    assert run("search", "dC", "--max", "4", "--exhaustive")[0] == 3
    assert run("search", "dC", "--max", "6", "--sample", "10")[0] == 3
    assert run("search", "D(", "--max", "1")[0] == 2


def test_search_machine_is_deterministic(tmp_path):
    args = ("search", "dC", "--props", "n", "--max", "4", "--sample", "200", "--format", "machine",
            "--out", str(tmp_path / "x.model"))
    a, b = run(*args), run(*args)
    assert a == b
    assert a[1].startswith("item=dC props=n max=4 mode=sample(200,seed=")


def test_seed_env_override(monkeypatch):
    parser = build_parser()
    args = parser.parse_args(["search", "dC"])
    assert Config.from_args(args, environ={}).seed == DEFAULT_SEED
    assert Config.from_args(args, environ={"CONTINGENT_SEED": "5"}).seed == 5
    args = parser.parse_args(["search", "dC", "--seed", "9"])
    assert Config.from_args(args, environ={"CONTINGENT_SEED": "5"}).seed == 9
    monkeypatch.setenv("CONTINGENT_SEED", "123")
    code, out = run("search", "dN", "--props", "n", "--max", "3", "--sample", "5", "--format", "machine")
    assert "seed=123" in out


def test_transform(tmp_path):
    code, out = run("transform", "complement", fx("models", "c_complement"))
    assert code == 0 and "N s: {s} {t}\n" in out
    vii = fixtures.model_text("item_vii")
    code, out = run("transform", "supplement", fx("models", "item_vii"))
    n_lines = lambda t: [l for l in t.splitlines() if l.startswith("N ")]
    assert n_lines(out) == n_lines(vii)
    assert run("transform", "star", "Dp") == (0, "Bp | B~p\n")
    assert run("transform", "star", "Bp")[0] == 2
    dest = tmp_path / "closed.model"
    assert run("transform", "close", fx("models", "c_complement"), "--props", "mn", "-o", str(dest))[0] == 0
    assert "N s: {s} {s t}" in dest.read_text()


def test_fixtures_commands():
    code, out = run("fixtures", "list")
    assert code == 0 and out.count("model ") == 4 and out.count("derivation ") == 4
    code, out = run("fixtures", "lattice")
    assert "E^Δ -> EN^Δ" in out.splitlines()
    code, out = run("fixtures", "items", "--samples", "200", "--format", "machine")
    assert code == 0 and len(out.splitlines()) == 11
    assert all("verdict=pass" in l for l in out.splitlines())
    assert out == run("fixtures", "items", "--samples", "200", "--format", "machine")[1]


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main(["bogus"], out=io.StringIO())
    assert exc.value.code == 2
