import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dslgen import AstGen, ProgramGen
from opengames import Enum, validate_graph
from opengames.analysis import closed_context, forward_eval, random_profile
from opengames.dsl import ast as A
from opengames.dsl import compile_source, load_model, parse, pretty, typecheck
from opengames.dsl.lexer import tokenize
from opengames.graph import Function, Nature

GOLDEN = Path(__file__).parent / "golden" / "dsl"
MODELS = Path(__file__).parent.parent / "models"

SMALL = """
type Coin = { H, T }
player p
param bias = 0.5
game Flip() -> Coin where
  c = nature : Coin { H: bias, T: 1 - bias }
  guess = decision p () : Coin
  payoff p { if guess == c then 1 else 0 }
  ret c
end
entry Flip
"""


def rules(source: str) -> list[str]:
    g, diags = compile_source(source)
    return [d.rule for d in diags]


# -- lexing and parsing ------------------------------------------------------


def test_tokens_carry_positions():
    toks, diags = tokenize("type A = 0..2 -- note\nplayer p")
    assert diags == []
    assert [(t.text, t.span.line, t.span.col) for t in toks[:6]] == [
        ("type", 1, 1), ("A", 1, 6), ("=", 1, 8), ("0", 1, 10), ("..", 1, 11), ("2", 1, 13),
    ]
    assert toks[6].text == "player" and toks[6].span.line == 2


def test_enum_separator_diagnostic():
    diags = parse("type Coin = { H H }")
    assert isinstance(diags, list) and len(diags) == 1
    d = diags[0]
    assert d.rule == "syntax.enum-separator" and d.span.line == 1 and d.span.col == 17


def test_parser_recovers_and_reports_several_errors():
    diags = parse((GOLDEN / "multiple_errors.og").read_text())
    assert [d.span.line for d in diags] == [1, 5, 8]


@pytest.mark.parametrize("case", sorted(p.stem for p in GOLDEN.glob("*.og")))
def test_diagnostic_goldens(case):
    g, diags = compile_source((GOLDEN / f"{case}.og").read_text())
    got = "ok\n" if g is not None else "".join(f"{d}\n" for d in diags)
    assert got == (GOLDEN / f"{case}.diag").read_text()
    for d in diags:
        assert d.rule.split(".")[0] in ("syntax", "type", "elab", "graph")
        assert d.span is not None or d.subject or d.rule == "type.no-entry"


def test_parse_builds_expected_tree():
    p = parse("type Coin = { H, T }\ngame G = seq a: X, Y end\nentry G")
    assert p == A.Program(
        (
            A.TypeDecl("Coin", A.TEnum(("H", "T"))),
            A.GameDecl("G", False, (), expr=A.GSeq((("a", A.GRef("X")), (None, A.GRef("Y"))))),
            A.EntryDecl("G"),
        )
    )


def test_operator_precedence():
    (decl,) = parse("game G() -> [] where\n payoff p { 1 + 2 * 3 - -x }\n ret\nend").decls
    e = decl.body.stmts[0].body
    assert e == A.BinOp("-", A.BinOp("+", A.Num(1), A.BinOp("*", A.Num(2), A.Num(3))), A.UnOp("-", A.Var("x")))


@pytest.mark.parametrize("seed", range(1000))
def test_pretty_parse_round_trip(seed):
    p = AstGen(random.Random(seed)).program()
    text = pretty(p)
    assert parse(text) == p
    assert pretty(parse(text)) == text


@pytest.mark.parametrize("name", sorted(p.name for p in MODELS.glob("*.og")))
def test_shipped_models_round_trip(name):
    p = parse((MODELS / name).read_text())
    assert not isinstance(p, list)
    assert parse(pretty(p)) == p


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=200))
def test_arbitrary_bytes_never_crash(data):
    text = data.decode("utf-8", errors="replace")
    g, diags = compile_source(text)
    assert (g is None) == bool(diags)


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="type gamewhr=(){}<>[]|,:.-+*/ 0123456789ABxyz\n", max_size=120))
def test_token_soup_never_crashes(text):
    g, diags = compile_source(text)
    assert all(d.span is not None or d.subject or d.rule == "type.no-entry" for d in diags)


def test_mutated_models_never_crash():
    rng = random.Random(0)
    source = (MODELS / "co2_market.og").read_text()
    for _ in range(200):
        chars = list(source)
        for _ in range(rng.randint(1, 5)):
            i = rng.randrange(len(chars))
            op = rng.randrange(3)
            if op == 0:
                del chars[i]
            elif op == 1:
                chars.insert(i, rng.choice("{}(),:=|<>-.x1 \n"))
            else:
                chars[i], chars[-1 - i] = chars[-1 - i], chars[i]
        compile_source("".join(chars))


# -- checking and elaboration ------------------------------------------------


def test_small_model_elaborates():
    g, diags = compile_source(SMALL)
    assert diags == [] and validate_graph(g) == []
    kinds = sorted(type(a).__name__ for a in g.atoms)
    assert kinds == ["Decision", "Nature", "Payoff"]
    (d,) = g.decisions
    assert d.id == "guess" and d.owner == "p" and d.action_type == Enum("Coin", ("H", "T"))


def test_param_override_changes_tables():
    g, _ = compile_source(SMALL, params={"bias": 0.25})
    (n,) = [a for a in g.atoms if isinstance(a, Nature)]
    assert n.table[()][n.out_type.values[0]] == pytest.approx(0.25)
    assert rules_with(SMALL, params={"nope": 1}) == ["type.unknown-name"]


def rules_with(source, **kw):
    g, diags = compile_source(source, **kw)
    return [d.rule for d in diags]


def test_entry_override():
    src = SMALL + "game Other() -> [] where\n  ret\nend\n"
    g, _ = compile_source(src, entry="Other")
    assert g.atoms == ()
    assert rules_with(src, entry="Missing") == ["type.unknown-name"]


def test_range_values_saturate():
    g, diags = compile_source("type R = 0..2\ngame F() -> [R] where\n  r = fun : R { 5 - 9 }\n  ret r\nend\nentry F\n")
    assert diags == []
    (f,) = [a for a in g.atoms if isinstance(a, Function)]
    assert f.table[()][0].name == "0"


def test_statement_ids_and_call_labels():
    src = """
type A = { x, y }
player p
game Inner(a: A) -> [A] where
  d = decision p (a) : A
  ret d
end
game Outer() -> [A] where
  s = decision p () : A
  t = Inner(s)
  u = second: Inner(t)
  ret u
end
entry Outer
"""
    g, diags = compile_source(src)
    assert diags == []
    assert sorted(d.id for d in g.decisions) == ["Inner/d", "s", "second/d"]


def test_template_entry_needs_use():
    src = """
type A = { x, y }
template T
  hole h : A -> A
  = seq h end
entry T
"""
    assert rules(src) == ["type.hole-binding"]


def test_typecheck_reports_each_family():
    cases = {
        "type.mismatch": "type A = { x, y }\ngame G() -> [A] where\n  ret 3\nend\nentry G\n",
        "type.unknown-name": "game G() -> [] where\n  payoff nobody { 1 }\n  ret\nend\nentry G\n",
        "type.arity": "type A = { x, y }\ngame H() -> [A, A] where\n  ret x\nend\nentry H\n",
        "type.duplicate": "type A = { x, y }\ntype A = { z, w }\n",
        "type.recursion": "type A = (A, A)\n",
    }
    for rule, src in cases.items():
        program = parse(src)
        assert not isinstance(program, list)
        out = typecheck(program)
        assert isinstance(out, list) and rule in [d.rule for d in out], (rule, out)


def test_table_budget_is_enforced():
    src = "type R = 0..99\ngame G(a: R, b: R, c: R) -> [R] where\n  f = fun : R { a + b + c }\n  ret f\nend\nentry G\n"
    g, diags = compile_source(src, budget=1000)
    assert g is None and [d.rule for d in diags] == ["elab.budget"]


def test_load_model_raises_with_diagnostics(tmp_path):
    bad = tmp_path / "bad.og"
    bad.write_text("type Coin = { H H }")
    with pytest.raises(ValueError, match="syntax.enum-separator"):
        load_model(bad)
    raw = tmp_path / "raw.og"
    raw.write_bytes(b"\xff\xfe")
    with pytest.raises(ValueError, match="UTF-8"):
        load_model(raw)


# -- soundness fuzz ------------------------------------------------------------


@pytest.mark.parametrize("seed", range(300))
def test_well_typed_programs_elaborate_to_valid_graphs(seed):
    src = ProgramGen(random.Random(seed)).source(depth=4)
    program = parse(src)
    assert not isinstance(program, list), program
    assert not isinstance(typecheck(program), list)
    g, diags = compile_source(src)
    assert diags == [] and validate_graph(g) == []
    # analysis never meets a type error on a validated graph
    res = forward_eval(g, random_profile(g, seed), closed_context(g).input_dist)
    assert abs(res.output_dist.total() - 1) < 1e-9
    assert parse(pretty(program)) == program
