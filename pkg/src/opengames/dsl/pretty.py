"""Source printer; ``parse(pretty(p)) == p`` for every parseable program.

Compound expressions are always parenthesised, which keeps the printer
independent of operator precedence.
"""

from __future__ import annotations

from . import ast as A


def pretty_type(t: A.TypeExpr) -> str:
    if isinstance(t, A.TUnit):
        return "Unit"
    if isinstance(t, A.TName):
        return t.name
    if isinstance(t, A.TEnum):
        return "{ " + ", ".join(t.variants) + " }"
    if isinstance(t, A.TRange):
        return f"{t.lo}..{t.hi}"
    if isinstance(t, A.TProduct):
        return "(" + ", ".join(pretty_type(c) for c in t.items) + ")"
    if isinstance(t, A.TSum):
        return "< " + " | ".join(f"{tag}: {pretty_type(c)}" for tag, c in t.alts) + " >"
    raise TypeError(t)


def _types(ts) -> str:
    return "[" + ", ".join(pretty_type(t) for t in ts) + "]"


def _num(v: int | float) -> str:
    return str(v) if isinstance(v, int) else repr(float(v))


def pretty_expr(e: A.Expr) -> str:
    if isinstance(e, A.Num):
        return _num(e.value)
    if isinstance(e, A.Var):
        return e.name
    if isinstance(e, A.UnitLit):
        return "unit"
    if isinstance(e, A.TupleE):
        return "(" + ", ".join(pretty_expr(x) for x in e.items) + ")"
    if isinstance(e, A.TagE):
        return f"{e.tag}.{pretty_expr(e.value)}"
    if isinstance(e, A.BinOp):
        return f"({pretty_expr(e.left)} {e.op} {pretty_expr(e.right)})"
    if isinstance(e, A.UnOp):
        sep = " " if e.op == "not" else ""
        return f"({e.op}{sep}{pretty_expr(e.operand)})"
    if isinstance(e, A.If):
        return f"(if {pretty_expr(e.cond)} then {pretty_expr(e.then)} else {pretty_expr(e.other)})"
    if isinstance(e, A.Let):
        return f"(let {e.name} = {pretty_expr(e.value)} in {pretty_expr(e.body)})"
    if isinstance(e, A.Call):
        return f"{e.fn}(" + ", ".join(pretty_expr(x) for x in e.args) + ")"
    raise TypeError(e)


def _rhs(r: A.Rhs) -> str:
    if isinstance(r, A.DecisionRhs):
        return f"decision {r.owner} ({', '.join(r.obs)}) : {pretty_type(r.action)}"
    if isinstance(r, A.NatureRhs):
        body = ", ".join(f"{pretty_expr(v)}: {pretty_expr(w)}" for v, w in r.outcomes)
        return f"nature : {pretty_type(r.out)} {{ {body} }}"
    if isinstance(r, A.FunRhs):
        return f"fun : {', '.join(pretty_type(t) for t in r.outs)} {{ {pretty_expr(r.body)} }}"
    if isinstance(r, A.CallRhs):
        label = f"{r.label}: " if r.label is not None else ""
        return f"{label}{r.callee}({', '.join(r.args)})"
    raise TypeError(r)


def _stmt(s: A.Stmt) -> str:
    if isinstance(s, A.PayoffStmt):
        return f"payoff {s.player} {{ {pretty_expr(s.body)} }}"
    return f"{', '.join(s.names)} = {_rhs(s.rhs)}"


def pretty_game_expr(g: A.GameExpr, indent: int = 1) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(g, A.GRef):
        return g.name
    if isinstance(g, (A.GSeq, A.GPar)):
        kw = "seq" if isinstance(g, A.GSeq) else "par"
        items = []
        for label, x in g.items:
            head = f"{label}: " if label is not None else ""
            items.append(inner + head + pretty_game_expr(x, indent + 1))
        return f"{kw}\n" + ",\n".join(items) + f"\n{pad}end"
    if isinstance(g, A.GBranch):
        arms = [f"{tag}: {pretty_game_expr(x, indent + 1)}" for tag, x in g.arms]
        return f"branch\n{inner}" + f"\n{pad}| ".join(arms) + f"\n{pad}end"
    if isinstance(g, A.GUse):
        if not g.bindings:
            return f"use {g.template} end"
        binds = [f"{inner}{h} = {pretty_game_expr(x, indent + 1)}" for h, x in g.bindings]
        return f"use {g.template} with\n" + ",\n".join(binds) + f"\n{pad}end"
    raise TypeError(g)


def _game(d: A.GameDecl) -> str:
    kw = "template" if d.template else "game"
    head = f"{kw} {d.name}"
    if d.params is not None:
        ps = ", ".join(f"{p.name}: {pretty_type(p.type)}" for p in d.params)
        head += f"({ps}) -> {_types(d.outs)}"
    lines = [head]
    for h in d.holes:
        lines.append(f"  hole {h.name} : {_types(h.inputs)} -> {_types(h.outputs)}")
    if d.expr is not None:
        lines.append("  = " + pretty_game_expr(d.expr))
        return "\n".join(lines)
    lines.append("where")
    for s in d.body.stmts:
        lines.append("  " + _stmt(s))
    rets = ", ".join(pretty_expr(e) for e in d.body.rets)
    lines.append(f"  ret {rets}" if rets else "  ret")
    lines.append("end")
    return "\n".join(lines)


def pretty_decl(d: A.Decl) -> str:
    if isinstance(d, A.TypeDecl):
        return f"type {d.name} = {pretty_type(d.type)}"
    if isinstance(d, A.PlayerDecl):
        return "player " + ", ".join(d.names)
    if isinstance(d, A.ParamDecl):
        return f"param {d.name} = {_num(d.value)}"
    if isinstance(d, A.EntryDecl):
        return f"entry {d.name};"
    if isinstance(d, A.GameDecl):
        return _game(d)
    raise TypeError(d)


def pretty(p: A.Program) -> str:
    out = []
    prev = None
    for d in p.decls:
        kind = type(d)
        if prev is not None and (kind is A.GameDecl or prev is A.GameDecl or kind is not prev):
            out.append("")
        out.append(pretty_decl(d))
        prev = kind
    return "\n".join(out) + "\n"
