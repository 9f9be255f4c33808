"""Random model-language inputs for the round-trip and soundness fuzzers."""

from __future__ import annotations

import random

from opengames.dsl import ast as A

NAMES = ("a", "b", "x", "y", "z", "foo", "bar", "Coin", "T1", "g_2", "hi", "lo", "k9", "_p")
OPS = ("or", "and", "==", "!=", "<=", ">=", "<", ">", "+", "-", "*", "/")


# -- arbitrary syntax trees -------------------------------------------------


class AstGen:
    """Syntactically valid trees with no regard for typing."""

    def __init__(self, rng: random.Random):
        self.rng = rng

    def name(self) -> str:
        return self.rng.choice(NAMES)

    def some(self, f, lo: int, hi: int) -> tuple:
        return tuple(f() for _ in range(self.rng.randint(lo, hi)))

    def num(self):
        if self.rng.random() < 0.6:
            return self.rng.randint(0, 1000)
        return self.rng.choice([round(self.rng.uniform(0, 50), 3), 1e-05, 2.5e20, 0.0])

    def variant(self) -> str:
        if self.rng.random() < 0.3:
            return str(self.rng.randint(-5, 5))
        return self.name()

    def type(self, depth: int = 2) -> A.TypeExpr:
        r = self.rng.random()
        if depth <= 0 or r < 0.3:
            return self.rng.choice([A.TUnit(), A.TName(self.name())])
        if r < 0.5:
            return A.TEnum(self.some(self.variant, 1, 4))
        if r < 0.65:
            lo = self.rng.randint(-3, 3)
            return A.TRange(lo, lo + self.rng.randint(0, 4))
        if r < 0.8:
            return A.TProduct(self.some(lambda: self.type(depth - 1), 2, 3))
        return A.TSum(self.some(lambda: (self.name(), self.type(depth - 1)), 1, 3))

    def expr(self, depth: int = 3) -> A.Expr:
        rng = self.rng
        r = rng.random()
        if depth <= 0 or r < 0.25:
            return rng.choice([lambda: A.Num(self.num()), lambda: A.Var(self.name()), lambda: A.UnitLit()])()
        d = depth - 1
        k = rng.randrange(7)
        if k == 0:
            return A.TupleE(self.some(lambda: self.expr(d), 2, 3))
        if k == 1:
            return A.TagE(self.name(), self.expr(d))
        if k == 2:
            return A.BinOp(rng.choice(OPS), self.expr(d), self.expr(d))
        if k == 3:
            return A.UnOp(rng.choice(("-", "not")), self.expr(d))
        if k == 4:
            return A.If(self.expr(d), self.expr(d), self.expr(d))
        if k == 5:
            return A.Let(self.name(), self.expr(d), self.expr(d))
        return A.Call(rng.choice(("min", "max", "abs")), self.some(lambda: self.expr(d), 1, 3))

    def rhs(self) -> A.Rhs:
        k = self.rng.randrange(4)
        if k == 0:
            return A.DecisionRhs(self.name(), self.some(self.name, 0, 3), self.type())
        if k == 1:
            return A.NatureRhs(self.type(), self.some(lambda: (self.expr(1), self.expr(2)), 1, 3))
        if k == 2:
            return A.FunRhs(self.some(self.type, 1, 2), self.expr())
        label = self.name() if self.rng.random() < 0.5 else None
        return A.CallRhs(label, self.name(), self.some(self.name, 0, 3))

    def stmt(self) -> A.Stmt:
        if self.rng.random() < 0.25:
            return A.PayoffStmt(self.name(), self.expr())
        return A.Bind(self.some(self.name, 1, 3), self.rhs())

    def game_expr(self, depth: int = 2) -> A.GameExpr:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.3:
            return A.GRef(self.name())
        d = depth - 1
        item = lambda: (self.name() if rng.random() < 0.5 else None, self.game_expr(d))
        k = rng.randrange(4)
        if k == 0:
            return A.GSeq(self.some(item, 1, 3))
        if k == 1:
            return A.GPar(self.some(item, 1, 3))
        if k == 2:
            return A.GBranch(self.some(lambda: (self.name(), self.game_expr(d)), 1, 3))
        return A.GUse(self.name(), self.some(lambda: (self.name(), self.game_expr(d)), 0, 2))

    def decl(self) -> A.Decl:
        rng = self.rng
        k = rng.randrange(5)
        if k == 0:
            return A.TypeDecl(self.name(), self.type())
        if k == 1:
            return A.PlayerDecl(self.some(self.name, 1, 3))
        if k == 2:
            return A.ParamDecl(self.name(), self.num() * rng.choice((1, -1)))
        if k == 3:
            return A.EntryDecl(self.name())
        template = rng.random() < 0.3
        holes = self.some(lambda: A.HoleDecl(self.name(), self.some(self.type, 0, 2), self.some(self.type, 0, 2)), 0, 2) if template else ()
        if rng.random() < 0.5:
            return A.GameDecl(self.name(), template, holes, expr=self.game_expr())
        params = self.some(lambda: A.Param(self.name(), self.type()), 0, 3)
        body = A.Body(self.some(self.stmt, 0, 4), self.some(self.expr, 0, 3))
        return A.GameDecl(self.name(), template, holes, params, self.some(self.type, 0, 2), body)

    def program(self) -> A.Program:
        return A.Program(self.some(self.decl, 0, 6))


# -- well-typed sources -----------------------------------------------------


class ProgramGen:
    """Well-typed model sources built bottom-up from typed interfaces.

    Types are enums with globally unique variant names, one range and one
    sum; every game is declared before use and every variable is bound once.
    """

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.hi = rng.randint(1, 3)
        n_enums = rng.randint(1, 3)
        self.enums = {f"E{k}": [f"e{k}_{j}" for j in range(rng.randint(2, 3))] for k in range(n_enums)}
        self.sum_alts = [("l", "E0"), ("r", rng.choice(list(self.enums) + ["R"]))]
        self.players = [f"p{i}" for i in range(1, rng.randint(2, 3) + 1)]
        self.decls: list[str] = []
        self.count = 0

    @property
    def base_types(self) -> list[str]:
        return list(self.enums) + ["R"]

    def fresh(self, stem: str) -> str:
        self.count += 1
        return f"{stem}{self.count}"

    def constant(self, t: str) -> str:
        rng = self.rng
        if t == "R":
            return str(rng.randint(0, self.hi))
        if t == "S":
            tag, payload = rng.choice(self.sum_alts)
            return f"{tag}.{self.constant(payload)}"
        return rng.choice(self.enums[t])

    def value(self, t: str, scope: dict[str, str], depth: int = 2) -> str:
        """An expression of type ``t`` over the variables in ``scope``."""
        rng = self.rng
        if depth < 0:
            return self.constant(t)
        same = [v for v, vt in scope.items() if vt == t]
        enums = [v for v, vt in scope.items() if vt in self.enums]
        r = rng.random()
        if same and r < 0.45:
            return rng.choice(same)
        if enums and r < 0.75 and t != "S":
            v = rng.choice(enums)
            cmp = rng.choice(self.enums[scope[v]])
            return f"if {v} == {cmp} then {self.value(t, scope, depth - 1)} else {self.value(t, scope, depth - 1)}"
        if t == "R" and same and r < 0.9:
            return f"min({rng.choice(same)} + 1, {self.hi})"
        if t == "S":
            tag, payload = rng.choice(self.sum_alts)
            return f"{tag}.({self.value(payload, scope, depth - 1)})"
        return self.constant(t)

    def number(self, scope: dict[str, str]) -> str:
        rng = self.rng
        ranges = [v for v, vt in scope.items() if vt == "R"]
        enums = [v for v, vt in scope.items() if vt in self.enums]
        parts = [str(rng.randint(-3, 5))]
        if ranges and rng.random() < 0.6:
            parts.append(f"{rng.randint(1, 3)} * {rng.choice(ranges)}")
        if enums and rng.random() < 0.6:
            v = rng.choice(enums)
            parts.append(f"(if {v} == {rng.choice(self.enums[scope[v]])} then {rng.randint(0, 4)} else w)")
        return " + ".join(parts)

    def sig(self, ins: list[str], outs: list[str]) -> str:
        params = ", ".join(f"x{i}: {t}" for i, t in enumerate(ins))
        return f"({params}) -> [{', '.join(outs)}]"

    def leaf(self, ins: list[str], outs: list[str], callable_games: list) -> str:
        rng = self.rng
        name = self.fresh("G")
        scope = {f"x{i}": t for i, t in enumerate(ins)}
        lines = [f"game {name}{self.sig(ins, outs)} where"]
        for _ in range(rng.randint(1, 4)):
            k = rng.randrange(5)
            if k == 0:
                v, t = self.fresh("d"), rng.choice(self.base_types)
                obs = [o for o in scope if rng.random() < 0.5]
                lines.append(f"  {v} = decision {rng.choice(self.players)} ({', '.join(obs)}) : {t}")
                scope[v] = t
            elif k == 1:
                v, t = self.fresh("n"), rng.choice(list(self.enums))
                vals = self.enums[t]
                cut = rng.choice((0.25, 0.5, 0.75))
                lines.append(f"  {v} = nature : {t} {{ {vals[0]}: {cut}, {vals[1]}: 1 - {cut} }}")
                scope[v] = t
            elif k == 2:
                v, t = self.fresh("f"), rng.choice(self.base_types + ["S"])
                lines.append(f"  {v} = fun : {t} {{ {self.value(t, scope)} }}")
                scope[v] = t
            elif k == 3:
                lines.append(f"  payoff {rng.choice(self.players)} {{ {self.number(scope)} }}")
            else:
                # a call binds at least one name, so only games with outputs qualify
                usable = [
                    (g, gi, go)
                    for g, gi, go in callable_games
                    if go and all(any(t == it for t in scope.values()) for it in gi)
                ]
                if not usable:
                    continue
                g, gi, go = rng.choice(usable)
                args = [rng.choice([v for v, t in scope.items() if t == it]) for it in gi]
                outs_v = [self.fresh("y") for _ in go]
                label = f"{self.fresh('c')}: " if rng.random() < 0.5 else ""
                lines.append(f"  {', '.join(outs_v)} = {label}{g}({', '.join(args)})")
                scope.update(zip(outs_v, go))
        rets = ", ".join(self.value(t, scope) for t in outs)
        lines.append(f"  ret {rets}" if rets else "  ret")
        lines.append("end")
        self.decls.append("\n".join(lines))
        return name

    def types(self, k: int) -> list[str]:
        return [self.rng.choice(self.base_types + ["S"]) for _ in range(k)]

    def game(self, ins: list[str], outs: list[str], depth: int, lib: list) -> str:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.3:
            name = self.leaf(ins, outs, lib)
            lib.append((name, ins, outs))
            return name
        op = rng.choice(("seq", "par", "branch", "template", "inline"))
        d = depth - 1
        if op == "seq":
            mid = self.types(rng.randint(0, 2))
            a, b = self.game(ins, mid, d, lib), self.game(mid, outs, d, lib)
            body = f"seq {a}, {b} end" if rng.random() < 0.5 else f"seq first: {a}, second: {b} end"
        elif op == "par" and ins and outs:
            i, o = rng.randint(0, len(ins)), rng.randint(0, len(outs))
            a, b = self.game(ins[:i], outs[:o], d, lib), self.game(ins[i:], outs[o:], d, lib)
            body = f"par left: {a}, right: {b} end"
        elif op == "branch":
            tag_game = self.leaf(ins, ["S"], lib)
            arms = []
            for tag, payload in self.sum_alts:
                arms.append(f"{tag}: {self.game([payload], outs, d, lib)}")
            body = f"seq pick: {tag_game}, split: branch {' | '.join(arms)} end end"
        elif op == "template":
            inner = self.game(ins, outs, d, lib)
            tpl = self.fresh("Tpl")
            hole = f"hole h : [{', '.join(ins)}] -> [{', '.join(outs)}]"
            if not outs or rng.random() < 0.5:
                self.decls.append(f"template {tpl}\n  {hole}\n  = seq h end")
            else:
                args = ", ".join(f"x{i}" for i in range(len(ins)))
                ys = ", ".join(f"y{j}" for j in range(len(outs)))
                lines = [f"template {tpl}{self.sig(ins, outs)}", f"  {hole}", "where", f"  {ys} = h({args})", f"  ret {ys}", "end"]
                self.decls.append("\n".join(lines))
            body = f"use {tpl} with h = {inner} end"
        else:
            a = self.game(ins, outs, d, lib)
            body = f"seq inner: {a} end"
        name = self.fresh("C")
        self.decls.append(f"game {name} = {body}")
        lib.append((name, ins, outs))
        return name

    def source(self, depth: int = 3) -> str:
        head = [f"type {t} = {{ {', '.join(vs)} }}" for t, vs in self.enums.items()]
        head.append(f"type R = 0..{self.hi}")
        head.append(f"type S = < {' | '.join(f'{tag}: {t}' for tag, t in self.sum_alts)} >")
        head.append(f"player {', '.join(self.players)}")
        head.append(f"param w = {self.rng.randint(0, 4)}")
        entry = self.game([], self.types(self.rng.randint(0, 2)), depth, [])
        return "\n".join(head) + "\n\n" + "\n\n".join(self.decls) + f"\n\nentry {entry}\n"
