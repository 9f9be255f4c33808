"""Recursive-descent parser with panic-mode recovery.

A syntax error abandons the current statement (inside a ``where`` body) or
declaration and resumes at the next token that can start one, so a single
run reports every independent error in a file.
"""

from __future__ import annotations

from ..diagnostics import Diagnostic, Span
from . import ast as A
from .lexer import Token, tokenize

DECL_START = frozenset({"type", "player", "param", "entry", "game", "template"})


class _ParseError(Exception):
    pass


def _join(a: Span, b: Span) -> Span:
    return Span(a.line, a.col, b.end_line, b.end_col)


class Parser:
    def __init__(self, source: str):
        self.tokens, self.diags = tokenize(source)
        self.pos = 0

    # -- token helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    @property
    def last(self) -> Token:
        return self.tokens[self.pos - 1] if self.pos else self.tokens[0]

    def error(self, message: str, rule: str | None = None, tok: Token | None = None):
        tok = tok or self.tok
        if rule is None:
            rule = "syntax.unexpected-end" if tok.kind == "eof" else "syntax.unexpected-token"
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        self.diags.append(Diagnostic(rule, f"{message}, found {found}", span=tok.span))
        raise _ParseError

    def accept(self, text: str) -> Token | None:
        if self.tok.is_(text):
            return self.next()
        return None

    def expect(self, text: str, what: str | None = None) -> Token:
        if self.tok.is_(text):
            return self.next()
        self.error(f"expected {what or repr(text)}")

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind == "ident":
            return self.next()
        self.error(f"expected {what}")

    def span_from(self, start: Token) -> Span:
        return _join(start.span, self.last.span)

    # -- recovery ------------------------------------------------------------

    def sync_decl(self) -> None:
        while self.tok.kind != "eof":
            if self.tok.kind == "keyword" and self.tok.text in DECL_START:
                return
            self.next()

    def sync_stmt(self) -> None:
        depth = 0
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind == "keyword" and t.text in DECL_START:
                return
            if depth <= 0:
                if t.is_("payoff") or t.is_("ret") or t.is_("end"):
                    return
                if t.kind == "ident" and self.peek().is_("=") and self.last.kind != "keyword":
                    return
            if t.is_("{") or t.is_("("):
                depth += 1
            elif t.is_("}") or t.is_(")"):
                depth -= 1
            self.next()

    # -- program -------------------------------------------------------------

    def program(self) -> A.Program:
        decls = []
        while self.tok.kind != "eof":
            start = self.pos
            try:
                decls.append(self.decl())
            except _ParseError:
                if self.pos == start:
                    self.next()
                self.sync_decl()
        end = self.tok
        return A.Program(tuple(decls), Span(1, 1, end.span.end_line, end.span.end_col))

    def decl(self) -> A.Decl:
        t = self.tok
        if t.is_("type"):
            self.next()
            name = self.ident("type name").text
            self.expect("=")
            ty = self.type_expr()
            return A.TypeDecl(name, ty, self.span_from(t))
        if t.is_("player"):
            self.next()
            names = [self.ident("player name").text]
            while self.accept(","):
                names.append(self.ident("player name").text)
            return A.PlayerDecl(tuple(names), self.span_from(t))
        if t.is_("param"):
            self.next()
            name = self.ident("parameter name").text
            self.expect("=")
            neg = self.accept("-") is not None
            num = self.tok
            if num.kind not in ("int", "float"):
                self.error("expected a number")
            self.next()
            value = int(num.text) if num.kind == "int" else float(num.text)
            return A.ParamDecl(name, -value if neg else value, self.span_from(t))
        if t.is_("entry"):
            self.next()
            name = self.ident("game name").text
            self.accept(";")
            return A.EntryDecl(name, self.span_from(t))
        if t.is_("game") or t.is_("template"):
            return self.game_decl()
        self.error("expected a declaration")

    def game_decl(self) -> A.GameDecl:
        start = self.next()
        template = start.text == "template"
        name = self.ident("game name").text
        params = outs = None
        if self.tok.is_("("):
            params = self.params()
            self.expect("->")
            outs = self.type_list()
        holes = []
        while self.tok.is_("hole"):
            if not template:
                self.error("holes are only allowed in templates")
            holes.append(self.hole_decl())
        if params is None:
            self.expect("=", "'=' or a parameter list")
            expr = self.game_expr()
            return A.GameDecl(name, template, tuple(holes), expr=expr, span=self.span_from(start))
        body = self.body()
        return A.GameDecl(name, template, tuple(holes), params, outs, body, span=self.span_from(start))

    def params(self) -> tuple[A.Param, ...]:
        self.expect("(")
        out = []
        if not self.tok.is_(")"):
            while True:
                t = self.ident("parameter name")
                self.expect(":")
                ty = self.type_expr()
                out.append(A.Param(t.text, ty, self.span_from(t)))
                if not self.accept(","):
                    break
        self.expect(")")
        return tuple(out)

    def type_list(self) -> tuple[A.TypeExpr, ...]:
        """A single type or a bracketed, possibly empty, list of types."""
        if self.accept("["):
            out = []
            if not self.tok.is_("]"):
                out.append(self.type_expr())
                while self.accept(","):
                    out.append(self.type_expr())
            self.expect("]")
            return tuple(out)
        return (self.type_expr(),)

    def hole_decl(self) -> A.HoleDecl:
        start = self.expect("hole")
        name = self.ident("hole name").text
        self.expect(":")
        ins = self.type_list()
        self.expect("->")
        outs = self.type_list()
        return A.HoleDecl(name, ins, outs, self.span_from(start))

    # -- types ---------------------------------------------------------------

    def signed_int(self) -> int:
        neg = self.accept("-") is not None
        t = self.tok
        if t.kind != "int":
            self.error("expected an integer")
        self.next()
        return -int(t.text) if neg else int(t.text)

    def type_expr(self) -> A.TypeExpr:
        t = self.tok
        if t.kind == "ident":
            self.next()
            if t.text == "Unit":
                return A.TUnit(t.span)
            return A.TName(t.text, t.span)
        if t.kind == "int" or t.is_("-"):
            lo = self.signed_int()
            self.expect("..", "'..' in range type")
            hi = self.signed_int()
            if hi < lo:
                self.diags.append(
                    Diagnostic("syntax.empty-range", f"range {lo}..{hi} is empty", span=self.span_from(t))
                )
            return A.TRange(lo, hi, self.span_from(t))
        if t.is_("{"):
            self.next()
            variants = [self.variant()]
            while not self.tok.is_("}"):
                if self.tok.is_(","):
                    self.next()
                    variants.append(self.variant())
                elif self.tok.kind in ("ident", "int") or self.tok.is_("-"):
                    self.error("expected ',' between enum variants", "syntax.enum-separator")
                else:
                    self.error("expected ',' or '}' in enum type")
            self.next()
            return A.TEnum(tuple(variants), self.span_from(t))
        if t.is_("("):
            self.next()
            if self.accept(")"):
                return A.TUnit(self.span_from(t))
            items = [self.type_expr()]
            while self.accept(","):
                items.append(self.type_expr())
            self.expect(")")
            if len(items) == 1:
                return items[0]
            return A.TProduct(tuple(items), self.span_from(t))
        if t.is_("<"):
            self.next()
            alts = [self.alt()]
            while self.accept("|"):
                alts.append(self.alt())
            self.expect(">")
            return A.TSum(tuple(alts), self.span_from(t))
        self.error("expected a type")

    def variant(self) -> str:
        t = self.tok
        if t.kind == "ident":
            self.next()
            return t.text
        if t.kind != "int" and not t.is_("-"):
            self.error("expected a variant name or integer")
        return str(self.signed_int())

    def alt(self) -> tuple[str, A.TypeExpr]:
        tag = self.ident("tag").text
        self.expect(":")
        return tag, self.type_expr()

    # -- bodies --------------------------------------------------------------

    def body(self) -> A.Body:
        start = self.expect("where")
        stmts = []
        recovering = False
        while not self.tok.is_("ret"):
            t = self.tok
            if t.kind == "eof" or t.is_("end") or t.kind == "keyword" and t.text in DECL_START:
                if recovering:
                    self.accept("end")
                    raise _ParseError
                self.error("expected 'ret' before the end of the game body")
            at = self.pos
            try:
                stmts.append(self.stmt())
            except _ParseError:
                recovering = True
                if self.pos == at:
                    self.next()
                self.sync_stmt()
        self.expect("ret")
        rets = []
        if not self.tok.is_("end"):
            rets.append(self.expr())
            while self.accept(","):
                rets.append(self.expr())
        self.expect("end")
        return A.Body(tuple(stmts), tuple(rets), self.span_from(start))

    def stmt(self) -> A.Stmt:
        t = self.tok
        if t.is_("payoff"):
            self.next()
            player = self.ident("player name").text
            self.expect("{")
            e = self.expr()
            self.expect("}")
            return A.PayoffStmt(player, e, self.span_from(t))
        names = [self.ident("a binding or 'payoff'").text]
        while self.accept(","):
            names.append(self.ident("binding name").text)
        self.expect("=")
        rhs = self.rhs()
        return A.Bind(tuple(names), rhs, self.span_from(t))

    def rhs(self) -> A.Rhs:
        t = self.tok
        if t.is_("decision"):
            self.next()
            owner = self.ident("player name").text
            obs = self.name_args()
            self.expect(":")
            return A.DecisionRhs(owner, obs, self.type_expr(), self.span_from(t))
        if t.is_("nature"):
            self.next()
            self.expect(":")
            ty = self.type_expr()
            self.expect("{")
            outcomes = []
            while True:
                v = self.expr()
                self.expect(":")
                outcomes.append((v, self.expr()))
                if not self.accept(","):
                    break
            self.expect("}")
            return A.NatureRhs(ty, tuple(outcomes), self.span_from(t))
        if t.is_("fun"):
            self.next()
            self.expect(":")
            outs = [self.type_expr()]
            while self.accept(","):
                outs.append(self.type_expr())
            self.expect("{")
            e = self.expr()
            self.expect("}")
            return A.FunRhs(tuple(outs), e, self.span_from(t))
        if t.kind == "ident":
            label = None
            if self.peek().is_(":"):
                label = self.next().text
                self.next()
            callee = self.ident("game name").text
            args = self.name_args()
            return A.CallRhs(label, callee, args, self.span_from(t))
        self.error("expected 'decision', 'nature', 'fun' or a game call")

    def name_args(self) -> tuple[str, ...]:
        self.expect("(")
        out = []
        if not self.tok.is_(")"):
            out.append(self.ident("variable").text)
            while self.accept(","):
                out.append(self.ident("variable").text)
        self.expect(")")
        return tuple(out)

    # -- expressions ---------------------------------------------------------

    def expr(self) -> A.Expr:
        return self.or_expr()

    def or_expr(self) -> A.Expr:
        start = self.tok
        e = self.and_expr()
        while self.accept("or"):
            e = A.BinOp("or", e, self.and_expr(), self.span_from(start))
        return e

    def and_expr(self) -> A.Expr:
        start = self.tok
        e = self.not_expr()
        while self.accept("and"):
            e = A.BinOp("and", e, self.not_expr(), self.span_from(start))
        return e

    def not_expr(self) -> A.Expr:
        start = self.tok
        if self.accept("not"):
            return A.UnOp("not", self.not_expr(), self.span_from(start))
        return self.cmp_expr()

    def cmp_expr(self) -> A.Expr:
        start = self.tok
        e = self.add_expr()
        for op in ("==", "!=", "<=", ">=", "<", ">"):
            if self.accept(op):
                return A.BinOp(op, e, self.add_expr(), self.span_from(start))
        return e

    def add_expr(self) -> A.Expr:
        start = self.tok
        e = self.mul_expr()
        while self.tok.is_("+") or self.tok.is_("-"):
            op = self.next().text
            e = A.BinOp(op, e, self.mul_expr(), self.span_from(start))
        return e

    def mul_expr(self) -> A.Expr:
        start = self.tok
        e = self.unary()
        while self.tok.is_("*") or self.tok.is_("/"):
            op = self.next().text
            e = A.BinOp(op, e, self.unary(), self.span_from(start))
        return e

    def unary(self) -> A.Expr:
        start = self.tok
        if self.accept("-"):
            return A.UnOp("-", self.unary(), self.span_from(start))
        return self.primary()

    def primary(self) -> A.Expr:
        t = self.tok
        if t.kind == "int":
            self.next()
            return A.Num(int(t.text), t.span)
        if t.kind == "float":
            self.next()
            return A.Num(float(t.text), t.span)
        if t.is_("unit"):
            self.next()
            return A.UnitLit(t.span)
        if t.is_("if"):
            self.next()
            c = self.expr()
            self.expect("then")
            a = self.expr()
            self.expect("else")
            b = self.expr()
            return A.If(c, a, b, self.span_from(t))
        if t.is_("let"):
            self.next()
            name = self.ident("variable").text
            self.expect("=")
            v = self.expr()
            self.expect("in")
            return A.Let(name, v, self.expr(), self.span_from(t))
        if t.kind == "ident":
            self.next()
            if self.tok.is_("("):
                self.next()
                args = [self.expr()]
                while self.accept(","):
                    args.append(self.expr())
                self.expect(")")
                return A.Call(t.text, tuple(args), self.span_from(t))
            if self.tok.is_("."):
                self.next()
                return A.TagE(t.text, self.primary(), self.span_from(t))
            return A.Var(t.text, t.span)
        if t.is_("("):
            self.next()
            items = [self.expr()]
            while self.accept(","):
                items.append(self.expr())
            self.expect(")")
            if len(items) == 1:
                return items[0]
            return A.TupleE(tuple(items), self.span_from(t))
        self.error("expected an expression")

    # -- game expressions ----------------------------------------------------

    def game_expr(self) -> A.GameExpr:
        t = self.tok
        if t.is_("seq") or t.is_("par"):
            self.next()
            items = [self.game_item()]
            while self.accept(","):
                items.append(self.game_item())
            self.expect("end")
            cls = A.GSeq if t.text == "seq" else A.GPar
            return cls(tuple(items), self.span_from(t))
        if t.is_("branch"):
            self.next()
            arms = [self.arm()]
            while self.accept("|"):
                arms.append(self.arm())
            self.expect("end")
            return A.GBranch(tuple(arms), self.span_from(t))
        if t.is_("use"):
            self.next()
            name = self.ident("template name").text
            bindings = []
            if self.accept("with"):
                while True:
                    hole = self.ident("hole name").text
                    self.expect("=")
                    bindings.append((hole, self.game_expr()))
                    if not self.accept(","):
                        break
            self.expect("end")
            return A.GUse(name, tuple(bindings), self.span_from(t))
        if t.kind == "ident":
            self.next()
            return A.GRef(t.text, t.span)
        if t.is_("("):
            self.next()
            e = self.game_expr()
            self.expect(")")
            return e
        self.error("expected a game expression")

    def game_item(self) -> tuple[str | None, A.GameExpr]:
        label = None
        if self.tok.kind == "ident" and self.peek().is_(":"):
            label = self.next().text
            self.next()
        return label, self.game_expr()

    def arm(self) -> tuple[str, A.GameExpr]:
        tag = self.ident("branch tag").text
        self.expect(":")
        return tag, self.game_expr()


def parse(source: str) -> A.Program | list[Diagnostic]:
    """Parse model source; a Program on success, otherwise diagnostics."""
    p = Parser(source)
    prog = p.program()
    if p.diags:
        return p.diags
    return prog
