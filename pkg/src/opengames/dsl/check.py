"""Name resolution and interface checking.

The checker resolves every type expression to a :class:`WireType`, computes
the :class:`Interface` of every game and game expression, and checks all
statements.  A program that passes elaborates to a valid graph; value-level
failures (a nature row whose weights do not sum to one, a value outside a
non-range integer enum) are the only errors left to elaboration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..combinators import Interface
from ..diagnostics import Diagnostic, Span
from ..types import Enum, Product, Sum, Unit, WireType, WireTypeError, enum_range, pack_type
from . import ast as A
from .expr import ExprError, NumT, Scope, convert_error, infer


@dataclass
class TypedProgram:
    program: A.Program
    entry: str
    types: dict[str, WireType]
    players: list[str]
    params: dict[str, int | float]
    variants: frozenset
    games: dict[str, A.GameDecl]
    interfaces: dict[str, Interface]
    holes: dict[str, tuple[tuple[str, Interface], ...]]
    # annotations keyed by id() of AST nodes
    resolved: dict[int, WireType] = field(default_factory=dict)
    expr_interfaces: dict[int, Interface] = field(default_factory=dict)

    def type_of(self, t: A.TypeExpr) -> WireType:
        return self.resolved[id(t)]


class _Fail(Exception):
    pass


def dedupe(names: list[str], reserved: set[str] | None = None) -> list[str]:
    """Suffix repeated names with ``_2``, ``_3``, ... avoiding ``reserved``."""
    taken = set(reserved or ())
    out = []
    for n in names:
        cand, k = n, 1
        while cand in taken:
            k += 1
            cand = f"{n}_{k}"
        taken.add(cand)
        out.append(cand)
    return out


def stmt_ids(body: A.Body, holes: set[str] = frozenset()) -> list[str | None]:
    """Atom id (or call label) generated by each statement of a body.

    Decisions, natures and functions take their first binder's name, holes
    their own name; game calls take their label (default: callee name) and
    payoffs ``payoff_<player>``, deduplicated in statement order.
    """
    fixed = set()
    for s in body.stmts:
        if isinstance(s, A.Bind):
            r = s.rhs
            if isinstance(r, A.CallRhs):
                if r.label is not None:
                    fixed.add(r.label)
                elif r.callee in holes:
                    fixed.add(r.callee)
            else:
                fixed.add(s.names[0])
    fixed.add("ret")
    wanted, slots = [], []
    for i, s in enumerate(body.stmts):
        if isinstance(s, A.PayoffStmt):
            wanted.append(f"payoff_{s.player}")
            slots.append(i)
        elif isinstance(s.rhs, A.CallRhs) and s.rhs.label is None and s.rhs.callee not in holes:
            wanted.append(s.rhs.callee)
            slots.append(i)
    generated = dict(zip(slots, dedupe(wanted, fixed)))
    out: list[str | None] = []
    for i, s in enumerate(body.stmts):
        if i in generated:
            out.append(generated[i])
        elif isinstance(s.rhs, A.CallRhs):
            out.append(s.rhs.label if s.rhs.label is not None else s.rhs.callee)
        else:
            out.append(s.names[0])
    return out


def item_labels(items) -> list[str]:
    """Prefix labels for the parts of a seq/par expression."""
    explicit = {label for label, _ in items if label is not None}
    defaults = []
    for label, x in items:
        if label is None:
            if isinstance(x, A.GRef):
                defaults.append(x.name)
            elif isinstance(x, A.GUse):
                defaults.append(x.template)
            else:
                defaults.append(type(x).__name__[1:].lower())
    gen = iter(dedupe(defaults, explicit))
    return [label if label is not None else next(gen) for label, _ in items]


class Checker:
    def __init__(self, program: A.Program, entry: str | None = None, params=None):
        self.p = program
        self.entry_override = entry
        self.param_overrides = dict(params or {})
        self.diags: list[Diagnostic] = []
        self.types: dict[str, WireType] = {}
        self.type_decls: dict[str, A.TypeDecl] = {}
        self.players: list[str] = []
        self.params: dict[str, int | float] = {}
        self.games: dict[str, A.GameDecl] = {}
        self.interfaces: dict[str, Interface] = {}
        self.holes: dict[str, tuple] = {}
        self.resolved: dict[int, WireType] = {}
        self.expr_ifaces: dict[int, Interface] = {}
        self.state: dict[str, str] = {}  # game name -> "busy" | "done" | "failed"
        self.variants = frozenset(
            v for t in _walk_types(program) if isinstance(t, A.TEnum) for v in t.variants
        )

    def report(self, rule: str, message: str, span: Span | None, subject: str = "") -> None:
        self.diags.append(Diagnostic(rule, message, subject=subject, span=span))

    # -- types ---------------------------------------------------------------

    def resolve(self, t: A.TypeExpr, busy: tuple = ()) -> WireType:
        out = self._resolve(t, busy)
        self.resolved[id(t)] = out
        return out

    def _resolve(self, t: A.TypeExpr, busy: tuple) -> WireType:
        if isinstance(t, A.TUnit):
            return Unit
        if isinstance(t, A.TName):
            if t.name in self.types:
                return self.types[t.name]
            if t.name in busy:
                self.report("type.recursion", f"type {t.name!r} is defined in terms of itself", t.span)
                raise _Fail
            decl = self.type_decls.get(t.name)
            if decl is None:
                self.report("type.unknown-name", f"unknown type {t.name!r}", t.span)
                raise _Fail
            return self.declare_type(decl, busy + (t.name,))
        if isinstance(t, A.TEnum):
            try:
                return Enum("{" + ", ".join(t.variants) + "}", t.variants)
            except WireTypeError as exc:
                self.report("type.bad-type", str(exc), t.span)
                raise _Fail from None
        if isinstance(t, A.TRange):
            if t.hi < t.lo:
                self.report("type.bad-type", f"range {t.lo}..{t.hi} is empty", t.span)
                raise _Fail
            return enum_range(t.lo, t.hi)
        if isinstance(t, A.TProduct):
            return Product(tuple(self.resolve(c, busy) for c in t.items))
        if isinstance(t, A.TSum):
            alts = tuple((tag, self.resolve(c, busy)) for tag, c in t.alts)
            try:
                return Sum(alts)
            except WireTypeError as exc:
                self.report("type.bad-type", str(exc), t.span)
                raise _Fail from None
        raise _Fail

    def declare_type(self, d: A.TypeDecl, busy: tuple = ()) -> WireType:
        if d.name in self.types:
            return self.types[d.name]
        t = d.type
        if isinstance(t, A.TEnum):
            try:
                wt = Enum(d.name, t.variants)
            except WireTypeError as exc:
                self.report("type.bad-type", str(exc), t.span)
                raise _Fail from None
            self.resolved[id(t)] = wt
        elif isinstance(t, A.TRange):
            if t.hi < t.lo:
                self.report("type.bad-type", f"range {t.lo}..{t.hi} is empty", t.span)
                raise _Fail
            wt = enum_range(t.lo, t.hi, d.name)
            self.resolved[id(t)] = wt
        else:
            wt = self.resolve(t, busy)
        self.types[d.name] = wt
        return wt

    def types_of(self, ts) -> tuple[WireType, ...]:
        return tuple(self.resolve(t) for t in ts)

    # -- declarations ----------------------------------------------------------

    def run(self) -> TypedProgram | list[Diagnostic]:
        entries = []
        for d in self.p.decls:
            if isinstance(d, A.TypeDecl):
                if d.name in self.type_decls:
                    self.report("type.duplicate", f"type {d.name!r} declared twice", d.span)
                self.type_decls.setdefault(d.name, d)
            elif isinstance(d, A.PlayerDecl):
                for n in d.names:
                    if n in self.players:
                        self.report("type.duplicate", f"player {n!r} declared twice", d.span)
                    else:
                        self.players.append(n)
            elif isinstance(d, A.ParamDecl):
                if d.name in self.params:
                    self.report("type.duplicate", f"parameter {d.name!r} declared twice", d.span)
                self.params[d.name] = d.value
            elif isinstance(d, A.EntryDecl):
                entries.append(d)
            elif isinstance(d, A.GameDecl):
                if d.name in self.games:
                    self.report("type.duplicate", f"game {d.name!r} declared twice", d.span)
                else:
                    self.games[d.name] = d
        for name, value in self.param_overrides.items():
            if name not in self.params:
                self.report("type.unknown-name", f"no parameter named {name!r} to override", None, subject=name)
            else:
                self.params[name] = value
        for d in self.type_decls.values():
            try:
                self.declare_type(d)
            except _Fail:
                pass
        for name in self.games:
            self.check_game(name)

        entry = self.entry_override
        if entry is None:
            if len(entries) > 1:
                for e in entries[1:]:
                    self.report("type.duplicate", "more than one entry declaration", e.span)
            if entries:
                entry = entries[0].name
                span = entries[0].span
            else:
                self.report("type.no-entry", "no entry declaration and no entry override", None)
        else:
            span = None
        if entry is not None:
            g = self.games.get(entry)
            if g is None:
                self.report("type.unknown-name", f"entry game {entry!r} is not declared", span, subject=entry)
            elif g.template:
                self.report("type.hole-binding", f"entry {entry!r} is a template with unbound holes", span, subject=entry)
        if self.diags:
            return self.diags
        return TypedProgram(
            self.p,
            entry,
            dict(self.types),
            list(self.players),
            dict(self.params),
            self.variants,
            dict(self.games),
            dict(self.interfaces),
            dict(self.holes),
            self.resolved,
            self.expr_ifaces,
        )

    def check_game(self, name: str) -> Interface | None:
        st = self.state.get(name)
        if st == "done":
            return self.interfaces[name]
        if st == "failed":
            return None
        if st == "busy":
            self.report("type.recursion", f"game {name!r} refers to itself", self.games[name].span, subject=name)
            self.state[name] = "failed"
            return None
        self.state[name] = "busy"
        d = self.games[name]
        n_before = len(self.diags)
        failed = False
        try:
            holes = []
            seen = set()
            for h in d.holes:
                if h.name in seen:
                    self.report("type.duplicate", f"hole {h.name!r} declared twice", h.span)
                seen.add(h.name)
                holes.append((h.name, Interface(self.types_of(h.inputs), self.types_of(h.outputs))))
            holes = tuple(holes)
            if d.template:
                self.holes[name] = holes
            if d.body is not None:
                iface = Interface(self.types_of(p.type for p in d.params), self.types_of(d.outs))
                self.interfaces[name] = iface
                self.check_body(d, iface, dict(holes))
            else:
                used: list[str] = []
                iface = self.game_expr(d.expr, dict(holes), used)
                if iface is None:
                    raise _Fail
                self.interfaces[name] = iface
                self.check_hole_usage(d, dict(holes), used)
        except _Fail:
            failed = True
        if failed or self.state.get(name) == "failed" or len(self.diags) > n_before:
            self.state[name] = "failed"
            self.interfaces.pop(name, None)
            return None
        self.state[name] = "done"
        return self.interfaces[name]

    def check_hole_usage(self, d: A.GameDecl, holes: dict, used: list[str]) -> None:
        for h in holes:
            n = used.count(h)
            if n != 1:
                self.report(
                    "type.hole-binding",
                    f"hole {h!r} of template {d.name!r} is used {n} times; each hole is used exactly once",
                    d.span,
                    subject=d.name,
                )

    def callee_interface(self, name: str, span, holes: dict, used: list[str]) -> Interface:
        if name in holes:
            used.append(name)
            return holes[name]
        if name not in self.games:
            self.report("type.unknown-name", f"unknown game {name!r}", span, subject=name)
            raise _Fail
        if self.games[name].template:
            self.report(
                "type.hole-binding", f"template {name!r} must be instantiated with 'use ... with'", span, subject=name
            )
            raise _Fail
        iface = self.check_game(name)
        if iface is None:
            raise _Fail
        return iface

    # -- statement bodies --------------------------------------------------------

    def check_body(self, d: A.GameDecl, iface: Interface, holes: dict) -> None:
        env: dict[str, WireType] = {}
        for p, t in zip(d.params, iface.inputs):
            if p.name in env:
                self.report("type.duplicate", f"parameter {p.name!r} declared twice", p.span)
            env[p.name] = t
        scope = Scope(env, self.params, self.variants)
        used: list[str] = []
        ids = stmt_ids(d.body, set(holes))
        seen_ids: dict[str, A.Stmt] = {}
        for s, sid in zip(d.body.stmts, ids):
            if sid in seen_ids or sid == "ret":
                self.report("type.duplicate", f"atom name {sid!r} is used twice in game {d.name!r}", s.span)
            seen_ids[sid] = s
            try:
                self.check_stmt(s, env, scope, holes, used)
            except _Fail:
                pass
            except ExprError as exc:
                self.report("type.mismatch", str(exc), exc.span or s.span)
        if len(d.body.rets) != len(iface.outputs):
            self.report(
                "type.arity",
                f"game {d.name!r} returns {len(d.body.rets)} values but declares {len(iface.outputs)} outputs",
                d.body.span,
            )
        else:
            for i, (e, t) in enumerate(zip(d.body.rets, iface.outputs)):
                self.check_expr_into(e, t, scope, f"return value {i}")
        self.check_hole_usage(d, holes, used)

    def check_expr_into(self, e: A.Expr, t: WireType, scope: Scope, what: str) -> None:
        try:
            et = infer(e, scope)
        except ExprError as exc:
            self.report("type.mismatch" if "unknown" not in str(exc) else "type.unknown-name", str(exc), exc.span or e.span)
            return
        err = convert_error(et, t)
        if err:
            self.report("type.mismatch", f"{what}: {err}", e.span)

    def check_num(self, e: A.Expr, scope: Scope, what: str) -> None:
        try:
            et = infer(e, scope)
        except ExprError as exc:
            self.report("type.mismatch" if "unknown" not in str(exc) else "type.unknown-name", str(exc), exc.span or e.span)
            return
        if not isinstance(et, NumT):
            self.report("type.mismatch", f"{what} must be a number, got {et}", e.span)

    def bind(self, s: A.Bind, env: dict, types) -> None:
        if len(s.names) != len(types):
            self.report("type.arity", f"{len(s.names)} names bound to {len(types)} values", s.span)
            raise _Fail
        for n, t in zip(s.names, types):
            if n in env:
                self.report("type.duplicate", f"variable {n!r} is bound twice", s.span)
            env[n] = t

    def check_stmt(self, s: A.Stmt, env: dict, scope: Scope, holes: dict, used: list[str]) -> None:
        if isinstance(s, A.PayoffStmt):
            if s.player not in self.players:
                self.report("type.unknown-name", f"unknown player {s.player!r}", s.span, subject=s.player)
            self.check_num(s.body, scope, "payoff")
            return
        r = s.rhs
        if isinstance(r, A.DecisionRhs):
            if r.owner not in self.players:
                self.report("type.unknown-name", f"unknown player {r.owner!r}", r.span, subject=r.owner)
            for o in r.obs:
                if o not in env:
                    self.report("type.unknown-name", f"unknown variable {o!r}", r.span, subject=o)
            self.bind(s, env, (self.resolve(r.action),))
            return
        if isinstance(r, A.NatureRhs):
            out = self.resolve(r.out)
            for v, w in r.outcomes:
                self.check_expr_into(v, out, scope, "nature outcome")
                self.check_num(w, scope, "nature weight")
            self.bind(s, env, (out,))
            return
        if isinstance(r, A.FunRhs):
            outs = self.types_of(r.outs)
            self.check_expr_into(r.body, pack_type(outs) if len(outs) != 1 else outs[0], scope, "function body")
            self.bind(s, env, outs)
            return
        if isinstance(r, A.CallRhs):
            iface = self.callee_interface(r.callee, r.span, holes, used)
            if len(r.args) != len(iface.inputs):
                self.report(
                    "type.arity",
                    f"{r.callee} takes {len(iface.inputs)} inputs, given {len(r.args)}",
                    r.span,
                    subject=r.callee,
                )
            else:
                for i, (a, t) in enumerate(zip(r.args, iface.inputs)):
                    if a not in env:
                        self.report("type.unknown-name", f"unknown variable {a!r}", r.span, subject=a)
                    elif env[a] != t:
                        self.report(
                            "type.mismatch",
                            f"argument {i} of {r.callee}: expected {t}, found {env[a]} ({a})",
                            r.span,
                            subject=r.callee,
                        )
            self.bind(s, env, iface.outputs)
            return

    # -- game expressions -----------------------------------------------------------

    def game_expr(self, g: A.GameExpr, holes: dict, used: list[str], in_branch: bool = False) -> Interface | None:
        try:
            iface = self._game_expr(g, holes, used, in_branch)
        except _Fail:
            return None
        if iface is not None:
            self.expr_ifaces[id(g)] = iface
        return iface

    def _game_expr(self, g, holes, used, in_branch) -> Interface | None:
        if isinstance(g, A.GRef):
            if g.name in holes and in_branch:
                self.report("type.hole-binding", f"hole {g.name!r} cannot be used inside a branch arm", g.span)
                raise _Fail
            return self.callee_interface(g.name, g.span, holes, used)
        if isinstance(g, (A.GSeq, A.GPar)):
            labels = [label for label, _ in g.items if label is not None]
            for dup in sorted({x for x in labels if labels.count(x) > 1}):
                self.report("type.duplicate", f"label {dup!r} used twice", g.span)
            parts = [self.game_expr(x, holes, used, in_branch) for _, x in g.items]
            if any(p is None for p in parts):
                raise _Fail
            if isinstance(g, A.GPar):
                ins = tuple(t for p in parts for t in p.inputs)
                outs = tuple(t for p in parts for t in p.outputs)
                return Interface(ins, outs)
            ok = True
            for k in range(len(parts) - 1):
                a, b = parts[k], parts[k + 1]
                if len(a.outputs) != len(b.inputs):
                    self.report(
                        "type.arity",
                        f"seq position {k + 1}: {len(a.outputs)} outputs feed {len(b.inputs)} inputs of position {k + 2}",
                        g.items[k + 1][1].span or g.span,
                    )
                    ok = False
                    continue
                for j, (x, y) in enumerate(zip(a.outputs, b.inputs)):
                    if x != y:
                        self.report(
                            "type.mismatch",
                            f"seq position {k + 1} output {j} has type {x} but position {k + 2} "
                            f"input {j} expects {y}",
                            g.items[k + 1][1].span or g.span,
                        )
                        ok = False
            if not ok:
                raise _Fail
            return Interface(parts[0].inputs, parts[-1].outputs)
        if isinstance(g, A.GBranch):
            tags = [t for t, _ in g.arms]
            if len(g.arms) < 2:
                self.report("type.branch-arms", "a branch needs at least two arms", g.span)
            for dup in sorted({t for t in tags if tags.count(t) > 1}):
                self.report("type.branch-arms", f"branch tag {dup!r} used twice", g.span)
            parts = [self.game_expr(x, holes, used, True) for _, x in g.arms]
            if any(p is None for p in parts) or len(g.arms) < 2 or len(set(tags)) != len(tags):
                raise _Fail
            first = parts[0].outputs
            for (tag, x), p in zip(g.arms[1:], parts[1:]):
                if p.outputs != first:
                    self.report(
                        "type.branch-arms",
                        f"arm {tag!r} outputs ({', '.join(map(str, p.outputs))}) differ from arm "
                        f"{tags[0]!r} outputs ({', '.join(map(str, first))})",
                        x.span or g.span,
                    )
                    raise _Fail
            return Interface((Sum(tuple((t, pack_type(p.inputs)) for t, p in zip(tags, parts))),), first)
        if isinstance(g, A.GUse):
            tpl = self.games.get(g.template)
            if tpl is None:
                self.report("type.unknown-name", f"unknown template {g.template!r}", g.span, subject=g.template)
                raise _Fail
            if not tpl.template:
                self.report("type.hole-binding", f"{g.template!r} is a game, not a template", g.span)
                raise _Fail
            iface = self.check_game(g.template)
            if iface is None:
                raise _Fail
            want = dict(self.holes[g.template])
            given = [h for h, _ in g.bindings]
            ok = True
            for h in sorted({h for h in given if given.count(h) > 1}):
                self.report("type.hole-binding", f"hole {h!r} bound twice", g.span)
                ok = False
            for h in given:
                if h not in want:
                    self.report("type.hole-binding", f"template {g.template!r} has no hole {h!r}", g.span)
                    ok = False
            for h in want:
                if h not in given:
                    self.report("type.hole-binding", f"hole {h!r} of {g.template!r} is not bound", g.span)
                    ok = False
            for h, x in g.bindings:
                bi = self.game_expr(x, holes, used, in_branch)
                if bi is None:
                    ok = False
                elif h in want and bi != want[h]:
                    self.report(
                        "type.hole-binding",
                        f"hole {h!r} expects {want[h]}, bound game has {bi}",
                        x.span or g.span,
                    )
                    ok = False
            if not ok:
                raise _Fail
            return iface
        raise _Fail


def _walk_types(program: A.Program):
    """Every type expression in the program."""

    def walk(t):
        yield t
        if isinstance(t, A.TProduct):
            for c in t.items:
                yield from walk(c)
        elif isinstance(t, A.TSum):
            for _, c in t.alts:
                yield from walk(c)

    for d in program.decls:
        if isinstance(d, A.TypeDecl):
            yield from walk(d.type)
        elif isinstance(d, A.GameDecl):
            for p in d.params or ():
                yield from walk(p.type)
            for t in d.outs or ():
                yield from walk(t)
            for h in d.holes:
                for t in h.inputs + h.outputs:
                    yield from walk(t)
            if d.body is not None:
                for s in d.body.stmts:
                    if isinstance(s, A.Bind):
                        r = s.rhs
                        if isinstance(r, A.DecisionRhs):
                            yield from walk(r.action)
                        elif isinstance(r, A.NatureRhs):
                            yield from walk(r.out)
                        elif isinstance(r, A.FunRhs):
                            for t in r.outs:
                                yield from walk(t)


def typecheck(program: A.Program, entry: str | None = None, params=None) -> TypedProgram | list[Diagnostic]:
    """Resolve and check ``program``; ``params`` overrides ``param`` values."""
    return Checker(program, entry, params).run()
