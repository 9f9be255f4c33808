"""Translate checked programs into game graphs.

Statement bodies become atoms wired by variable; expression bodies are
tabulated over every assignment of the variables they read.  Combinator
expressions map onto the combinator functions one to one.
"""

from __future__ import annotations

import itertools

from ..combinators import GameTemplate, Interface, branch, inline, par_all, seq_all, substitute
from ..diagnostics import Diagnostic
from ..dist import Dist
from ..graph import BOUNDARY, Decision, Function, GameGraph, Hole, Nature, Payoff, Port, Wire, rename_graph
from ..types import pack_type
from . import ast as A
from .check import TypedProgram, item_labels, stmt_ids
from .expr import ExprError, TagV, evaluate, free_vars, from_expr, to_expr

DEFAULT_TABLE_BUDGET = 10**6


class ElaborationError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


class _Elab:
    def __init__(self, tp: TypedProgram, budget: int):
        self.tp = tp
        self.budget = budget
        self.graphs: dict[str, GameGraph] = {}
        self.templates: dict[str, GameTemplate] = {}

    def fail(self, rule: str, message: str, span=None):
        raise ElaborationError([Diagnostic(rule, message, span=span)])

    # -- games -----------------------------------------------------------------

    def game(self, name: str) -> GameGraph:
        if name not in self.graphs:
            d = self.tp.games[name]
            self.graphs[name] = self.body(d, {}) if d.body is not None else self.expr(d.expr, {})
        return self.graphs[name]

    def template(self, name: str) -> GameTemplate:
        if name not in self.templates:
            d = self.tp.games[name]
            holes = self.tp.holes[name]
            if d.body is not None:
                g = self.body(d, dict(holes))
            else:
                g = self.expr(d.expr, dict(holes))
                # hole atoms picked up label prefixes; restore their names
                names = {a.id: a.id.rsplit("/", 1)[-1] for a in g.atoms if isinstance(a, Hole)}
                g = rename_graph(g, lambda i: names.get(i, i))
            self.templates[name] = GameTemplate(g, holes)
        return self.templates[name]

    def expr(self, g: A.GameExpr, holes: dict[str, Interface]) -> GameGraph:
        if isinstance(g, A.GRef):
            if g.name in holes:
                h = holes[g.name]
                return _single(Hole(g.name, h.inputs, h.outputs), h.inputs, h.outputs)
            return self.game(g.name)
        if isinstance(g, A.GSeq):
            return seq_all([self.expr(x, holes) for _, x in g.items], item_labels(g.items))
        if isinstance(g, A.GPar):
            return par_all([self.expr(x, holes) for _, x in g.items], item_labels(g.items))
        if isinstance(g, A.GBranch):
            return branch([(tag, self.expr(x, holes)) for tag, x in g.arms])
        if isinstance(g, A.GUse):
            tpl = self.template(g.template)
            return substitute(tpl, {h: self.expr(x, holes) for h, x in g.bindings})
        raise TypeError(g)

    # -- statement bodies ------------------------------------------------------------

    def body(self, d: A.GameDecl, holes: dict[str, Interface]) -> GameGraph:
        tp = self.tp
        iface = tp.interfaces[d.name]
        env: dict[str, tuple[Port, object]] = {}
        for i, (p, t) in enumerate(zip(d.params, iface.inputs)):
            env[p.name] = (Port(BOUNDARY, i), t)
        atoms, wires, players, calls = [], [], set(), []

        def feed(atom_id: str, names) -> None:
            for i, n in enumerate(names):
                src, t = env[n]
                wires.append(Wire(src, Port(atom_id, i), t))

        for s, sid in zip(d.body.stmts, stmt_ids(d.body, set(holes))):
            if isinstance(s, A.PayoffStmt):
                names = free_vars(s.body, env)
                types = tuple(env[n][1] for n in names)
                rows = {}
                for key, scope in self.rows(names, types, s.span):
                    rows[key] = float(self.eval(s.body, scope, s.span))
                atoms.append(Payoff(sid, types, s.player, rows))
                feed(sid, names)
                players.add(s.player)
                continue
            r = s.rhs
            if isinstance(r, A.DecisionRhs):
                action = tp.type_of(r.action)
                types = tuple(env[n][1] for n in r.obs)
                atoms.append(Decision(sid, r.owner, types, action))
                feed(sid, r.obs)
                players.add(r.owner)
                env[s.names[0]] = (Port(sid, 0), action)
            elif isinstance(r, A.NatureRhs):
                out = tp.type_of(r.out)
                names = []
                for v, w in r.outcomes:
                    free_vars(v, env, out=names)
                    free_vars(w, env, out=names)
                types = tuple(env[n][1] for n in names)
                rows = {}
                for key, scope in self.rows(names, types, s.span):
                    weights: dict = {}
                    for v, w in r.outcomes:
                        value = self.store(self.eval(v, scope, v.span), out, v.span)
                        p = float(self.eval(w, scope, w.span))
                        if p < 0:
                            self.fail("elab.value", f"negative weight {p} in nature {sid!r}", w.span)
                        weights[value] = weights.get(value, 0.0) + p
                    try:
                        rows[key] = Dist(weights.items())
                    except ValueError as exc:
                        self.fail("elab.value", f"nature {sid!r}: {exc}", r.span)
                atoms.append(Nature(sid, types, out, rows))
                feed(sid, names)
                env[s.names[0]] = (Port(sid, 0), out)
            elif isinstance(r, A.FunRhs):
                outs = tuple(tp.type_of(t) for t in r.outs)
                names = free_vars(r.body, env)
                types = tuple(env[n][1] for n in names)
                target = outs[0] if len(outs) == 1 else pack_type(outs)
                rows = {}
                for key, scope in self.rows(names, types, s.span):
                    v = self.store(self.eval(r.body, scope, r.span), target, r.span)
                    rows[key] = (v,) if len(outs) == 1 else tuple(v)
                atoms.append(Function(sid, types, outs, rows))
                feed(sid, names)
                for j, (n, t) in enumerate(zip(s.names, outs)):
                    env[n] = (Port(sid, j), t)
            elif isinstance(r, A.CallRhs):
                callee = holes.get(r.callee) or tp.interfaces[r.callee]
                atoms.append(Hole(sid, callee.inputs, callee.outputs))
                feed(sid, r.args)
                if r.callee not in holes:
                    calls.append((sid, r.callee))
                for j, (n, t) in enumerate(zip(s.names, callee.outputs)):
                    env[n] = (Port(sid, j), t)

        direct = all(isinstance(e, A.Var) and e.name in env for e in d.body.rets) and all(
            env[e.name][1] == t for e, t in zip(d.body.rets, iface.outputs)
        )
        if direct:
            # plain wires are returned as they are, without a table
            wires.extend(Wire(env[e.name][0], Port(BOUNDARY, j), t) for j, (e, t) in enumerate(zip(d.body.rets, iface.outputs)))
        elif d.body.rets or iface.outputs:
            names = []
            for e in d.body.rets:
                free_vars(e, env, out=names)
            types = tuple(env[n][1] for n in names)
            outs = iface.outputs
            rows = {}
            for key, scope in self.rows(names, types, d.body.span):
                rows[key] = tuple(
                    self.store(self.eval(e, scope, e.span), t, e.span) for e, t in zip(d.body.rets, outs)
                )
            atoms.append(Function("ret", types, outs, rows))
            feed("ret", names)
            wires.extend(Wire(Port("ret", j), Port(BOUNDARY, j), t) for j, t in enumerate(outs))

        g = GameGraph(tuple(atoms), tuple(wires), iface.inputs, iface.outputs, frozenset(players))
        for label, callee in calls:
            g = inline(g, label, self.game(callee).renamed(label))
        return g

    # -- tables --------------------------------------------------------------------------

    def rows(self, names, types, span):
        size = 1
        for t in types:
            size *= t.cardinality
        if size > self.budget:
            self.fail("elab.budget", f"table of {size} rows exceeds the budget of {self.budget}", span)
        for combo in itertools.product(*(t.values for t in types)):
            scope = {n: to_expr(v, t) for n, v, t in zip(names, combo, types)}
            key = combo[0] if len(combo) == 1 else tuple(combo)
            yield key, scope

    def eval(self, e: A.Expr, scope, span):
        try:
            return evaluate(e, scope, self.tp.params)
        except ExprError as exc:
            self.fail("elab.value", str(exc), exc.span or span)
        except (TypeError, ArithmeticError) as exc:
            self.fail("elab.value", f"cannot evaluate expression: {exc}", span)

    def store(self, x, t, span):
        try:
            return from_expr(x, t)
        except ExprError as exc:
            self.fail("elab.value", str(exc), span)
        except (KeyError, TypeError, ValueError) as exc:
            self.fail("elab.value", f"value {_show(x)} does not fit {t}: {exc}", span)


def _show(x) -> str:
    if isinstance(x, TagV):
        return f"{x.tag}.{_show(x.value)}"
    return repr(x)


def _single(atom, inputs, outputs) -> GameGraph:
    wires = [Wire(Port(BOUNDARY, i), Port(atom.id, i), t) for i, t in enumerate(inputs)]
    wires += [Wire(Port(atom.id, j), Port(BOUNDARY, j), t) for j, t in enumerate(outputs)]
    return GameGraph((atom,), tuple(wires), tuple(inputs), tuple(outputs), frozenset())


def elaborate(tp: TypedProgram, budget: int = DEFAULT_TABLE_BUDGET) -> GameGraph:
    """Graph of the entry game; raises :class:`ElaborationError`."""
    return _Elab(tp, budget).game(tp.entry)


def elaborate_game(tp: TypedProgram, name: str, budget: int = DEFAULT_TABLE_BUDGET) -> GameGraph:
    return _Elab(tp, budget).game(name)
