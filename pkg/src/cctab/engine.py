"""SLD resolution over a clause database.

An explicit goal-stack machine: Prolog recursion never consumes host stack,
so chain-shaped fixtures thousands of clauses deep are safe.  Backtracking is
trail-based.  The machine reports three events to its caller: a solution, the
exhaustion of its search space, or a request for a tabled-call evaluation
that the tabling driver must satisfy before resuming it.
"""

from __future__ import annotations

from .errors import (
    ExistenceError,
    InstantiationError,
    ResourceLimitError,
    TypeMismatchError,
)
from .terms import Atom, Int, Program, Struct, Term, Var, clause_nvars

DEFAULT_BUDGET = 10_000_000

SOLUTION = "solution"
EXHAUSTED = "exhausted"
REQUEST = "request"


class Budget:
    __slots__ = ("left",)

    def __init__(self, steps=DEFAULT_BUDGET):
        self.left = steps

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise ResourceLimitError("resolution step budget exceeded")


class BindingStore:
    """Variable assignments plus an undo trail."""

    __slots__ = ("bindings", "trail")

    def __init__(self):
        self.bindings: list = []
        self.trail: list = []

    def new_var(self, name="_G") -> Var:
        v = Var(len(self.bindings), name)
        self.bindings.append(None)
        return v

    def new_vars(self, n: int, names=None) -> list:
        return [self.new_var(names[i] if names else "_G") for i in range(n)]

    def walk(self, t: Term) -> Term:
        bindings = self.bindings
        while type(t) is Var:
            b = bindings[t.id]
            if b is None:
                return t
            t = b
        return t

    def bind(self, v: Var, t: Term):
        self.bindings[v.id] = t
        self.trail.append(v.id)

    def mark(self) -> int:
        return len(self.trail)

    def undo_to(self, mark: int):
        bindings = self.bindings
        trail = self.trail
        while len(trail) > mark:
            bindings[trail.pop()] = None

    def resolve(self, term: Term) -> Term:
        """Deep copy of term with all bindings applied."""
        out: list = []
        todo: list = [(term, False)]
        walk = self.walk
        while todo:
            t, rebuild = todo.pop()
            if rebuild:
                n = len(t.args)
                args = tuple(out[-n:])
                del out[-n:]
                out.append(Struct(t.functor, args))
                continue
            t = walk(t)
            if type(t) is Struct:
                todo.append((t, True))
                for a in reversed(t.args):
                    todo.append((a, False))
            else:
                out.append(t)
        return out[0]


def unify(a: Term, b: Term, store: BindingStore) -> bool:
    """Unify a and b; on failure the store is restored untouched."""
    mark = store.mark()
    walk = store.walk
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x = walk(x)
        y = walk(y)
        if x is y:
            continue
        tx = type(x)
        ty = type(y)
        if tx is Var:
            if ty is Var and x.id == y.id:
                continue
            store.bind(x, y)
            continue
        if ty is Var:
            store.bind(y, x)
            continue
        if tx is not ty:
            store.undo_to(mark)
            return False
        if tx is Atom:
            if x.name != y.name:
                store.undo_to(mark)
                return False
        elif tx is Int:
            if x.value != y.value:
                store.undo_to(mark)
                return False
        else:
            if x.functor != y.functor or len(x.args) != len(y.args):
                store.undo_to(mark)
                return False
            stack.extend(zip(x.args, y.args))
    return True


def instantiate(term: Term, varmap: list) -> Term:
    """Rebuild a normalized term (vars numbered 0..n-1) over fresh variables."""
    if type(term) is Var:
        return varmap[term.id]
    if type(term) is not Struct:
        return term
    out: list = []
    todo: list = [(term, False)]
    while todo:
        t, rebuild = todo.pop()
        if rebuild:
            n = len(t.args)
            args = tuple(out[-n:])
            del out[-n:]
            out.append(Struct(t.functor, args))
        elif type(t) is Var:
            out.append(varmap[t.id])
        elif type(t) is Struct:
            todo.append((t, True))
            for a in reversed(t.args):
                todo.append((a, False))
        else:
            out.append(t)
    return out[0]


# -- arithmetic and built-ins ----------------------------------------------------


def eval_arith(t: Term, store: BindingStore) -> int:
    t = store.walk(t)
    if type(t) is Int:
        return t.value
    if type(t) is Var:
        raise InstantiationError("unbound variable in arithmetic expression")
    if type(t) is Struct and len(t.args) == 2:
        op = t.functor
        a = eval_arith(t.args[0], store)
        b = eval_arith(t.args[1], store)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "//":
            if b == 0:
                raise TypeMismatchError("zero divisor")
            return a // b
        if op == "mod":
            if b == 0:
                raise TypeMismatchError("zero divisor")
            return a % b
    raise TypeMismatchError(f"not an integer expression: {t}")


def _bi_is(args, store):
    return unify(args[0], Int(eval_arith(args[1], store)), store)


def _bi_compare(op):
    def run(args, store):
        return op(eval_arith(args[0], store), eval_arith(args[1], store))

    return run


def _bi_unify(args, store):
    return unify(args[0], args[1], store)


def _bi_not_unify(args, store):
    mark = store.mark()
    if unify(args[0], args[1], store):
        store.undo_to(mark)
        return False
    return True


BUILTINS = {
    ("true", 0): lambda args, store: True,
    ("fail", 0): lambda args, store: False,
    ("is", 2): _bi_is,
    ("<", 2): _bi_compare(lambda a, b: a < b),
    ("=<", 2): _bi_compare(lambda a, b: a <= b),
    (">", 2): _bi_compare(lambda a, b: a > b),
    (">=", 2): _bi_compare(lambda a, b: a >= b),
    ("=:=", 2): _bi_compare(lambda a, b: a == b),
    ("=", 2): _bi_unify,
    ("\\=", 2): _bi_not_unify,
}


def eval_builtin(goal: Term, store: BindingStore) -> bool:
    """Evaluate a built-in goal; raises if goal is not a built-in."""
    if isinstance(goal, Atom):
        key, args = (goal.name, 0), ()
    else:
        key, args = (goal.functor, len(goal.args)), goal.args
    fn = BUILTINS.get(key)
    if fn is None:
        raise ExistenceError(f"not a built-in: {key[0]}/{key[1]}")
    return fn(args, store)


TABLING_PRIMS = {("slg", 1), ("slgcall", 1), ("answer", 2)}


def compile_index(program: Program) -> dict:
    """(name, arity) -> list of (head, body, nvars, var_names)."""
    from .terms import vars_of_all

    index: dict = {}
    for c in program.clauses:
        p = c.pred()
        n = clause_nvars(c)
        names = ["_G"] * n
        for v in vars_of_all((c.head, *c.body)):
            names[v.id] = v.name
        index.setdefault((p.name, p.arity), []).append((c.head, c.body, n, names))
    return index


# -- choice points -----------------------------------------------------------------


class ClauseCP:
    __slots__ = ("goal", "clauses", "i", "mark", "rest")

    def __init__(self, goal, clauses, mark, rest):
        self.goal = goal
        self.clauses = clauses
        self.i = 0
        self.mark = mark
        self.rest = rest

    def try_next(self, m: "Machine") -> bool:
        store = m.store
        store.undo_to(self.mark)
        clauses = self.clauses
        while self.i < len(clauses):
            head, body, nvars, names = clauses[self.i]
            self.i += 1
            if nvars:
                varmap = store.new_vars(nvars, names)
                head = instantiate(head, varmap)
            if unify(self.goal, head, store):
                goals = self.rest
                if nvars:
                    for g in reversed(body):
                        goals = (instantiate(g, varmap), goals)
                else:
                    for g in reversed(body):
                        goals = (g, goals)
                m.goals = goals
                return True
        return False


class StoredIterCP:
    """Iterate stored (term, nvars) entries, unifying each against a live term.

    Reads the backing list length on every retry, so it works both for frozen
    (completed) answer lists and for lists that grow during the iteration.
    """

    __slots__ = ("target", "stored", "i", "mark", "rest", "push_goal")

    def __init__(self, target, stored, mark, rest, push_goal=None):
        self.target = target
        self.stored = stored
        self.i = 0
        self.mark = mark
        self.rest = rest
        self.push_goal = push_goal

    def try_next(self, m: "Machine") -> bool:
        store = m.store
        store.undo_to(self.mark)
        while self.i < len(self.stored):
            term, nvars = self.stored[self.i]
            self.i += 1
            inst = instantiate(term, store.new_vars(nvars)) if nvars else term
            if unify(self.target, inst, store):
                if self.push_goal is not None:
                    m.goals = (self.push_goal, self.rest)
                else:
                    m.goals = self.rest
                return True
            store.undo_to(self.mark)
        return False


# -- the machine -------------------------------------------------------------------


class Machine:
    """One SLD computation: goal stack, choice points, trail."""

    def __init__(self, index, runtime=None, budget=None, counters=None):
        self.index = index
        self.store = BindingStore()
        self.goals = None  # cons cells (goal, rest), None = empty
        self.cps: list = []
        self.runtime = runtime
        self.budget = budget if budget is not None else Budget()
        self.counters = counters
        self._resume_by_backtracking = False
        self.pending_request = None

    def push_goals(self, goals):
        for g in reversed(list(goals)):
            self.goals = (g, self.goals)

    def backtrack(self) -> bool:
        cps = self.cps
        while cps:
            if cps[-1].try_next(self):
                return True
            cps.pop()
        return False

    def run(self):
        """Run until a solution, exhaustion, or a tabling request."""
        if self._resume_by_backtracking:
            self._resume_by_backtracking = False
            if not self.backtrack():
                self.store.undo_to(0)
                return (EXHAUSTED, None)
        while True:
            if self.goals is None:
                self._resume_by_backtracking = True
                return (SOLUTION, None)
            goal, rest = self.goals
            self.budget.spend()
            goal = self.store.walk(goal)
            tg = type(goal)
            if tg is Var:
                raise InstantiationError("unbound variable called as a goal")
            if tg is Int:
                raise TypeMismatchError(f"integer called as a goal: {goal.value}")
            if tg is Atom:
                key = (goal.name, 0)
                args = ()
            else:
                key = (goal.functor, len(goal.args))
                args = goal.args

            fn = BUILTINS.get(key)
            if fn is not None:
                if fn(args, self.store):
                    self.goals = rest
                    continue
                if not self.backtrack():
                    self.store.undo_to(0)
                    return (EXHAUSTED, None)
                continue

            if key == ("call", 1):
                target = self.store.walk(args[0])
                if type(target) is Var:
                    raise InstantiationError("call/1: unbound goal")
                if type(target) is Int:
                    raise TypeMismatchError("call/1: integer is not callable")
                self.goals = (target, rest)
                continue

            if key in TABLING_PRIMS:
                if self.runtime is None:
                    raise ExistenceError(
                        f"tabling primitive {key[0]}/{key[1]} outside a tabling engine"
                    )
                if key == ("slg", 1):
                    action = self.runtime.on_slg(self, goal, rest)
                elif key == ("slgcall", 1):
                    action = self.runtime.on_slgcall(self, goal, rest)
                else:
                    action = self.runtime.on_answer(self, goal, rest)
                if action == "fail":
                    if not self.backtrack():
                        self.store.undo_to(0)
                        return (EXHAUSTED, None)
                    continue
                if action == "request":
                    self.goals = (goal, rest)  # retry the same goal once satisfied
                    req = self.pending_request
                    self.pending_request = None
                    return (REQUEST, req)
                # action == "retry": a choice point was installed by the hook
                if not self.backtrack():
                    self.store.undo_to(0)
                    return (EXHAUSTED, None)
                continue

            clauses = self.index.get(key)
            if clauses is None:
                raise ExistenceError(f"unknown predicate {key[0]}/{key[1]}")
            if self.counters is not None and key[0].startswith("slg_"):
                self.counters.slg_resolutions += 1
            self.cps.append(ClauseCP(goal, clauses, self.store.mark(), rest))
            if not self.backtrack():
                self.store.undo_to(0)
                return (EXHAUSTED, None)


def solve(goals, program: Program, depth_budget: int = DEFAULT_BUDGET, runtime=None):
    """Enumerate solutions of a goal (or goal list) under plain SLD resolution.

    Yields one dict per solution mapping the query's variable names to their
    (resolved) values, in SLD order: leftmost goal, textual clause order.
    """
    from .terms import vars_of_all

    if isinstance(goals, (Atom, Struct, Var, Int)):
        goals = [goals]
    machine = Machine(compile_index(program), runtime=runtime, budget=Budget(depth_budget))
    qvars = vars_of_all(goals)
    mapping = {}
    for v in qvars:
        mapping[v.id] = machine.store.new_var(v.name)
    dense = _dense_map(mapping)
    machine.push_goals([instantiate(g, dense) for g in goals])
    while True:
        event, _ = machine.run()
        if event == SOLUTION:
            yield {
                v.name: machine.store.resolve(mapping[v.id])
                for v in qvars
                if v.name != "_"
            }
        elif event == EXHAUSTED:
            return
        else:
            raise ExistenceError("tabled call reached plain SLD solver")


def _dense_map(mapping: dict) -> list:
    out = [None] * (max(mapping) + 1 if mapping else 0)
    for k, v in mapping.items():
        out[k] = v
    return out
