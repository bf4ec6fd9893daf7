"""Bottom-up naive least-fixpoint evaluator.

Ground-truth oracle for answer sets: repeatedly applies every clause to the
ground facts derived so far until nothing new appears.  Deliberately naive
(recomputes each round) so its correctness is obvious; a first-argument
index keeps matching affordable on hundred-node graphs.
"""

from __future__ import annotations

from .errors import RangeRestrictionError, ResourceLimitError
from .syntax import print_clause, print_term
from .terms import Atom, Clause, Int, PredId, Program, Struct, Term, Var, pred_of

DEFAULT_CAP = 100_000

_COMPARE = {
    "<": lambda a, b: a < b,
    "=<": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "=:=": lambda a, b: a == b,
}


def _subst(t: Term, env: dict) -> Term:
    if type(t) is Var:
        bound = env.get(t.id)
        return t if bound is None else bound
    if type(t) is not Struct:
        return t
    return Struct(t.functor, tuple(_subst(a, env) for a in t.args))


def _is_ground(t: Term) -> bool:
    stack = [t]
    while stack:
        x = stack.pop()
        if type(x) is Var:
            return False
        if type(x) is Struct:
            stack.extend(x.args)
    return True


def _match(pattern: Term, fact: Term, env: dict):
    """One-way match of a pattern (vars allowed) against a ground fact.

    Returns an extended copy of env, or None.
    """
    out = env
    stack = [(pattern, fact)]
    while stack:
        p, f = stack.pop()
        if type(p) is Var:
            bound = out.get(p.id)
            if bound is None:
                if out is env:
                    out = dict(env)
                out[p.id] = f
                continue
            p = bound
        if type(p) is not type(f):
            return None
        if type(p) is Atom:
            if p.name != f.name:
                return None
        elif type(p) is Int:
            if p.value != f.value:
                return None
        else:
            if p.functor != f.functor or len(p.args) != len(f.args):
                return None
            stack.extend(zip(p.args, f.args))
    return out


def _arith(t: Term, clause: Clause) -> int:
    if type(t) is Int:
        return t.value
    if type(t) is Struct and len(t.args) == 2 and t.functor in ("+", "-", "*", "//", "mod"):
        a = _arith(t.args[0], clause)
        b = _arith(t.args[1], clause)
        if t.functor == "+":
            return a + b
        if t.functor == "-":
            return a - b
        if t.functor == "*":
            return a * b
        if b == 0:
            raise RangeRestrictionError(f"zero divisor in clause: {print_clause(clause)}")
        return a // b if t.functor == "//" else a % b
    raise RangeRestrictionError(
        f"clause not range-restricted (unbound or non-integer arithmetic): "
        f"{print_clause(clause)}"
    )


class _FactStore:
    """Per-predicate ground facts with a first-argument index."""

    def __init__(self):
        self.by_pred: dict = {}  # PredId -> set of Term
        self.first_arg: dict = {}  # (PredId, first-arg atom/int payload) -> list

    def add(self, pred: PredId, fact: Term) -> bool:
        bucket = self.by_pred.setdefault(pred, set())
        if fact in bucket:
            return False
        bucket.add(fact)
        if type(fact) is Struct:
            a0 = fact.args[0]
            if type(a0) is not Struct:
                self.first_arg.setdefault((pred, a0), []).append(fact)
        return True

    def candidates(self, pred: PredId, goal: Term, env: dict):
        if type(goal) is Struct:
            a0 = _subst(goal.args[0], env)
            if type(a0) in (Atom, Int):
                return self.first_arg.get((pred, a0), ())
        return self.by_pred.get(pred, ())

    def total(self) -> int:
        return sum(len(s) for s in self.by_pred.values())


def _eval_builtin_goal(goal: Term, env: dict, clause: Clause):
    """Yield extended envs for a built-in goal; raise when not ground enough."""
    name = goal.functor if type(goal) is Struct else goal.name
    args = goal.args if type(goal) is Struct else ()
    if name == "true":
        yield env
        return
    if name == "fail":
        return
    if name == "is":
        value = Int(_arith(_subst(args[1], env), clause))
        lhs = _subst(args[0], env)
        if type(lhs) is Var:
            out = dict(env)
            out[lhs.id] = value
            yield out
        elif lhs == value:
            yield env
        return
    if name in _COMPARE:
        a = _arith(_subst(args[0], env), clause)
        b = _arith(_subst(args[1], env), clause)
        if _COMPARE[name](a, b):
            yield env
        return
    if name == "=":
        a = _subst(args[0], env)
        b = _subst(args[1], env)
        if _is_ground(a):
            out = _match(b, a, env)
        elif _is_ground(b):
            out = _match(a, b, env)
        else:
            raise RangeRestrictionError(
                f"clause not range-restricted (=/2 with both sides unbound): "
                f"{print_clause(clause)}"
            )
        if out is not None:
            yield out
        return
    if name == "\\=":
        a = _subst(args[0], env)
        b = _subst(args[1], env)
        if not (_is_ground(a) and _is_ground(b)):
            raise RangeRestrictionError(
                f"clause not range-restricted (\\=/2 on unbound operands): "
                f"{print_clause(clause)}"
            )
        if a != b:
            yield env
        return
    raise RangeRestrictionError(f"unsupported goal {name} in clause: {print_clause(clause)}")


_BUILTIN_NAMES = {"true", "fail", "is", "=", "\\="} | set(_COMPARE)


def _derive(clause: Clause, store: _FactStore):
    """All ground head instances derivable from the current facts."""
    envs = [{}]
    for goal in clause.body:
        name = goal.functor if type(goal) is Struct else goal.name
        if name in _BUILTIN_NAMES:
            nxt = []
            for env in envs:
                nxt.extend(_eval_builtin_goal(goal, env, clause))
            envs = nxt
        else:
            pred = pred_of(goal)
            nxt = []
            for env in envs:
                for fact in store.candidates(pred, goal, env):
                    out = _match(_subst(goal, env), fact, env)
                    if out is not None:
                        nxt.append(out if out is not env else dict(env))
            envs = nxt
        if not envs:
            return
    for env in envs:
        head = _subst(clause.head, env)
        if not _is_ground(head):
            raise RangeRestrictionError(
                f"clause not range-restricted (head variable never bound): "
                f"{print_clause(clause)}"
            )
        yield head


def bottom_up_eval(program: Program, cap: int = DEFAULT_CAP) -> dict:
    """Least fixpoint of the immediate-consequence operator.

    Returns {PredId: set of ground Terms}.  Raises ResourceLimitError when
    the fixpoint is not reached within cap rounds.
    """
    store = _FactStore()
    for _round in range(cap):
        grew = False
        for clause in program.clauses:
            for head in list(_derive(clause, store)):
                if store.add(clause.pred(), head):
                    grew = True
        if not grew:
            return dict(store.by_pred)
    raise ResourceLimitError(f"oracle iteration cap exceeded ({cap} rounds)")


def oracle_answers_for(facts: dict, call: Term) -> set:
    """Oracle facts matching a call pattern (the queried variant)."""
    pred = pred_of(call)
    out = set()
    for fact in facts.get(pred, ()):
        if _match(call, fact, {}) is not None:
            out.add(fact)
    return out


def _is_most_general(call: Term, pred: PredId) -> bool:
    if type(call) is Atom:
        return pred.arity == 0
    args = call.args
    return all(type(a) is Var for a in args) and len({a.id for a in args}) == len(args)


def compare_answer_sets(space, facts: dict, pred: PredId, call: Term = None):
    """Compare a completed generator's answers against the oracle.

    Returns (equal, missing, extra); missing/extra are sorted lists of terms
    the engine lacks / has beyond the oracle's set for the queried variant.
    """
    from .tabling import COMPLETE, canon_key

    space = getattr(space, "space", space)
    if call is not None:
        entry = space.lookup(canon_key(call))
        if entry is None or entry.status != COMPLETE:
            raise RangeRestrictionError(f"no completed table entry for {print_term(call)}")
    else:
        entries = [
            e for e in space.entries if pred_of(e.call) == pred and e.status == COMPLETE
        ]
        if len(entries) != 1:
            general = [e for e in entries if _is_most_general(e.call, pred)]
            if len(general) != 1:
                raise RangeRestrictionError(
                    f"no unique completed table entry for {pred}; pass the call"
                )
            entries = general
        entry = entries[0]
    engine_set = {t for (t, _n) in entry.answers}
    oracle_set = oracle_answers_for(facts, entry.call)
    missing = sorted(oracle_set - engine_set, key=print_term)
    extra = sorted(engine_set - oracle_set, key=print_term)
    return (not missing and not extra, missing, extra)
