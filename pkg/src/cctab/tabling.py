"""Continuation-call tabling runtime.

Executes programs produced by the translator.  slg/1 runs a tabled call to
completion and enumerates its answers; slgcall/1 suspends a consumer by
copying its continuation into table-owned storage; answer/2 records answers
and schedules resumptions; completion is detected with a generator stack and
dependency links, and uses local scheduling: no answer escapes a generator
before its whole dependency group is complete.

Suspended continuations are deep-copied at capture time, so no binding in
them can be undone by backtracking; every resumption starts from the
identical stored copy.  Counter units are interpreter term cells and steps,
which are deliberate, documented approximations: they are not comparable to
abstract-machine instruction or cell counts.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace

from .engine import (
    DEFAULT_BUDGET,
    EXHAUSTED,
    REQUEST,
    SOLUTION,
    Budget,
    Machine,
    StoredIterCP,
    compile_index,
    instantiate,
    unify,
)
from .errors import InstantiationError, TablingError, TypeMismatchError
from .terms import Atom, Int, Program, Struct, Term, Var, pred_of, term_size
from .translate import Mode

EVALUATING = "evaluating"
COMPLETE = "complete"


@dataclass
class Counters:
    suspensions: int = 0
    resumptions: int = 0
    e_cells: int = 0
    h_cells: int = 0
    trail_at_suspend: int = 0
    generators: int = 0
    answers: int = 0
    slg_resolutions: int = 0

    def snapshot(self) -> "Counters":
        return replace(self)

    def stats_line(self) -> str:
        return (
            f"suspensions={self.suspensions} resumptions={self.resumptions} "
            f"e_cells={self.e_cells} h_cells={self.h_cells} "
            f"trail_at_suspend={self.trail_at_suspend} "
            f"generators={self.generators} answers={self.answers}"
        )


def canon_key(t: Term) -> tuple:
    """Hashable key equal for two terms iff they are variants."""
    out: list = []
    nums: dict = {}
    stack = [t]
    while stack:
        x = stack.pop()
        tx = type(x)
        if tx is Var:
            k = nums.get(x.id)
            if k is None:
                k = len(nums)
                nums[x.id] = k
            out.append(k)
        elif tx is Atom:
            out.append(("a", x.name))
        elif tx is Int:
            out.append(("i", x.value))
        else:
            out.append(("s", x.functor, len(x.args)))
            stack.extend(reversed(x.args))
    return tuple(out)


def freeze(t: Term) -> tuple:
    """(term, nvars) with variables renumbered 0.. in first-occurrence order.

    Sharing is preserved; ground terms are returned as-is with nvars 0.
    """
    stack = [t]
    has_var = False
    while stack:
        x = stack.pop()
        if type(x) is Var:
            has_var = True
            break
        if type(x) is Struct:
            stack.extend(x.args)
    if not has_var:
        return (t, 0)
    mapping: dict = {}
    out: list = []
    todo: list = [(t, False)]
    while todo:
        x, rebuild = todo.pop()
        tx = type(x)
        if rebuild:
            n = len(x.args)
            args = tuple(out[-n:])
            del out[-n:]
            out.append(Struct(x.functor, args))
        elif tx is Var:
            v = mapping.get(x.id)
            if v is None:
                v = Var(len(mapping), x.name)
                mapping[x.id] = v
            out.append(v)
        elif tx is Struct:
            todo.append((x, True))
            for a in reversed(x.args):
                todo.append((a, False))
        else:
            out.append(x)
    return (out[0], len(mapping))


@dataclass
class StoredCont:
    """A suspended consumer, dereferenced and copied into table storage."""

    term: Term  # NameCont(Id, Bindings, Pending, [Prev]) with vars 0..nvars-1
    nvars: int
    gen_id: int  # generator this continuation delivers answers to


@dataclass
class GeneratorEntry:
    id: int
    call: Term  # canonical call, vars 0..call_nvars-1
    call_nvars: int
    key: tuple = None
    answers: list = field(default_factory=list)  # (term, nvars), insertion order
    index: set = field(default_factory=set)  # canon keys of answers
    continuations: list = field(default_factory=list)  # StoredCont
    status: str = EVALUATING
    pos: int = None  # completion stack index while EVALUATING
    deplink: int = None  # lowest stack position this generator depends on
    suspension_total: int = 0  # cumulative; survives completion


class TableSpace:
    """Call-variant table: generators, answers, continuations, completion stack."""

    def __init__(self, mode: Mode = Mode.GENERAL):
        self.mode = mode
        self.entries: list = []
        self.variant_index: dict = {}
        self.stack: list = []  # ids of EVALUATING generators, oldest first
        self.arenas: list = []  # active resumption worklists, innermost last
        self.counters = Counters()

    def lookup(self, key):
        eid = self.variant_index.get(key)
        return None if eid is None else self.entries[eid]

    def new_generator(self, call: Term, call_nvars: int, key, creator=None) -> GeneratorEntry:
        entry = GeneratorEntry(id=len(self.entries), call=call, call_nvars=call_nvars, key=key)
        self.entries.append(entry)
        self.variant_index[key] = entry.id
        entry.pos = len(self.stack)
        self.stack.append(entry.id)
        entry.deplink = entry.pos
        if creator is not None and creator.status == EVALUATING:
            entry.deplink = min(entry.deplink, creator.deplink)
        self.counters.generators += 1
        return entry

    def pending_for_segment(self, pos: int) -> bool:
        for arena in self.arenas:
            for cont, _ans in arena:
                owner = self.entries[cont.gen_id]
                if owner.pos is not None and owner.pos >= pos:
                    return True
        return False


def complete(space: TableSpace, leader: GeneratorEntry):
    """Mark the leader's whole group complete and erase its continuations."""
    if leader.status != EVALUATING or leader.pos is None:
        raise TablingError("complete: leader is not an evaluating generator")
    if space.pending_for_segment(leader.pos):
        raise TablingError("complete: called with pending resumption work")
    for gid in space.stack[leader.pos :]:
        entry = space.entries[gid]
        entry.status = COMPLETE
        entry.continuations.clear()
        entry.pos = None
    del space.stack[leader.pos :]


@dataclass
class _Request:
    call: Term
    call_nvars: int
    key: tuple
    pred_name: str
    origin: str  # "slg" | "slgcall"
    creator_id: int = None


class _QueryFrame:
    __slots__ = ("machine",)

    def __init__(self, machine):
        self.machine = machine


class _GenFrame:
    __slots__ = ("machine", "entry", "origin", "arena", "draining")

    def __init__(self, machine, entry, origin, arena):
        self.machine = machine
        self.entry = entry
        self.origin = origin
        self.arena = arena
        self.draining = False


class _ResumeFrame:
    __slots__ = ("machine",)

    def __init__(self, machine):
        self.machine = machine


@dataclass
class Solution:
    bindings: dict  # var name -> resolved Term
    goals: list  # resolved instances of the query goals


class Engine:
    """Tabled-execution engine over a translated program.

    One engine owns one TableSpace; tables persist across queries, so a
    completed variant is answered by pure table reads on re-query.
    """

    def __init__(self, program: Program, mode: Mode = Mode.GENERAL,
                 depth_budget: int = DEFAULT_BUDGET):
        self.program = program
        self.index = compile_index(program)
        self.mode = mode
        self.space = TableSpace(mode)
        self.depth_budget = depth_budget

    @property
    def counters(self) -> Counters:
        return self.space.counters

    # -- public query API ---------------------------------------------------

    def solve(self, goals, depth_budget: int = None):
        """Enumerate solutions of a goal or goal list; local scheduling."""
        from .terms import vars_of_all

        if not isinstance(goals, (list, tuple)):
            goals = [goals]
        budget = Budget(depth_budget if depth_budget is not None else self.depth_budget)
        machine = Machine(self.index, runtime=self, budget=budget, counters=self.counters)
        qvars = vars_of_all(goals)
        mapping = {v.id: machine.store.new_var(v.name) for v in qvars}
        dense = [None] * (max(mapping) + 1 if mapping else 0)
        for k, v in mapping.items():
            dense[k] = v
        live_goals = [instantiate(g, dense) for g in goals]
        machine.push_goals(live_goals)
        try:
            yield from self._drive(machine, mapping, qvars, live_goals, budget)
        except Exception:
            self._purge_incomplete()
            raise

    def _drive(self, machine, mapping, qvars, live_goals, budget):
        frames: list = [_QueryFrame(machine)]
        space = self.space
        while frames:
            frame = frames[-1]
            if isinstance(frame, _GenFrame) and frame.draining:
                if frame.arena:
                    stored, ans = frame.arena.popleft()
                    space.counters.resumptions += 1
                    rm = self._resume_machine(stored, ans, budget)
                    if rm is not None:
                        frames.append(_ResumeFrame(rm))
                    continue
                self._finish_group(frame)
                space.arenas.pop()
                frames.pop()
                continue

            event, req = frame.machine.run()
            if event == SOLUTION:
                if not isinstance(frame, _QueryFrame):
                    raise TablingError("internal: translated clause body succeeded")
                yield Solution(
                    bindings={
                        v.name: machine.store.resolve(mapping[v.id])
                        for v in qvars
                        if v.name != "_"
                    },
                    goals=[machine.store.resolve(g) for g in live_goals],
                )
                continue
            if event == EXHAUSTED:
                if isinstance(frame, _QueryFrame):
                    return
                if isinstance(frame, _ResumeFrame):
                    frames.pop()
                    continue
                if frame.origin == "slg":
                    frame.draining = True
                    continue
                frames.pop()  # slgcall-created: completion deferred to the group
                continue
            # REQUEST: evaluate a new generator, then let the machine retry
            creator = None
            if req.creator_id is not None:
                creator = space.entries[req.creator_id]
            entry = space.new_generator(req.call, req.call_nvars, req.key, creator)
            gm = self._generator_machine(entry, req.pred_name, budget)
            arena = None
            if req.origin == "slg":
                arena = deque()
                space.arenas.append(arena)
            frames.append(_GenFrame(gm, entry, req.origin, arena))

    def slg(self, call: Term, depth_budget: int = None):
        """Run a tabled call to completion and enumerate its answers."""
        yield from self.solve(Struct("slg", (call,)), depth_budget=depth_budget)

    def answer_terms(self, call: Term) -> list:
        """Stored answers for the variant of call, in insertion order."""
        entry = self.space.lookup(canon_key(call))
        if entry is None:
            return []
        return [t for (t, _n) in entry.answers]

    # -- tabling primitive hooks (called from Machine.run) --------------------

    def on_slg(self, machine, goal, rest):
        store = machine.store
        call = store.walk(goal.args[0])
        if type(call) is Var:
            raise InstantiationError("slg/1: unbound call")
        if type(call) is Int:
            raise TypeMismatchError("slg/1: integer is not a callable term")
        resolved = store.resolve(call)
        key = canon_key(resolved)
        entry = self.space.lookup(key)
        if entry is None:
            pred = pred_of(resolved)
            if (f"slg_{pred.name}", 2) not in self.index:
                raise TablingError(f"not a tabled predicate: {pred}")
            term, nvars = freeze(resolved)
            machine.pending_request = _Request(term, nvars, key, pred.name, "slg")
            return "request"
        if entry.status == COMPLETE:
            machine.cps.append(StoredIterCP(call, entry.answers, store.mark(), rest))
            return "retry"
        if self.mode is Mode.LEGACY:
            # The original scheme: read whatever answers exist right now and
            # fail past them; nothing is suspended, later answers are lost.
            machine.cps.append(StoredIterCP(call, entry.answers, store.mark(), rest))
            return "retry"
        raise TablingError(
            f"tabled call {pred_of(resolved)} reached its own evaluation outside "
            f"slgcall; bridge declarations are incomplete for this program"
        )

    def on_slgcall(self, machine, goal, rest):
        store = machine.store
        cont = store.walk(goal.args[0])
        want = 4 if self.mode is Mode.GENERAL else 3
        if type(cont) is not Struct or len(cont.args) != want:
            raise TablingError(f"malformed continuation term (arity {want} expected): {cont}")
        id_t = store.walk(cont.args[0])
        if type(id_t) is not Int or not (0 <= id_t.value < len(self.space.entries)):
            raise TablingError("malformed continuation term: bad generator id")
        pending = store.walk(cont.args[2])
        if type(pending) not in (Atom, Struct):
            raise TablingError("malformed continuation term: pending call is not callable")
        resolved = store.resolve(pending)
        key = canon_key(resolved)
        entry = self.space.lookup(key)
        if entry is None:
            pred = pred_of(resolved)
            if (f"slg_{pred.name}", 2) not in self.index:
                raise TablingError(f"not a tabled predicate: {pred}")
            term, nvars = freeze(resolved)
            machine.pending_request = _Request(
                term, nvars, key, pred.name, "slgcall", creator_id=id_t.value
            )
            return "request"
        if entry.status == COMPLETE:
            machine.cps.append(
                StoredIterCP(pending, entry.answers, store.mark(), rest, push_goal=cont)
            )
            return "retry"
        return self._suspend(machine, cont, id_t.value, entry)

    def _suspend(self, machine, cont, gen_id, entry):
        owner = self.space.entries[gen_id]
        if owner.status != EVALUATING:
            raise TablingError("continuation captured for a completed generator")
        term, nvars = freeze(machine.store.resolve(cont))
        stored = StoredCont(term, nvars, gen_id)
        counters = self.space.counters
        counters.suspensions += 1
        counters.e_cells += term_size(term.args[1])
        counters.h_cells += term_size(term.args[2])
        if len(term.args) == 4:
            counters.h_cells += term_size(term.args[3])
        counters.trail_at_suspend += len(machine.store.trail)
        entry.continuations.append(stored)
        entry.suspension_total += 1
        arena = self._current_arena()
        for i in range(len(entry.answers)):
            arena.append((stored, entry.answers[i]))
        low = min(owner.deplink, entry.deplink)
        owner.deplink = low
        entry.deplink = low
        return "fail"

    def on_answer(self, machine, goal, rest):
        store = machine.store
        id_t = store.walk(goal.args[0])
        if type(id_t) is not Int or not (0 <= id_t.value < len(self.space.entries)):
            raise TablingError("answer/2: bad generator id")
        entry = self.space.entries[id_t.value]
        if entry.status == COMPLETE:
            raise TablingError(f"answer/2: generator {entry.id} is already complete")
        resolved = store.resolve(goal.args[1])
        key = canon_key(resolved)
        if key in entry.index:
            return "fail"
        entry.index.add(key)
        stored_answer = freeze(resolved)
        entry.answers.append(stored_answer)
        self.space.counters.answers += 1
        if entry.continuations:
            arena = self._current_arena()
            for stored in entry.continuations:
                arena.append((stored, stored_answer))
        return "fail"

    # -- internals -------------------------------------------------------------

    def _purge_incomplete(self):
        """Drop half-evaluated generators after a failed query.

        Their answer sets cannot be trusted, so the variants are forgotten
        entirely; a later query re-evaluates them from scratch.
        """
        space = self.space
        for gid in space.stack:
            entry = space.entries[gid]
            space.variant_index.pop(entry.key, None)
            entry.continuations.clear()
            entry.pos = None
        space.stack.clear()
        space.arenas.clear()

    def _current_arena(self):
        if not self.space.arenas:
            raise TablingError("suspension outside any tabled evaluation")
        return self.space.arenas[-1]

    def _generator_machine(self, entry, pred_name, budget):
        m = Machine(self.index, runtime=self, budget=budget, counters=self.counters)
        call_live = instantiate(entry.call, m.store.new_vars(entry.call_nvars))
        m.goals = (Struct(f"slg_{pred_name}", (call_live, Int(entry.id))), None)
        return m

    def _resume_machine(self, stored, ans, budget):
        m = Machine(self.index, runtime=self, budget=budget, counters=self.counters)
        cont_live = instantiate(stored.term, m.store.new_vars(stored.nvars))
        ans_term, ans_nvars = ans
        ans_live = instantiate(ans_term, m.store.new_vars(ans_nvars)) if ans_nvars else ans_term
        if not unify(cont_live.args[2], ans_live, m.store):
            return None
        m.goals = (cont_live, None)
        return m

    def _finish_group(self, frame):
        space = self.space
        entry = frame.entry
        if entry.status != EVALUATING:
            raise TablingError("internal: generator completed while its frame was live")
        segment = space.stack[entry.pos :]
        low = min(space.entries[g].deplink for g in segment)
        if low == entry.pos:
            complete(space, entry)
            return
        if self.mode is Mode.GENERAL:
            raise TablingError(
                "generator group cannot complete: dependency on an outer evaluation; "
                "bridge declarations are incomplete for this program"
            )
        # Legacy mode tolerates this: the generator stays evaluating and its
        # answers-so-far are read by whoever asked (answers may be lost).
