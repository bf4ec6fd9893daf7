"""Reader and printer for the accepted Prolog subset.

Accepted: atoms, integers, variables, compounds, lists as sugar for './2'
and '[]', ','-joined bodies, ':-' clauses, ':- table N/A.' and
':- bridge N/A.' directives, '%' comments, and a fixed operator table
(is, <, =<, >, >=, =:=, =, \\= at 700; +, - at 500; *, //, mod at 400).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import ParseError
from .terms import (
    NIL,
    Atom,
    Clause,
    Int,
    PredId,
    Program,
    Struct,
    Term,
    Var,
    list_items,
    normalize_clause,
)

log = logging.getLogger(__name__)

# name -> (priority, type); xfx operands bind strictly tighter, yfx allows
# equal priority on the left (left association).
INFIX_OPS = {
    "is": (700, "xfx"),
    "<": (700, "xfx"),
    "=<": (700, "xfx"),
    ">": (700, "xfx"),
    ">=": (700, "xfx"),
    "=:=": (700, "xfx"),
    "=": (700, "xfx"),
    "\\=": (700, "xfx"),
    "+": (500, "yfx"),
    "-": (500, "yfx"),
    "*": (400, "yfx"),
    "//": (400, "yfx"),
    "mod": (400, "yfx"),
}

MAX_ARG_PRIORITY = 700

_SYMBOLIC = ("=<", ">=", "=:=", "\\=", "//", ":-", "<", ">", "=", "+", "-", "*", "/")


@dataclass
class Token:
    kind: str  # atom var int punct sym end eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("int", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if c.islower():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(Token("atom", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if c.isupper() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(Token("var", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if c == "." and (i + 1 >= n or text[i + 1] in " \t\r\n%"):
            toks.append(Token("end", ".", start_line, start_col))
            i += 1
            col += 1
            continue
        if c in "()[]|,":
            toks.append(Token("punct", c, start_line, start_col))
            i += 1
            col += 1
            continue
        for sym in _SYMBOLIC:
            if text.startswith(sym, i):
                toks.append(Token("sym", sym, start_line, start_col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0
        self.varmap: dict = {}  # per-clause: name -> Var

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind, text=None) -> Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind
            raise ParseError(f"expected {want!r}, found {t.text!r}", t.line, t.col)
        return self.next()

    def error(self, msg) -> ParseError:
        t = self.peek()
        return ParseError(msg, t.line, t.col)

    def fresh_var(self, name: str) -> Var:
        if name == "_":
            v = Var(len(self.varmap), "_")
            self.varmap[("_", v.id)] = v
            return v
        if name not in self.varmap:
            self.varmap[name] = Var(len(self.varmap), name)
        return self.varmap[name]

    # -- terms ---------------------------------------------------------------

    def parse_term(self, max_prio=MAX_ARG_PRIORITY) -> Term:
        left = self.parse_primary()
        left_prio = 0
        while True:
            t = self.peek()
            name = t.text
            op = None
            if t.kind == "sym" or (t.kind == "atom" and name in ("is", "mod")):
                op = INFIX_OPS.get(name)
            if op is None:
                return left
            prio, kind = op
            if prio > max_prio:
                return left
            max_left = prio if kind == "yfx" else prio - 1
            if left_prio > max_left:
                return left
            self.next()
            right = self.parse_term(prio - 1)
            left = Struct(name, (left, right))
            left_prio = prio

    def parse_primary(self) -> Term:
        t = self.peek()
        if t.kind == "int":
            self.next()
            return Int(int(t.text))
        if t.kind == "sym" and t.text == "-" and self.toks[self.pos + 1].kind == "int":
            self.next()
            return Int(-int(self.next().text))
        if t.kind == "var":
            self.next()
            return self.fresh_var(t.text)
        if t.kind == "punct" and t.text == "(":
            self.next()
            inner = self.parse_term(MAX_ARG_PRIORITY)
            self.expect("punct", ")")
            return inner
        if t.kind == "punct" and t.text == "[":
            return self.parse_list()
        if t.kind == "atom":
            self.next()
            if self.peek().kind == "punct" and self.peek().text == "(":
                self.next()
                args = [self.parse_term()]
                while self.peek().text == "," and self.peek().kind == "punct":
                    self.next()
                    args.append(self.parse_term())
                self.expect("punct", ")")
                return Struct(t.text, tuple(args))
            return Atom(t.text)
        raise self.error(f"expected a term, found {t.text!r}")

    def parse_list(self) -> Term:
        self.expect("punct", "[")
        if self.peek().text == "]" and self.peek().kind == "punct":
            self.next()
            return NIL
        items = [self.parse_term()]
        while self.peek().kind == "punct" and self.peek().text == ",":
            self.next()
            items.append(self.parse_term())
        tail: Term = NIL
        if self.peek().kind == "punct" and self.peek().text == "|":
            self.next()
            tail = self.parse_term()
        self.expect("punct", "]")
        for item in reversed(items):
            tail = Struct(".", (item, tail))
        return tail

    # -- clauses and directives ----------------------------------------------

    def parse_body(self) -> list[Term]:
        goals = [self.parse_term()]
        while self.peek().kind == "punct" and self.peek().text == ",":
            self.next()
            goals.append(self.parse_term())
        return goals

    def parse_directive(self):
        t = self.expect("atom")
        if t.text not in ("table", "bridge"):
            raise ParseError(f"unknown directive {t.text!r}", t.line, t.col)
        name_tok = self.expect("atom")
        self.expect("sym", "/")
        arity_tok = self.expect("int")
        self.expect("end")
        return t.text, PredId(name_tok.text, int(arity_tok.text))

    def check_goal(self, g: Term, t: Token):
        if isinstance(g, Var):
            raise ParseError("variable is not a valid goal", t.line, t.col)
        if isinstance(g, Int):
            raise ParseError("integer is not a valid goal", t.line, t.col)

    def parse_program(self) -> Program:
        clauses = []
        tabled = set()
        bridges = set()
        while self.peek().kind != "eof":
            self.varmap = {}
            t = self.peek()
            if t.kind == "sym" and t.text == ":-":
                self.next()
                kind, pred = self.parse_directive()
                (tabled if kind == "table" else bridges).add(pred)
                continue
            head = self.parse_term()
            if isinstance(head, (Var, Int)):
                raise ParseError("clause head must be an atom or compound", t.line, t.col)
            body: list[Term] = []
            if self.peek().kind == "sym" and self.peek().text == ":-":
                self.next()
                bt = self.peek()
                body = self.parse_body()
                for g in body:
                    self.check_goal(g, bt)
            self.expect("end")
            clauses.append(normalize_clause(head, body))
        program = Program(tuple(clauses), frozenset(tabled), frozenset(bridges))
        defined = set(program.defined_preds())
        for pred in sorted(tabled | bridges):
            if pred not in defined:
                log.warning("directive for undefined predicate %s", pred)
        return program


def parse_program(text: str) -> Program:
    return _Parser(text).parse_program()


def parse_term(text: str) -> Term:
    """Parse a single term (no trailing period required)."""
    p = _Parser(text)
    t = p.parse_term()
    if p.peek().kind not in ("eof", "end"):
        raise p.error(f"trailing input after term: {p.peek().text!r}")
    return t


def parse_query(text: str) -> list[Term]:
    """Parse a comma-separated goal list; accepts an optional trailing period."""
    p = _Parser(text)
    tok = p.peek()
    goals = p.parse_body()
    for g in goals:
        p.check_goal(g, tok)
    if p.peek().kind == "end":
        p.next()
    if p.peek().kind != "eof":
        raise p.error(f"trailing input after query: {p.peek().text!r}")
    return goals


# -- printing ------------------------------------------------------------------


def _needs_parens(t: Term, max_prio: int) -> bool:
    if isinstance(t, Struct) and len(t.args) == 2 and t.functor in INFIX_OPS:
        return INFIX_OPS[t.functor][0] > max_prio
    return False


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Atom):
        return t.name
    if isinstance(t, Int):
        return str(t.value)
    items = list_items(t)
    if items is not None:
        return "[" + ", ".join(print_term(x) for x in items) + "]"
    if isinstance(t, Struct) and t.functor == "." and len(t.args) == 2:
        head, tail = t.args
        parts = [head]
        while isinstance(tail, Struct) and tail.functor == "." and len(tail.args) == 2:
            parts.append(tail.args[0])
            tail = tail.args[1]
        inner = ", ".join(print_term(x) for x in parts)
        return f"[{inner}|{print_term(tail)}]"
    if t.functor in INFIX_OPS and len(t.args) == 2:
        prio, kind = INFIX_OPS[t.functor]
        lmax = prio if kind == "yfx" else prio - 1
        left, right = t.args
        ls = print_term(left)
        rs = print_term(right)
        if _needs_parens(left, lmax):
            ls = f"({ls})"
        if _needs_parens(right, prio - 1):
            rs = f"({rs})"
        return f"{ls} {t.functor} {rs}"
    return f"{t.functor}(" + ", ".join(print_term(a) for a in t.args) + ")"


def print_clause(c: Clause) -> str:
    head = print_term(c.head)
    if not c.body:
        return f"{head}."
    body = ", ".join(print_term(g) for g in c.body)
    return f"{head} :- {body}."


def print_program(p: Program) -> str:
    lines = []
    for pred in sorted(p.tabled):
        lines.append(f":- table {pred}.")
    for pred in sorted(p.bridges):
        lines.append(f":- bridge {pred}.")
    if lines and p.clauses:
        lines.append("")
    for c in p.clauses:
        lines.append(print_clause(c))
    return "\n".join(lines) + ("\n" if lines else "")
