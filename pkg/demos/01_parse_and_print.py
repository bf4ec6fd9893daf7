#!/usr/bin/env python3
# Reading and printing the accepted Prolog subset, and what "variant" means.
#
# Run: python demos/01_parse_and_print.py

from cctab import canonical_variant, parse_program, parse_term, print_program, print_term

SOURCE = """\
% reachability over an explicit edge relation
:- table path/2.

path(X, Z) :- edge(X, Y), path(Y, Z).
path(X, Z) :- edge(X, Z).

edge(a, b).
edge(b, a).
"""

program = parse_program(SOURCE)
print(f"parsed {len(program.clauses)} clauses; tabled: "
      f"{', '.join(str(p) for p in sorted(program.tabled))}")
print()

# Printing re-parses to the same structure (round trip).
text = print_program(program)
print(text)
assert len(parse_program(text).clauses) == len(program.clauses)

# Tabling distinguishes calls only up to variable renaming.  The canonical
# form renumbers variables left to right, so two terms are variants exactly
# when their canonical forms are equal.
for a, b in [("path(A, B)", "path(X, Y)"),
             ("path(A, A)", "path(X, Y)"),
             ("t(B)", "t(A)")]:
    ca, cb = canonical_variant(parse_term(a)), canonical_variant(parse_term(b))
    rel = "variant of" if ca == cb else "NOT a variant of"
    print(f"{a:12} is {rel:17} {b:12} "
          f"(canonical: {print_term(ca)} vs {print_term(cb)})")
