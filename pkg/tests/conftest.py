import pathlib

import pytest

from cctab import Engine, Mode, Program, find_bridges, parse_program, parse_query, print_term, translate

HERE = pathlib.Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text()


def read_golden(name: str) -> str:
    return (GOLDEN / name).read_text()


def analyzed(program: Program) -> Program:
    """Program with computed bridges unioned into the declared set."""
    return Program(program.clauses, program.tabled, program.bridges | find_bridges(program))


def make_engine(source: str, mode: Mode = Mode.GENERAL, **kw) -> Engine:
    program = parse_program(source)
    if mode is Mode.GENERAL:
        program = analyzed(program)
    return Engine(translate(program, mode), mode=mode, **kw)


def answers(engine: Engine, query: str) -> list:
    return [print_term(s.goals[0]) for s in engine.solve(parse_query(query))]


@pytest.fixture
def mixed_loop_src() -> str:
    return read_fixture("mixed_loop.pl")


@pytest.fixture
def reach_src() -> str:
    return read_fixture("reach.pl")
