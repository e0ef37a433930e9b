import pytest

from core.config import settings
from core.model import FiniteDomain, Relation
from core.orchestrator import BOOLEAN, boolean_class, boolean_function


@pytest.fixture
def restore_settings():
    saved = settings.model_dump()
    yield settings
    for name, value in saved.items():
        setattr(settings, name, value)


@pytest.fixture
def bool_domain() -> FiniteDomain:
    return BOOLEAN


@pytest.fixture
def AND():
    return boolean_function("AND")


@pytest.fixture
def OR():
    return boolean_function("OR")


@pytest.fixture
def NAND():
    return boolean_function("NAND")


@pytest.fixture
def NEG():
    return boolean_function("NEG")


@pytest.fixture
def ID():
    return boolean_function("ID")


@pytest.fixture
def delta() -> Relation:
    """Binary disequality on {0,1}."""
    return Relation.disequality(BOOLEAN)


@pytest.fixture
def eq() -> Relation:
    return Relation.equality(BOOLEAN)


@pytest.fixture
def leq() -> Relation:
    return Relation.of(BOOLEAN, [(0, 0), (0, 1), (1, 1)])


@pytest.fixture
def and_closure(AND):
    from tools.substitution import substitution_tool

    return substitution_tool.svs_closure(boolean_class(AND), 2)
