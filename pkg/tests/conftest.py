import pytest

from knotfloer.diagram import BUILTIN_NAMES, builtin
from knotfloer.floer import cfk_from_diagram


@pytest.fixture(scope="session")
def complexes():
    return {name: cfk_from_diagram(builtin(name)) for name in BUILTIN_NAMES}
