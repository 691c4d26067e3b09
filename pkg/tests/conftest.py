import os

import pytest

from autofix.eml import parse_eml
from autofix.interp import Bounds
from autofix.parser import parse_imp
from autofix.search import ReferenceOracle

ASSETS = os.path.join(os.path.dirname(__file__), "..", "assets")


def asset(*parts) -> str:
    return os.path.abspath(os.path.join(ASSETS, *parts))


def read(*parts) -> str:
    with open(asset(*parts), "r", encoding="utf-8") as fh:
        return fh.read()


@pytest.fixture(scope="session")
def deriv_ref():
    return parse_imp(read("computederiv", "reference.imp"))


@pytest.fixture(scope="session")
def deriv_student_source():
    return read("computederiv", "student.imp")


@pytest.fixture(scope="session")
def deriv_student(deriv_student_source):
    return parse_imp(deriv_student_source)


@pytest.fixture(scope="session")
def deriv_model():
    return parse_eml(read("computederiv", "model.eml"))


@pytest.fixture(scope="session")
def deriv_model_simple():
    return parse_eml(read("computederiv", "model_simple.eml"))


@pytest.fixture(scope="session")
def reverse_ref():
    return parse_imp(read("arrayreverse", "reference.imp"))


@pytest.fixture(scope="session")
def reverse_student_source():
    return read("arrayreverse", "student.imp")


@pytest.fixture(scope="session")
def reverse_student(reverse_student_source):
    return parse_imp(reverse_student_source)


@pytest.fixture(scope="session")
def reverse_model():
    return parse_eml(read("arrayreverse", "model.eml"))


@pytest.fixture(scope="session")
def reverse_model_overview():
    return parse_eml(read("arrayreverse", "model_overview.eml"))


@pytest.fixture(scope="session")
def deriv_oracle_w3(deriv_ref):
    return ReferenceOracle(deriv_ref, Bounds(3, 3))


@pytest.fixture(scope="session")
def reverse_oracle_w4(reverse_ref):
    return ReferenceOracle(reverse_ref, Bounds(4, 4))
