import pytest

from oddexplain import compile_naive_bayes, decision_table
from oddexplain.fixtures import admissions_classifier


@pytest.fixture(scope="session")
def admissions():
    return admissions_classifier()


@pytest.fixture(scope="session")
def admissions_table(admissions):
    return decision_table(admissions)


@pytest.fixture()
def admissions_dd(admissions):
    # fresh manager per test: managers are mutable arenas
    return compile_naive_bayes(admissions)
