import shutil

import pytest

from analysis import ALIVE, KILLED, VerifierAdapter, run_campaign, verify_original
from conftest import fixture_path
from mutator import generate_all
from verifier_config import VerifierConfig

pytestmark = pytest.mark.skipif(shutil.which('dafny') is None, reason='dafny is not installed')


def if_deletion(resolved, name):
    mutants = generate_all(resolved(name), ('SDL',))
    return [m for m in mutants if m.target.description == 'delete if statement']


@pytest.fixture
def adapter(tmp_path):
    return VerifierAdapter(VerifierConfig(str(tmp_path / 'missing.json')).with_timeout(120))


def test_weak_postcondition_lets_the_deletion_survive(resolved, adapter):
    assert verify_original(fixture_path('shared_elements'), adapter).status == ALIVE
    ((_, verdict),) = run_campaign(if_deletion(resolved, 'shared_elements'), adapter)
    assert verdict.status == ALIVE


def test_strong_postcondition_kills_the_deletion(resolved, adapter):
    assert verify_original(fixture_path('shared_elements_strong'), adapter).status == ALIVE
    ((_, verdict),) = run_campaign(if_deletion(resolved, 'shared_elements_strong'), adapter)
    assert verdict.status == KILLED
