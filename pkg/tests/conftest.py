import glob
import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'fixtures')

from dafny_syntax import parse_program  # noqa: E402
from resolver import resolve  # noqa: E402


def fixture_path(name):
    return os.path.join(FIXTURES, name if name.endswith('.dfy') else f"{name}.dfy")


def read_fixture(name):
    with open(fixture_path(name), 'r', encoding='utf-8', newline='') as f:
        return f.read()


def resolve_text(text):
    return resolve(parse_program(text))


ALL_FIXTURES = sorted(os.path.basename(p) for p in glob.glob(os.path.join(FIXTURES, '*.dfy')))


@pytest.fixture
def fixture_text():
    return read_fixture


@pytest.fixture
def resolved():
    def load(name):
        return resolve_text(read_fixture(name))
    return load


@pytest.fixture(autouse=True)
def no_verifier_override(monkeypatch):
    monkeypatch.delenv('MUTDAFNY_VERIFIER', raising=False)
