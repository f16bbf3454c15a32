import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
FIXTURES = TESTS_DIR / "fixtures"
sys.path.insert(0, str(TESTS_DIR))

from sentpick.corpus import parse_conllu_file
from sentpick.lexicons import Lexicons, load_aux, load_kelly, load_lmi, load_svalex


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_corpus():
    return parse_conllu_file(str(FIXTURES / "corpus.conllu"))


@pytest.fixture(scope="session")
def lexicons() -> Lexicons:
    return Lexicons(
        kelly=load_kelly(FIXTURES / "kelly.tsv"),
        svalex=load_svalex(FIXTURES / "svalex.tsv"),
        lmi=load_lmi(FIXTURES / "lmi.tsv"),
        aux=load_aux(),
    )


@pytest.fixture(scope="session")
def fixture_model():
    from sentpick.classifier import CefrModel

    path = FIXTURES / "model.json"
    if not path.exists():
        pytest.skip("fixture model not generated yet")
    return CefrModel.load(str(path))
