import warnings

import pytest

import genretext as gt


@pytest.fixture(scope="session")
def network():
    return gt.default_network()


@pytest.fixture(scope="session")
def lexicon():
    return gt.default_lexicon()


@pytest.fixture(scope="session")
def rules():
    return gt.default_rules()


@pytest.fixture(scope="session")
def model():
    return gt.default_task_model()


@pytest.fixture(scope="session")
def profiles(network):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", gt.RenormalizationWarning)
        return gt.default_profiles(network)


@pytest.fixture(scope="session")
def fixture_corpus():
    from importlib import resources

    text = resources.files("genretext").joinpath("data/fixture-corpus.jsonl").read_text("utf-8")
    return gt.load_corpus(text)
