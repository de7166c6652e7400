from hypothesis import given
from hypothesis import strategies as st

from corpuscompare import textprep


def test_tokenize_basic():
    assert textprep.tokenize("get the #covidvaccine now") == ["get", "the", "#covidvaccine", "now"]


def test_tokenize_empty():
    assert textprep.tokenize("") == []


def test_tokenize_keeps_internal_apostrophe():
    assert textprep.tokenize("don't trust pfizer") == ["don't", "trust", "pfizer"]


def test_tokenize_strips_edge_apostrophes():
    assert textprep.tokenize("'quoted' word''") == ["quoted", "word"]


def test_tokenize_keeps_mentions():
    assert textprep.tokenize("rt @user hello") == ["rt", "@user", "hello"]


token_text = st.text(
    alphabet=st.sampled_from(list("abcdefghij#@' ")),
    min_size=0,
    max_size=60,
)


@given(token_text)
def test_tokenize_idempotent_over_own_output(text):
    tokens = textprep.tokenize(text)
    assert textprep.tokenize(" ".join(tokens)) == tokens


def test_remove_stopwords():
    assert textprep.remove_stopwords(["the", "vaccine", "is", "safe"]) == ["vaccine", "safe"]


def test_remove_stopwords_extra():
    assert textprep.remove_stopwords(["covid", "vaccine"], extra_stopwords=["covid"]) == ["vaccine"]


def test_remove_stopwords_empty():
    assert textprep.remove_stopwords([]) == []


def test_extract_hashtags_duplicates_and_case():
    assert textprep.extract_hashtags("#Pfizer #pfizer shot") == ["pfizer", "pfizer"]


def test_extract_hashtags_none():
    assert textprep.extract_hashtags("no tags") == []


def test_extract_hashtags_punctuation_terminates():
    assert textprep.extract_hashtags("#covid19!") == ["covid19"]


def test_extract_hashtags_underscore():
    assert textprep.extract_hashtags("tag #covid_19 more") == ["covid_19"]


@given(token_text)
def test_hashtags_subset_of_hash_tokens(text):
    # on tokenizable text, every extracted tag also appears among '#'-tokens
    tags = textprep.extract_hashtags(text.lower())
    hash_tokens = [t.lstrip("#") for t in textprep.tokenize(text.lower()) if t.startswith("#")]
    for tag in tags:
        assert any(ht.startswith(tag) for ht in hash_tokens)


def test_bundled_lists():
    stops = textprep.english_stopwords()
    assert len(stops) == 200
    assert "the" in stops and "you've" in stops
    task = textprep.task_stopwords()
    assert "covid" in task and "vaccine" in task
    # organization names stay analyzable
    assert "pfizer" not in task
    phrases = textprep.collection_phrases()
    assert "covid vaccine" in phrases and len(phrases) == 8
