import json

import pytest

from corpuscompare import fixtures, ingest


def load_clean(fixture_dir, which):
    name = "corpus_fall.jsonl" if which == "fall" else "corpus_spring.jsonl"
    tag = "fall2020" if which == "fall" else "spring2021"
    loaded = ingest.load_corpus(fixture_dir / name, tag)
    survivors, _ = ingest.filter_cascade(loaded.posts)
    return ingest.normalize_corpus(survivors, tag)


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fixture_small")
    fixtures.generate_fixture(out, seed=7, posts_per_corpus=1000)
    return out


@pytest.fixture(scope="session")
def fall_clean(fixture_dir):
    return load_clean(fixture_dir, "fall")


@pytest.fixture(scope="session")
def spring_clean(fixture_dir):
    return load_clean(fixture_dir, "spring")


@pytest.fixture(scope="session")
def planted(fixture_dir):
    return json.loads((fixture_dir / "planted.json").read_text(encoding="utf-8"))


def make_clean(text, post_id="p1", tag="fall2020", author="u1", retweeted=None):
    """Normalize a raw text into a CleanPost for tests."""
    raw = ingest.RawPost(id=post_id, text=text, author_id=author, retweet_flag=retweeted)
    clean = ingest.normalize(raw, tag)
    assert clean is not None, f"normalize dropped {text!r}"
    return clean
