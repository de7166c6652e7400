import json
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from corpuscompare import ingest, report

from conftest import make_clean

# 20-sentence bilingual fixture for the language heuristic: 10 English, 10 not.
ENGLISH_SENTENCES = [
    "i will not take the vaccine until the trials are finished",
    "the rollout in our county has been slower than expected",
    "we got our second dose at the pharmacy this morning",
    "there is a lot of misinformation about side effects going around",
    "my parents are still waiting for an appointment to open up",
    "officials say the supply should improve by the end of the month",
    "this is the third time my appointment has been cancelled",
    "some people at work refuse to get vaccinated at all",
    "the news about the trial pause made everyone nervous",
    "she said the side effects were mild and gone in a day",
]
NON_ENGLISH_SENTENCES = [
    "bonjour je refuse le vaccin covid merci beaucoup",
    "le gouvernement annonce une nouvelle campagne de vaccination",
    "les essais cliniques seront publies la semaine prochaine",
    "nous refusons cette politique sanitaire absurde",
    "mi abuela ya recibio la segunda dosis ayer por la tarde",
    "das neue impfzentrum wurde gestern offiziell eroeffnet",
    "ich werde diesen impfstoff niemals nehmen",
    "domani andremo al centro vaccinale della nostra citta",
    "el gobierno anuncia nuevas medidas sanitarias para todos",
    "ce vaccin me fait tres peur alors je vais attendre",
]


def _raw(i, text, author="a", retweeted=None):
    return ingest.RawPost(id=f"r{i}", text=text, author_id=author, retweet_flag=retweeted)


# --- load_corpus ---


def _write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(row + "\n")


def test_load_corpus_all_valid(tmp_path):
    p = tmp_path / "c.jsonl"
    _write_jsonl(p, [json.dumps({"id": f"x{i}", "text": f"post {i}"}) for i in range(3)])
    result = ingest.load_corpus(p, "fall2020")
    assert len(result.posts) == 3
    assert result.skipped_count == 0


def test_load_corpus_keyword_filter(tmp_path):
    p = tmp_path / "c.jsonl"
    _write_jsonl(
        p,
        [
            json.dumps({"id": "x1", "text": "I got the COVID vaccine today"}),
            json.dumps({"id": "x2", "text": "nice weather"}),
            json.dumps({"id": "x3", "text": "flu season again"}),
        ],
    )
    result = ingest.load_corpus(p, "fall2020", keyword_filter=["covid vaccine"])
    assert [r.id for r in result.posts] == ["x1"]


def test_load_corpus_malformed_line(tmp_path):
    p = tmp_path / "c.jsonl"
    rows = [json.dumps({"id": f"x{i}", "text": "t"}) for i in range(4)]
    rows.insert(2, "{not json")
    _write_jsonl(p, rows)
    result = ingest.load_corpus(p, "fall2020")
    assert len(result.posts) == 4
    assert result.skipped_count == 1


def test_load_corpus_missing_file(tmp_path):
    with pytest.raises(ingest.DataError) as err:
        ingest.load_corpus(tmp_path / "absent.jsonl", "x")
    assert "absent.jsonl" in str(err.value)


# --- filter cascade ---


def test_cascade_duplicates():
    posts = [_raw(1, "same text here today"), _raw(2, "same text here today")]
    survivors, rep = ingest.filter_cascade(posts)
    assert len(survivors) == 1
    assert survivors[0].id == "r1"
    assert rep.dup_dropped == 1


def test_cascade_duplicate_is_whitespace_insensitive():
    posts = [_raw(1, "same  text here"), _raw(2, " same text here ")]
    survivors, rep = ingest.filter_cascade(posts)
    assert len(survivors) == 1 and rep.dup_dropped == 1


def test_cascade_drops_french():
    posts = [_raw(1, "Bonjour je refuse le vaccin covid merci beaucoup")]
    survivors, rep = ingest.filter_cascade(posts)
    assert survivors == []
    assert rep.non_english_dropped == 1


def test_cascade_empty_input():
    survivors, rep = ingest.filter_cascade([])
    assert survivors == [] and rep.to_dict() == {
        "input_count": 0,
        "na_dropped": 0,
        "dup_dropped": 0,
        "non_english_dropped": 0,
        "survivors": 0,
    }


def test_cascade_idempotent():
    posts = [
        _raw(1, "the vaccine is ready for all of us"),
        _raw(2, ""),
        _raw(3, "the vaccine is ready for all of us"),
        _raw(4, "je refuse le vaccin merci beaucoup mes amis"),
        _raw(5, "another fine day for the rollout news"),
    ]
    once, rep1 = ingest.filter_cascade(posts)
    twice, rep2 = ingest.filter_cascade(once)
    assert [p.id for p in once] == [p.id for p in twice]
    assert rep2.na_dropped == rep2.dup_dropped == rep2.non_english_dropped == 0


def test_cascade_survivor_count_equals_distinct_texts():
    posts = [
        _raw(1, "we are waiting for the results"),
        _raw(2, "we are waiting for the results"),
        _raw(3, "this is a different one entirely"),
        _raw(4, "we are waiting for the results "),
    ]
    survivors, _ = ingest.filter_cascade(posts)
    distinct = {" ".join(p.text.split()) for p in posts}
    assert len(survivors) == len(distinct)


def test_language_heuristic_bilingual_fixture():
    for s in ENGLISH_SENTENCES:
        assert ingest.is_english(s), s
    for s in NON_ENGLISH_SENTENCES:
        assert not ingest.is_english(s), s


def test_language_heuristic_short_posts_pass():
    assert ingest.is_english("vaccin refuse")  # < 3 tokens


# --- normalize ---


def test_normalize_strips_url_punct_case():
    clean = make_clean("Get the #CovidVaccine NOW!!! https://t.co/x")
    assert clean.normalized_text == "get the #covidvaccine now"
    assert clean.hashtags == ("covidvaccine",)
    assert clean.char_len == len(clean.normalized_text)


def test_normalize_retweet_prefix():
    clean = make_clean("RT @user: I refuse")
    assert clean.is_retweet


def test_normalize_retweet_flag_wins():
    clean = make_clean("plain text post", retweeted=True)
    assert clean.is_retweet


def test_normalize_url_only_is_dropped():
    raw = ingest.RawPost(id="u", text="https://t.co/abc")
    assert ingest.normalize(raw, "fall2020") is None


def test_normalize_emoji_removed():
    clean = make_clean("shot done \U0001F489 feeling fine ❤️")
    assert "\U0001F489" not in clean.normalized_text
    assert clean.normalized_text == "shot done feeling fine"


def test_normalize_keeps_underscore_hashtag_in_tags_only():
    clean = make_clean("tag #covid_19 here")
    assert clean.hashtags == ("covid_19",)
    assert "_" not in clean.normalized_text


tweet_chars = st.text(
    alphabet=st.sampled_from(list("abcXYZ012 .,!?#@'-:/\U0001F600❤")),
    min_size=0,
    max_size=80,
)


@given(tweet_chars)
def test_normalize_char_properties(text):
    raw = ingest.RawPost(id="h", text=text)
    clean = ingest.normalize(raw, "t")
    if clean is None:
        return
    assert len(clean.normalized_text) <= len(text)
    assert re.fullmatch(r"[\w\s#@']*", clean.normalized_text)
    assert "_" not in clean.normalized_text
    assert "  " not in clean.normalized_text


# --- corpus stats ---


def test_corpus_stats_counts():
    posts = [
        make_clean("first post #a #a #b", post_id="p1", author="u1"),
        make_clean("rt @u1: second post", post_id="p2", author="u1"),
    ]
    stats = ingest.corpus_stats(posts)
    assert stats.total.n == 2
    assert stats.total.unique_users == 1
    assert stats.total.hashtags_total == 3
    assert stats.total.hashtags_unique == 2
    assert stats.retweets.n == 1
    assert stats.nonretweets.n == 1
    assert stats.total.n == stats.retweets.n + stats.nonretweets.n
    assert stats.total.hashtags_unique <= stats.total.hashtags_total


def test_corpus_stats_empty():
    stats = ingest.corpus_stats([], dataset_tag="x")
    assert stats.total == ingest.CategoryCounts(0, 0, 0, 0)


def test_corpus_stats_permutation_invariant(fall_clean):
    import random

    shuffled = list(fall_clean)
    random.Random(5).shuffle(shuffled)
    assert ingest.corpus_stats(shuffled, "fall2020") == ingest.corpus_stats(
        list(fall_clean), "fall2020"
    )


def test_stats_renderer_reproduces_fall_totals():
    stats = ingest.CorpusStats(
        dataset_tag="fall2020",
        retweets=ingest.CategoryCounts(22224, 18201, 5953, 2076),
        nonretweets=ingest.CategoryCounts(106248, 72304, 21062, 5132),
        total=ingest.CategoryCounts(128472, 90505, 27015, 5672),
    )
    text = report.stats_text_table([stats])
    lines = text.splitlines()
    assert lines[0].split("  ")[0] == "Data"
    assert "Number of tweets" in lines[0]
    assert "Hashtags (total)" in lines[0] and "Hashtags (unique)" in lines[0]
    total_line = [l for l in lines if l.startswith("Total")][0]
    for value in ("128,472", "90,505", "27,015", "5,672"):
        assert value in total_line
    assert "22,224" in [l for l in lines if l.startswith("Retweets")][0]


# --- clean post round trip ---


def test_clean_posts_roundtrip(tmp_path, fall_clean):
    path = tmp_path / "clean.jsonl"
    subset = list(fall_clean)[:50]
    ingest.write_clean_posts(subset, path)
    back = ingest.read_clean_posts(path)
    assert back == subset
