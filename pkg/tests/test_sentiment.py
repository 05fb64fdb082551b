import json
import math
from datetime import date
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stockcast.errors import NewsAfterCalendarEnd
from stockcast.ingest import NewsItem
from stockcast.sentiment import (
    EMPTY_SCORE,
    NEUTRAL_SCORE,
    PreprocessConfig,
    aggregate_daily,
    load_lexicon,
    load_stopwords,
    parse_lexicon,
    preprocess_text,
    score_text,
    valence_sum,
)

from vader_reference import ReferenceAnalyzer

FIXTURES = Path(__file__).parent / "fixtures" / "sentiment_fixtures.json"

LEXICON = load_lexicon()
STOPWORDS = load_stopwords()
BOTH = PreprocessConfig(remove_stopwords=True, remove_special_chars=True)


# --- preprocessing -------------------------------------------------------


def test_preprocess_strips_possessive_and_specials_keeps_bangs():
    out = preprocess_text("RIL's Q4 *beats* estimates!!", BOTH, LEXICON, STOPWORDS)
    assert out == "ril q4 beats estimates !!"


def test_preprocess_empty():
    assert preprocess_text("", BOTH, LEXICON, STOPWORDS) == ""


def test_preprocess_protects_negators_from_stopword_removal():
    config = PreprocessConfig(remove_stopwords=True, remove_special_chars=False)
    assert preprocess_text("not a good day", config, LEXICON, STOPWORDS) == "not good day"


def test_preprocess_protects_boosters():
    config = PreprocessConfig(remove_stopwords=True, remove_special_chars=False)
    # "very" and "most" sit on the stopword list but survive
    assert preprocess_text("very good and most solid", config, LEXICON, STOPWORDS) == (
        "very good most solid"
    )


# --- lexicon file format ---------------------------------------------------


def test_lexicon_parsing_comments_and_errors():
    lex = parse_lexicon("# header comment\ngood\t1.9\n\nbad\t-2.5\n")
    assert lex.valences == {"good": 1.9, "bad": -2.5}
    with pytest.raises(ValueError):
        parse_lexicon("justoneword\n")
    with pytest.raises(ValueError):
        parse_lexicon("Upper\t1.0\n")  # tokens must be lowercase


def test_bundled_lexicon_excludes_modifier_vocabulary():
    # negators and boosters must not double as scored tokens
    for token in ("no", "not", "very", "never", "without"):
        assert token not in LEXICON.valences


# --- scoring -------------------------------------------------------------


def test_score_good_matches_hand_computation():
    score = score_text("good", LEXICON)
    expected = 1.9 / math.sqrt(1.9 * 1.9 + 15.0)
    assert abs(score.compound - expected) < 1e-12
    assert score.pos == 1.0 and score.neg == 0.0 and score.neu == 0.0


def test_score_empty_text_is_all_zero():
    assert score_text("", LEXICON) == EMPTY_SCORE


def test_score_negation_hand_computation():
    score = score_text("not good", LEXICON)
    s = 1.9 * -0.74
    expected = s / math.sqrt(s * s + 15.0)
    assert abs(score.compound - expected) < 1e-12


def test_no_lexicon_tokens_is_neutral():
    score = score_text("the quarterly shareholder circular", LEXICON)
    assert score == NEUTRAL_SCORE


def test_fixture_corpus_matches_frozen_reference_values():
    fixtures = json.loads(FIXTURES.read_text())
    assert len(fixtures) >= 20
    for fixture in fixtures:
        score = score_text(fixture["text"], LEXICON)
        for key in ("pos", "neg", "neu", "compound"):
            assert abs(getattr(score, key) - fixture[key]) < 1e-6, (fixture["text"], key)


def test_frozen_fixtures_match_live_reference_oracle():
    # guards against fixture rot: the frozen file must equal a fresh oracle run
    analyzer = ReferenceAnalyzer(LEXICON)
    for fixture in json.loads(FIXTURES.read_text()):
        live = analyzer.polarity_scores(fixture["text"])
        for key in ("pos", "neg", "neu", "compound"):
            assert abs(live[key] - fixture[key]) < 1e-12, fixture["text"]


WORD_POOL = [
    "good", "bad", "profit", "loss", "surge", "crash", "not", "very",
    "slightly", "shares", "market", "today", "strong", "weak", "growth",
    "decline", "nothing", "really",
]


@settings(max_examples=120, derandomize=True)
@given(words=st.lists(st.sampled_from(WORD_POOL), min_size=1, max_size=12))
def test_mass_proportions_sum_to_one(words):
    score = score_text(" ".join(words), LEXICON)
    assert abs(score.pos + score.neg + score.neu - 1.0) < 1e-9
    assert -1.0 <= score.compound <= 1.0


@settings(max_examples=80, derandomize=True)
@given(words=st.lists(st.sampled_from(WORD_POOL), min_size=0, max_size=8))
def test_appending_positive_token_never_decreases_valence_sum(words):
    # the guarantee only holds when no negator/booster sits in the 3-token
    # window preceding the appended word
    suffix = [w.lower() for w in words[-3:]]
    if any(LEXICON.is_negator(w) or w in LEXICON.boosters for w in suffix):
        return
    text = " ".join(words)
    base = valence_sum(text, LEXICON)
    extended = valence_sum((text + " good").strip(), LEXICON)
    assert extended >= base - 1e-12


def test_scoring_is_deterministic():
    text = "profits surge but-free sentence with very good results"
    assert score_text(text, LEXICON) == score_text(text, LEXICON)


# --- daily aggregation ---------------------------------------------------

CAL = [date(2021, 6, 7), date(2021, 6, 8), date(2021, 6, 9)]  # Mon..Wed


def news(d: date, headline: str, ticker: str = "RIL") -> NewsItem:
    return NewsItem(date=d, ticker=ticker, headline=headline)


def test_same_day_headlines_concatenate_into_one_record():
    items = [news(CAL[0], "profits surge"), news(CAL[0], "strong growth"), news(CAL[0], "very good")]
    records = aggregate_daily(items, CAL, "RIL", LEXICON, STOPWORDS)
    assert len(records) == 3
    assert records[0].headline_count == 3
    combined = preprocess_text(
        "profits surge. strong growth. very good", BOTH, LEXICON, STOPWORDS
    )
    assert records[0].score == score_text(combined, LEXICON)


def test_days_without_news_are_neutral():
    records = aggregate_daily([], CAL, "RIL", LEXICON, STOPWORDS)
    assert all(r.score == NEUTRAL_SCORE and r.headline_count == 0 for r in records)
    assert [r.date for r in records] == CAL


def test_weekend_news_rolls_forward_to_monday():
    saturday = date(2021, 6, 5)
    records = aggregate_daily([news(saturday, "profits surge")], CAL, "RIL", LEXICON, STOPWORDS)
    assert records[0].date == CAL[0]
    assert records[0].headline_count == 1


def test_news_after_calendar_end_is_an_error():
    with pytest.raises(NewsAfterCalendarEnd):
        aggregate_daily([news(date(2021, 6, 10), "late")], CAL, "RIL", LEXICON, STOPWORDS)


def test_other_tickers_are_ignored():
    items = [news(CAL[0], "profits surge", ticker="TCS")]
    records = aggregate_daily(items, CAL, "RIL", LEXICON, STOPWORDS)
    assert records[0].headline_count == 0


def test_headline_count_is_order_invariant():
    items = [news(CAL[0], "profits surge"), news(CAL[0], "heavy losses")]
    fwd = aggregate_daily(items, CAL, "RIL", LEXICON, STOPWORDS)
    rev = aggregate_daily(list(reversed(items)), CAL, "RIL", LEXICON, STOPWORDS)
    assert fwd[0].headline_count == rev[0].headline_count == 2


def test_per_headline_average_mode():
    items = [news(CAL[0], "very good"), news(CAL[0], "heavy losses")]
    records = aggregate_daily(
        items, CAL, "RIL", LEXICON, STOPWORDS, per_headline_average=True
    )
    s1 = score_text(preprocess_text("very good", BOTH, LEXICON, STOPWORDS), LEXICON)
    s2 = score_text(preprocess_text("heavy losses", BOTH, LEXICON, STOPWORDS), LEXICON)
    assert abs(records[0].score.compound - (s1.compound + s2.compound) / 2) < 1e-12
