# Built-ins
import dataclasses
import datetime
import logging

# Third-party
from hypothesis import given, settings, strategies as st
from pytest import approx, raises

# This package
from cpc.ontorec import ArgumentError
from cpc.ontorec.classify import PaperDatabase
from cpc.ontorec.kb import load_kb
from cpc.ontorec.profile import (INTEREST_VALUES, Event, InterestProfile, browsed_urls,
                                 compute_profile, event_interest_value, events_by_user, read_events,
                                 resolve_events, top_topics)

from conftest import COP, KM, KT, MOBILE, ONTOLOGY, RS, TOPIC_RECORDS, write_jsonl


AS_OF = datetime.date(2002, 3, 10)


def days_before(days):
    return AS_OF - datetime.timedelta(days=days)


def test_event_interest_values():
    assert event_interest_value('paper_browsed') == 1
    assert event_interest_value('recommendation_followed') == 2
    assert event_interest_value('topic_rated_interesting') == 10
    assert event_interest_value('topic_rated_not_interesting') == -10
    with raises(ArgumentError):
        event_interest_value('paper_printed')


def test_inverse_time_weighting_and_inheritance(shadbolt_kb):
    events = [Event('u', 'paper_browsed', RS, days_before(2))]
    profile = compute_profile('u', events, shadbolt_kb, AS_OF)
    assert profile.entries == {RS: 0.5, 'AI\\Agents': 0.25, 'AI': 0.125}
    assert profile.as_of == AS_OF


def test_events_on_the_profile_date_count_as_one_day_old(shadbolt_kb):
    events = [Event('u', 'topic_rated_interesting', KT, AS_OF)]
    assert compute_profile('u', events, shadbolt_kb, AS_OF).entries == {KT: 10.0}


def test_contributions_add_up(shadbolt_kb):
    events = [Event('u', 'paper_browsed', KM, days_before(1)),
              Event('u', 'recommendation_followed', KM, days_before(4)),
              Event('u', 'paper_browsed', KT, days_before(2))]
    profile = compute_profile('u', events, shadbolt_kb, AS_OF)
    assert profile.entries[KM] == 1.5
    assert profile.entries[KT] == 0.75 + 0.5


def test_negative_ratings(shadbolt_kb):
    events = [Event('u', 'topic_rated_not_interesting', RS, days_before(1)),
              Event('u', 'paper_browsed', KT, days_before(1))]
    profile = compute_profile('u', events, shadbolt_kb, AS_OF)
    assert profile.entries[RS] == -10
    assert profile.entries['AI'] == -2.5
    assert top_topics(profile, 3) == [KT]


def test_cancelling_events_leave_no_entry(shadbolt_kb):
    events = [Event('u', 'topic_rated_interesting', KT, days_before(1)),
              Event('u', 'topic_rated_not_interesting', KT, days_before(1))]
    profile = compute_profile('u', events, shadbolt_kb, AS_OF)
    assert profile.entries == {}
    assert profile.topics() == set()


def test_rejected_events_are_reported(shadbolt_kb, caplog):
    events = [Event('someone-else', 'paper_browsed', RS, days_before(1)),
              Event('u', 'paper_browsed', RS, AS_OF + datetime.timedelta(days=1)),
              Event('u', 'paper_browsed', 'AI\\Robotics', days_before(1)),
              Event('u', 'paper_browsed', KT, days_before(1))]
    with caplog.at_level(logging.WARNING, logger='cpc.ontorec'):
        profile = compute_profile('u', events, shadbolt_kb, AS_OF)
    assert profile.entries == {KT: 1.0}
    assert len([r for r in caplog.records if r.levelno == logging.WARNING]) == 3


@settings(max_examples=200, deadline=None)
@given(st.lists(st.lists(st.sampled_from(['a', 'b', 'c']), min_size=1, max_size=5),
                min_size=1, max_size=8),
       st.integers(1, 30))
def test_one_event_fills_the_whole_branch(branches, days):
    kb = load_kb([{'path': '\\'.join(labels)} for labels in branches])
    topic = '\\'.join(branches[0])
    depth = len(branches[0]) - 1
    events = [Event('u', 'paper_browsed', topic, days_before(days))]
    entries = compute_profile('u', events, kb, AS_OF).entries
    assert len(entries) == depth + 1
    for level in range(depth + 1):
        ancestor = '\\'.join(branches[0][:len(branches[0]) - level])
        assert abs(entries[ancestor] / entries[topic] - 1 / 2 ** level) < 1e-12


def test_top_topics():
    profile = InterestProfile('u', None, {'a': 1.0, 'b': 3.0, 'c': 3.0, 'd': 2.0, 'e': -5.0})
    assert top_topics(profile, 3) == ['b', 'c', 'd']
    assert top_topics(profile, 10) == ['b', 'c', 'd', 'a']
    with raises(ArgumentError):
        top_topics(profile, 0)


def test_profile_records():
    profile = InterestProfile('u', AS_OF, {KT: 1.0, COP: 0.0, RS: 2.0})
    assert profile.to_records() == [
        {'user': 'u', 'topic': RS, 'interest': 2.0, 'date': AS_OF},
        {'user': 'u', 'topic': KT, 'interest': 1.0, 'date': AS_OF},
    ]


def test_resolve_events_uses_the_paper_database(caplog):
    papers = PaperDatabase()
    papers.correct('http://x/1', RS)
    records = [
        {'user': 'b', 'etype': 'paper_browsed', 'url': 'http://x/1', 'date': '2002-03-02'},
        {'user': 'a', 'etype': 'topic_rated_interesting', 'topic': KT, 'date': '2002-03-02'},
        {'user': 'a', 'etype': 'recommendation_followed', 'url': 'http://x/1',
         'date': '2002-03-01'},
        {'user': 'a', 'etype': 'paper_browsed', 'url': 'http://x/unknown', 'date': '2002-03-01'},
    ]
    with caplog.at_level(logging.WARNING, logger='cpc.ontorec'):
        events = resolve_events(records, papers)
    assert events == [
        Event('a', 'recommendation_followed', RS, datetime.date(2002, 3, 1), 'http://x/1'),
        Event('a', 'topic_rated_interesting', KT, datetime.date(2002, 3, 2)),
        Event('b', 'paper_browsed', RS, datetime.date(2002, 3, 2), 'http://x/1'),
    ]
    assert 'http://x/unknown' in caplog.text
    assert browsed_urls(events) == {'a': {'http://x/1'}, 'b': {'http://x/1'}}
    assert sorted(events_by_user(events)) == ['a', 'b']


def test_resolve_events_rejects_malformed_records():
    with raises(ArgumentError):
        resolve_events([{'user': 'a', 'etype': 'paper_browsed', 'topic': KT}])
    with raises(ArgumentError):
        resolve_events([{'user': 'a', 'etype': 'paper_printed', 'topic': KT,
                         'date': '2002-03-01'}])
    with raises(ArgumentError):
        resolve_events([{'user': 'a', 'etype': 'paper_browsed', 'topic': KT,
                         'date': 'yesterday'}])


def test_read_events(tmp_path):
    path = write_jsonl(tmp_path / 'events.jsonl', [
        {'user': 'a', 'etype': 'topic_rated_interesting', 'topic': KM, 'date': '2002-03-02'}])
    assert read_events(path) == [
        Event('a', 'topic_rated_interesting', KM, datetime.date(2002, 3, 2))]


# --------------------------------------------------------------------------------------------------
# Properties over random event logs
#
FOREST = load_kb(TOPIC_RECORDS)

events_strategy = st.lists(
    st.builds(Event, st.just('u'), st.sampled_from(sorted(INTEREST_VALUES)),
              st.sampled_from([RS, MOBILE, KT, ONTOLOGY, KM, COP, 'AI']),
              st.integers(0, 90).map(days_before)),
    max_size=20)


def assert_same_entries(actual, expected):
    for topic in set(actual) | set(expected):
        assert actual.get(topic, 0.0) == approx(expected.get(topic, 0.0), abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(events_strategy, st.integers(-400, 400))
def test_shifting_every_date_leaves_the_profile_unchanged(events, shift):
    delta = datetime.timedelta(days=shift)
    shifted = [dataclasses.replace(event, date=event.date + delta) for event in events]
    assert compute_profile('u', shifted, FOREST, AS_OF + delta).entries == \
        compute_profile('u', events, FOREST, AS_OF).entries


@settings(max_examples=200, deadline=None)
@given(events_strategy, events_strategy)
def test_profile_of_concatenated_logs_is_the_sum(first, second):
    combined = compute_profile('u', first + second, FOREST, AS_OF).entries
    a = compute_profile('u', first, FOREST, AS_OF).entries
    b = compute_profile('u', second, FOREST, AS_OF).entries
    assert_same_entries(combined, {topic: a.get(topic, 0.0) + b.get(topic, 0.0)
                                   for topic in set(a) | set(b)})
