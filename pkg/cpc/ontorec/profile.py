"""
Builds user interest profiles from dated browsing and feedback events, with inverse time
weighting and interest inherited by super-class topics.
"""

# Built-ins
import collections
import dataclasses
import datetime
import logging
from typing import Optional

# This package
from .exceptions import ArgumentError, NotFoundError
from .kb import normalize_topic, superclass_chain
from .records import parse_date, read_records


logger = logging.getLogger(__name__)

INTEREST_VALUES = {
    'paper_browsed': 1.0,
    'recommendation_followed': 2.0,
    'topic_rated_interesting': 10.0,
    'topic_rated_not_interesting': -10.0,
}

# Event types that refer to a paper (resolved to the paper's topic)
PAPER_EVENTS = ('paper_browsed', 'recommendation_followed')


@dataclasses.dataclass(frozen=True)
class Event:
    user: str
    etype: str
    topic: str
    date: datetime.date
    url: Optional[str] = None


@dataclasses.dataclass
class InterestProfile:
    """
    Interest of one user in each topic at one date. Topics with an interest of exactly 0 are not
    members of the profile.
    """
    user: str
    as_of: Optional[datetime.date]
    entries: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        self.entries = {topic: value for topic, value in self.entries.items() if value != 0}

    def topics(self):
        return set(self.entries)

    def to_records(self):
        return [{'user': self.user, 'topic': topic, 'interest': self.entries[topic],
                 'date': self.as_of}
                for topic in sorted(self.entries)]


def event_interest_value(etype):
    """
    Interest value of an event type

    >>> event_interest_value('recommendation_followed')
    2.0
    """
    try:
        return INTEREST_VALUES[etype]
    except KeyError:
        raise ArgumentError(f'unknown event type {etype!r}') from None


def add_inherited(entries, kb, topic, value):
    """
    Adds `value` to a topic and `value / 2**level` to each of its super-classes
    """
    chain = superclass_chain(kb, topic)
    entries[normalize_topic(topic)] += value
    for level, ancestor in enumerate(chain, start=1):
        entries[ancestor] += value / 2 ** level


def compute_profile(user, events, kb, as_of):
    """
    Computes a user's interest profile with inverse time weighting

    Each event contributes interest value / days old to its topic (days old floored at 1), and
    that contribution divided by 2**level to every super-class `level` steps up the is-a tree.

    Events for another user, dated after `as_of`, or on topics missing from the forest are
    rejected with a warning; the remaining events are processed.

    ### Parameters

    - user (*string*): person id
    - events (*list of Event*): the user's events
    - kb (*KnowledgeBase*): knowledge base holding the topic forest
    - as_of (*datetime.date*): date the profile is computed for

    ### Returns

    - *InterestProfile*
    """
    as_of = parse_date(as_of)
    entries = collections.defaultdict(float)
    for event in events:
        if event.user != user:
            logger.warning('Rejected event %s: it belongs to %s, not %s', event, event.user, user)
            continue
        if event.date > as_of:
            logger.warning('Rejected event %s: dated after %s', event, as_of)
            continue
        value = event_interest_value(event.etype)
        days_old = max(1, (as_of - event.date).days)
        try:
            add_inherited(entries, kb, event.topic, value / days_old)
        except (NotFoundError, ArgumentError):
            logger.warning('Rejected event %s: topic %r is not in the topic forest', event,
                           event.topic)
    return InterestProfile(user, as_of, dict(entries))


def top_topics(p, n=3):
    """
    The n most interesting topics of a profile (positive interest only, ties lexicographic)

    >>> top_topics(InterestProfile('u', None, {'a': 3, 'b': 2, 'c': 1, 'd': 0.5}), 3)
    ['a', 'b', 'c']
    """
    if n < 1:
        raise ArgumentError('n must be at least 1')
    positive = [topic for topic, value in p.entries.items() if value > 0]
    return sorted(positive, key=lambda topic: (-p.entries[topic], topic))[:n]


def resolve_events(records, papers=None):
    """
    Converts event-log records into Events

    Records are `{user, etype, url or topic, date}`. Browse and follow records carry the URL of a
    paper, resolved to its topic through the paper database; rating records name the topic.
    Records that can't be resolved are reported and skipped.

    ### Parameters

    - records (*iterable of dicts*): event-log records
    - papers (*PaperDatabase*, optional): classified paper database

    ### Returns

    - *list of Event*: ordered by (date, user) with the log order kept among equals
    """
    events = []
    for record in records:
        try:
            user, etype = record['user'], record['etype']
            date = parse_date(record['date'], what='event date')
        except KeyError as e:
            raise ArgumentError(f'event record {record!r} is missing {e.args[0]!r}') from None
        event_interest_value(etype)
        url = record.get('url')
        topic = record.get('topic')
        if topic is None and url is not None and papers is not None:
            topic = papers.topic_of(url)
        if topic is None:
            logger.warning('Skipping %s event of %s on %s: %s has no known topic', etype, user,
                           date, url)
            continue
        events.append(Event(user, etype, normalize_topic(topic), date, url))
    return sorted(events, key=lambda event: (event.date, event.user))


def read_events(path, papers=None):
    """
    Reads an event log (JSON lines) and resolves it with `resolve_events()`
    """
    return resolve_events(read_records(path), papers)


def events_by_user(events):
    grouped = collections.defaultdict(list)
    for event in events:
        grouped[event.user].append(event)
    return dict(grouped)


def browsed_urls(events):
    """
    URLs each user has browsed or followed, by user
    """
    browsed = collections.defaultdict(set)
    for event in events:
        if event.url is not None and event.etype in PAPER_EVENTS:
            browsed[event.user].add(event.url)
    return dict(browsed)
