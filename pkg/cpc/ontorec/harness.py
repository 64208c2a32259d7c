"""
Offline replay evaluation: replays weekly event logs with and without bootstrapped profiles and
measures how fast the profiles converge to the final-week benchmark.
"""

# Built-ins
import dataclasses
import datetime
import logging
from typing import Optional

# Third-party
import pandas as pd

# This package
from .bootstrap import BootstrapParams, new_system_profile, new_user_profile
from .cop import CopResult
from .exceptions import ArgumentError, StateError
from .kb import classified_publications
from .profile import InterestProfile, compute_profile, events_by_user


logger = logging.getLogger(__name__)

DEFAULT_WEEKS = 7
WEEK = datetime.timedelta(days=7)


@dataclasses.dataclass(frozen=True)
class MetricsRow:
    week: int
    precision: float
    error_rate: float
    run_label: str
    user: Optional[str] = None


class WeeklySplit:
    """
    WeeklySplit object

    Segment 0 is the empty log standing for the very start of the trial; segment i (1..W) holds
    the events of week i. Iteration i sees segments 0..i and is computed as of `start + 7 * i`
    days.
    """

    def __init__(self, segments, start=None):
        segments = [list(segment) for segment in segments]
        if not segments:
            raise ArgumentError('a weekly split needs at least the week-0 segment')
        if segments[0]:
            raise ArgumentError('the week-0 segment must be empty')
        last = None
        for week, segment in enumerate(segments):
            if not segment:
                continue
            if last is not None and min(event.date for event in segment) <= last:
                raise ArgumentError(f'events of week {week} do not follow the earlier weeks')
            last = max(event.date for event in segment)
        if start is None:
            dates = [event.date for segment in segments for event in segment]
            if not dates:
                raise ArgumentError('a start date is needed when the logs hold no events')
            start = min(dates)
        self.segments = segments
        self.start = start

    @classmethod
    def from_events(cls, events, start=None, weeks=DEFAULT_WEEKS):
        """
        Splits a dated event log into week 0 (empty) plus `weeks` 7-day segments

        ### Parameters

        - events (*list of Event*): the log
        - start (*datetime.date*, optional): first day of week 1, defaults to the earliest event
        - weeks (*int*): number of weeks

        ### Returns

        - *WeeklySplit*: events after the last week are dropped with a warning
        """
        if weeks < 1:
            raise ArgumentError('at least one week is needed')
        events = sorted(events, key=lambda event: (event.date, event.user))
        if start is None:
            if not events:
                raise ArgumentError('a start date is needed when the logs hold no events')
            start = events[0].date
        segments = [[] for _ in range(weeks + 1)]
        dropped = 0
        for event in events:
            if event.date < start:
                raise ArgumentError(f'event {event} is dated before the start {start}')
            week = (event.date - start).days // 7 + 1
            if week > weeks:
                dropped += 1
                continue
            segments[week].append(event)
        if dropped:
            logger.warning('Dropped %d events after week %d', dropped, weeks)
        return cls(segments, start)

    @property
    def weeks(self):
        return len(self.segments) - 1

    def as_of(self, week):
        return self.start + week * WEEK

    def cumulative(self, week):
        return [event for segment in self.segments[:week + 1] for event in segment]


# --------------------------------------------------------------------------------------------------
# Metrics
#
def _topics(profile):
    entries = profile.entries if isinstance(profile, InterestProfile) else profile
    return {topic for topic, value in entries.items() if value != 0}


def _check_users(current, benchmark):
    if set(current) != set(benchmark):
        raise ArgumentError('current and benchmark profiles cover different users: {}'.format(
            sorted(set(current) ^ set(benchmark))))


def user_precision(current, benchmark):
    """
    N_correct / (N_correct + N_missing) for one user, 0 when the benchmark profile is empty
    """
    current, benchmark = _topics(current), _topics(benchmark)
    correct, missing = len(current & benchmark), len(benchmark - current)
    return correct / (correct + missing) if correct + missing else 0.0


def user_error_rate(current, benchmark):
    """
    N_incorrect / (N_correct + N_incorrect + N_missing) for one user, 0 when both are empty
    """
    current, benchmark = _topics(current), _topics(benchmark)
    total = len(current | benchmark)
    return len(current - benchmark) / total if total else 0.0


def profile_precision(current, benchmark):
    """
    Profile precision averaged over users

    ### Parameters

    - current (*dict*): user -> InterestProfile (or topic -> interest map)
    - benchmark (*dict*): user -> InterestProfile (or topic -> interest map)

    ### Returns

    - *float*: in [0, 1]

    ### Raises

    - ArgumentError: if the two maps cover different users
    """
    _check_users(current, benchmark)
    users = sorted(benchmark)
    if not users:
        return 0.0
    return sum(user_precision(current[user], benchmark[user]) for user in users) / len(users)


def profile_error_rate(current, benchmark):
    """
    Profile error rate averaged over users (see `profile_precision()`)
    """
    _check_users(current, benchmark)
    users = sorted(benchmark)
    if not users:
        return 0.0
    return sum(user_error_rate(current[user], benchmark[user]) for user in users) / len(users)


def _rows(week, current, benchmark, run_label, per_user):
    rows = [MetricsRow(week, profile_precision(current, benchmark),
                       profile_error_rate(current, benchmark), run_label)]
    if per_user:
        rows += [MetricsRow(week, user_precision(current[user], benchmark[user]),
                            user_error_rate(current[user], benchmark[user]), run_label, user)
                 for user in sorted(benchmark)]
    return rows


# --------------------------------------------------------------------------------------------------
# Replay
#
def replay_profiles(kb, corpus, logs, users, bootstrap_on, params=BootstrapParams()):
    """
    Profiles of every user after each iteration of one run

    Iteration i profiles the events of weeks 0..i as of `logs.as_of(i)`. With bootstrapping on,
    each user's new-system profile (the whole week-0 profile) is added to every iteration's
    behaviour profile.

    ### Returns

    - *list of dicts*: one user -> InterestProfile map per week, week 0 first

    ### Raises

    - StateError: if the paper database has no trained classifier
    """
    if corpus is None or not corpus.trained:
        raise StateError('replay needs a paper database with a trained classifier')
    users = sorted(set(users))
    bootstrap = {}
    if bootstrap_on:
        for user in users:
            pubs = classified_publications(kb, user, corpus) if user in kb.entities else []
            bootstrap[user] = new_system_profile(user, pubs, kb, params)
    weeks = []
    for week in range(logs.weeks + 1):
        as_of = logs.as_of(week)
        events = events_by_user(logs.cumulative(week))
        profiles = {}
        for user in users:
            profile = compute_profile(user, events.get(user, []), kb, as_of)
            if bootstrap_on:
                entries = dict(bootstrap[user].entries)
                for topic, value in profile.entries.items():
                    entries[topic] = entries.get(topic, 0.0) + value
                profile = InterestProfile(user, as_of, entries)
            profiles[user] = profile
        weeks.append(profiles)
    return weeks


def replay_experiment(kb, corpus, logs, users, bootstrap_on, params=BootstrapParams(),
                      per_user=False):
    """
    Replays the weekly logs and scores every week against the benchmark

    The benchmark is the final-week profile set of the control run (no bootstrapping), so every
    topic seen in the logs is in it and incorrect topics can only come from bootstrapping.

    ### Parameters

    - kb (*KnowledgeBase*): knowledge base
    - corpus (*PaperDatabase*): classified paper database with a trained classifier
    - logs (*WeeklySplit*): weekly event logs
    - users (*list of strings*): users to replay
    - bootstrap_on (*bool*): start from new-system profiles
    - params (*BootstrapParams*): bootstrap parameters
    - per_user (*bool*): add one row per user and week

    ### Returns

    - *list of MetricsRow*: run label 'bootstrap' or 'control', one row per week (plus the
      per-user rows)
    """
    users = sorted(set(users))
    if not users:
        raise ArgumentError('no users to replay')
    control = replay_profiles(kb, corpus, logs, users, False, params)
    run = replay_profiles(kb, corpus, logs, users, True, params) if bootstrap_on else control
    benchmark = control[-1]
    label = 'bootstrap' if bootstrap_on else 'control'
    rows = []
    for week, profiles in enumerate(run):
        rows += _rows(week, profiles, benchmark, label, per_user)
    logger.info('Replayed %d weeks for %d users (%s)', logs.weeks, len(users), label)
    return rows


def new_user_evaluation(kb, profiles_at_final_week, cop_per_user, params=BootstrapParams(),
                        corpus=None, week=DEFAULT_WEEKS, per_user=False):
    """
    Scores new-user profiles built for every user as if they had just joined

    Each user's new-user profile is built from their publications and the final-week profiles of
    the other users in their community of practice, then compared with their own final-week
    profile.

    ### Parameters

    - kb (*KnowledgeBase*): knowledge base
    - profiles_at_final_week (*dict*): user -> InterestProfile
    - cop_per_user (*dict*): user -> CopResult
    - params (*BootstrapParams*): bootstrap parameters
    - corpus (*PaperDatabase*, optional): classifies the users' publications
    - week (*int*): week number reported in the row
    - per_user (*bool*): return per-user rows after the averaged one

    ### Returns

    - *MetricsRow* (or a list of rows when `per_user` is set), run label 'new-user'

    ### Raises

    - ArgumentError: with fewer than 2 users
    """
    users = sorted(profiles_at_final_week)
    if len(users) < 2:
        raise ArgumentError('the new-user evaluation needs at least 2 users')
    current = {}
    for user in users:
        others = {other: profile for other, profile in profiles_at_final_week.items()
                  if other != user}
        pubs = classified_publications(kb, user, corpus) if user in kb.entities else []
        current[user] = new_user_profile(user, pubs, cop_per_user.get(user, CopResult()), others,
                                         kb, params)
    rows = _rows(week, current, profiles_at_final_week, 'new-user', per_user)
    return rows if per_user else rows[0]


def metrics_frame(rows):
    """
    Metrics rows as a DataFrame with columns week, run, precision, error_rate (plus user when any
    per-user row is present)
    """
    frame = pd.DataFrame([dataclasses.astuple(row) for row in rows],
                         columns=['week', 'precision', 'error_rate', 'run', 'user'])
    frame = frame[['week', 'run', 'precision', 'error_rate', 'user']]
    if frame['user'].isna().all():
        frame = frame.drop(columns='user')
    return frame


def write_metrics(rows, stream):
    """
    Writes metrics rows as CSV (see `metrics_frame()`). Floats are written with 17 significant
    digits so the output reads back to the same values.
    """
    metrics_frame(rows).to_csv(stream, index=False, float_format='%.17g', lineterminator='\n')
