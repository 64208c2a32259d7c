"""
Cold-start profiles: new-system profiles built from a person's publications, new-user profiles
that also draw on the profiles of the person's community of practice, and the daily export of
profiles back into the knowledge base.
"""

# Built-ins
import collections
import dataclasses
import datetime
import logging

# This package
from .exceptions import ArgumentError, NotFoundError
from .kb import assert_interest_profile
from .profile import InterestProfile, add_inherited
from .records import parse_date


logger = logging.getLogger(__name__)

DEFAULT_GAMMA = 2.5
DEFAULT_REFERENCE_DATE = datetime.date(2002, 1, 1)
CONFIDENCE_SOURCES = ('unit', 'relevance')


@dataclasses.dataclass(frozen=True)
class BootstrapParams:
    """
    Parameters of the bootstrap algorithms

    - gamma: weight of the similar users' interests (>= 0)
    - reference_date: date publication ages are measured from
    - cop_confidence_source: 'unit' (every similar user has confidence 1) or 'relevance'
      (confidence = community-of-practice relevance)
    """
    gamma: float = DEFAULT_GAMMA
    reference_date: datetime.date = DEFAULT_REFERENCE_DATE
    cop_confidence_source: str = 'relevance'

    def __post_init__(self):
        if self.gamma < 0:
            raise ArgumentError(f'gamma must be >= 0, not {self.gamma}')
        if self.cop_confidence_source not in CONFIDENCE_SOURCES:
            raise ArgumentError(f'cop_confidence_source must be one of {CONFIDENCE_SOURCES}, not '
                                f'{self.cop_confidence_source!r}')
        object.__setattr__(self, 'reference_date',
                           parse_date(self.reference_date, what='reference date'))


def publication_age(year, reference_date):
    """
    Age of a publication in whole years, at least 1

    >>> publication_age(2000, datetime.date(2002, 1, 1))
    2
    >>> publication_age(2002, datetime.date(2002, 6, 1))
    1
    """
    return max(1, reference_date.year - int(year))


def _publication_interests(person, classified_pubs, kb, reference_date):
    entries = collections.defaultdict(float)
    for topic, year in classified_pubs:
        if year is None:
            logger.warning('Skipping undated %s publication of %s', topic, person)
            continue
        try:
            add_inherited(entries, kb, topic, 1.0 / publication_age(year, reference_date))
        except (NotFoundError, ArgumentError):
            logger.warning('Skipping publication of %s on unknown topic %r', person, topic)
    return entries


def new_system_profile(person, classified_pubs, kb, params=BootstrapParams()):
    """
    Initial profile of a person from their publications alone

    Each publication adds 1 / age to its topic, and 1 / age / 2**level to each super-class.

    ### Parameters

    - person (*string*): person id
    - classified_pubs (*list of (topic path, year) tuples*): the person's classified publications
    - kb (*KnowledgeBase*): knowledge base holding the topic forest
    - params (*BootstrapParams*): bootstrap parameters (reference date)

    ### Returns

    - *InterestProfile*: dated at the reference date
    """
    entries = _publication_interests(person, classified_pubs, kb, params.reference_date)
    return InterestProfile(person, params.reference_date, dict(entries))


def new_user_profile(person, classified_pubs, cop, similar_profiles, kb,
                     params=BootstrapParams()):
    """
    Initial profile of a new user from their publications and similar users' profiles

    topic interest(t) = gamma / N_similar * sum over similar users u of
    interest(u, t) * confidence(u), plus the new-system publication term. N_similar counts the
    community members whose profile is available; with none, only the publication term is left.
    Super-class inference applies to the publication term only, since similar users' profiles
    already hold their inherited interests.

    ### Parameters

    - person (*string*): person id
    - classified_pubs (*list of (topic path, year) tuples*): the person's classified publications
    - cop (*CopResult*): the person's community of practice
    - similar_profiles (*dict*): person id -> InterestProfile
    - kb (*KnowledgeBase*): knowledge base holding the topic forest
    - params (*BootstrapParams*): bootstrap parameters

    ### Returns

    - *InterestProfile*: dated at the reference date

    ### Raises

    - ArgumentError: if gamma < 0
    """
    if params.gamma < 0:
        raise ArgumentError(f'gamma must be >= 0, not {params.gamma}')
    entries = _publication_interests(person, classified_pubs, kb, params.reference_date)
    similar = [(member, relevance) for member, relevance in cop
               if member != person and member in similar_profiles]
    if similar and params.gamma > 0:
        shared = collections.defaultdict(float)
        for member, relevance in similar:
            confidence = 1.0 if params.cop_confidence_source == 'unit' else relevance
            for topic, interest in similar_profiles[member].entries.items():
                shared[topic] += interest * confidence
        scale = params.gamma / len(similar)
        for topic in sorted(shared):
            entries[topic] += scale * shared[topic]
    elif not similar:
        logger.info('No similar user profiles for %s, using publications only', person)
    return InterestProfile(person, params.reference_date, dict(entries))


def export_profiles(profiles, kb):
    """
    Asserts a batch of same-day profiles into the knowledge base, one user at a time

    ### Returns

    - *KnowledgeBase*: the updated knowledge base

    ### Raises

    - ArgumentError: if the profiles are not all for the same date
    - NotFoundError: propagated from `assert_interest_profile()`
    """
    profiles = list(profiles)
    dates = {profile.as_of for profile in profiles}
    if len(dates) > 1:
        raise ArgumentError('profiles to export must all be for the same date, got {}'.format(
            sorted(str(date) for date in dates)))
    for profile in sorted(profiles, key=lambda profile: profile.user):
        kb = assert_interest_profile(kb, profile.user, profile, profile.as_of)
    logger.info('Exported %d profiles', len(profiles))
    return kb
