"""
Produces the daily ranked recommendations for a user from their interest profile and the
database of classified papers.
"""

# Built-ins
import dataclasses
import logging

# This package
from .exceptions import ArgumentError
from .profile import top_topics


logger = logging.getLogger(__name__)

DEFAULT_LIMIT = 10
DEFAULT_TOP_TOPICS = 3


@dataclasses.dataclass(frozen=True)
class Recommendation:
    url: str
    topic: str
    recommendation_confidence: float


def recommend(user, profile, papers, browsed=frozenset(), limit=DEFAULT_LIMIT,
              n_topics=DEFAULT_TOP_TOPICS):
    """
    Recommends unseen papers on the user's most interesting topics

    Candidates are the papers classified under one of the profile's top `n_topics` topics that
    are not in the browsed set. Each is scored with classification confidence * topic interest;
    the pooled candidates are ranked by descending score (ties by url) and cut to `limit`.

    ### Parameters

    - user (*string*): person id
    - profile (*InterestProfile*): the user's current profile
    - papers (*iterable of ClassifiedPaper*): classified paper database
    - browsed (*set of strings*): urls the user has already seen
    - limit (*int*): maximum number of recommendations
    - n_topics (*int*): number of top topics to draw candidates from

    ### Returns

    - *list of Recommendation*
    """
    if limit < 1:
        raise ArgumentError('the recommendation limit must be at least 1')
    topics = set(top_topics(profile, n_topics))
    best = {}
    for paper in papers:
        if paper.topic not in topics or paper.url in browsed:
            continue
        confidence = paper.classification_confidence * profile.entries[paper.topic]
        if paper.url not in best or confidence > best[paper.url].recommendation_confidence:
            best[paper.url] = Recommendation(paper.url, paper.topic, confidence)
    ranked = sorted(best.values(), key=lambda rec: (-rec.recommendation_confidence, rec.url))
    logger.debug('%d candidate papers for %s on %s', len(ranked), user, sorted(topics))
    return ranked[:limit]


def recommend_all(profiles, papers, browsed_by_user=None, limit=DEFAULT_LIMIT,
                  n_topics=DEFAULT_TOP_TOPICS):
    """
    Daily recommendations for every profiled user

    ### Returns

    - *dict*: user -> list of Recommendation
    """
    papers = list(papers)
    browsed_by_user = browsed_by_user or {}
    return {user: recommend(user, profiles[user], papers, browsed_by_user.get(user, set()),
                            limit, n_topics)
            for user in sorted(profiles)}


def to_records(user, recommendations):
    return [{'user': user, 'rank': rank, 'url': rec.url, 'topic': rec.topic,
             'confidence': rec.recommendation_confidence}
            for rank, rec in enumerate(recommendations, start=1)]
