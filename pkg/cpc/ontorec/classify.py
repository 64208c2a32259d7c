"""
Labels research papers with topics: an IBk (k-nearest-neighbour) weak learner boosted with
AdaBoostM1, and the central database of classified papers built with it.
"""

# Built-ins
import collections
import dataclasses
import logging
import math
import pathlib
import pickle
import reprlib
from typing import Optional

# Third-party
import numpy as np
import scipy.sparse

# This package
from .exceptions import ArgumentError, NotFoundError, StateError
from .kb import normalize_topic
from .records import read_records
from .text import (DEFAULT_CAPACITY, build_dictionary, check_same_dictionary, distances_to,
                   tokenize_and_stem, vectorize)


logger = logging.getLogger(__name__)

# Create reprlib
r = reprlib.Repr()
r.maxlist = 4  # max elements displayed for lists
r.maxstring = 50  # max characters displayed for strings

DEFAULT_K = 5
DEFAULT_ITERATIONS = 10
# beta is clamped to this when a round makes no mistakes
EPSILON = 1e-10


class TrainingSet:
    """
    TrainingSet object

    An ordered list of (TermVector, topic path) examples sharing one dictionary. Examples can be
    added at any time; boosted classifiers must be retrained to see them.
    """

    def __init__(self, examples=()):
        self.examples = []
        self._matrix = None
        for vector, topic in examples:
            self.add(vector, topic)

    def add(self, vector, topic):
        if self.examples:
            check_same_dictionary(self.examples[0][0], vector)
        self.examples.append((vector, normalize_topic(topic)))
        self._matrix = None

    def __len__(self):
        return len(self.examples)

    @property
    def labels(self):
        return [topic for _, topic in self.examples]

    @property
    def matrix(self):
        """
        The example vectors stacked into a CSR matrix, one row per example
        """
        if self._matrix is None:
            self._matrix = scipy.sparse.vstack([vector.row for vector, _ in self.examples],
                                               format='csr')
        return self._matrix

    def validate(self, kb):
        """
        Checks that every label is a node of the knowledge base's topic forest
        """
        for topic in sorted(set(self.labels)):
            if not kb.has_topic(topic):
                raise NotFoundError(f'training label {topic!r} is not in the topic forest')

    def __repr__(self):
        return 'TrainingSet({} examples, labels={})'.format(len(self),
                                                            r.repr(sorted(set(self.labels))))


def _check_training_set(ts, k):
    if len(ts) == 0:
        raise StateError('the training set is empty')
    if k < 1:
        raise ArgumentError('k must be at least 1')


def nearest_neighbours(q, ts, k):
    """
    Indexes of the k training examples nearest to q (distance ties broken by insertion order)
    """
    check_same_dictionary(ts.examples[0][0], q)
    distances = distances_to(ts.matrix, q)
    return np.argsort(distances, kind='stable')[:k]


def _vote(labels, masses):
    """
    Plurality vote; returns (winning label, winning mass / total mass), ties go to the
    lexicographically smallest label
    """
    votes = collections.defaultdict(float)
    for label, mass in zip(labels, masses):
        votes[label] += mass
    winner = min(votes, key=lambda label: (-votes[label], label))
    total = sum(votes.values())
    return winner, (votes[winner] / total if total > 0 else 0.0)


def ibk_classify(q, ts, k=DEFAULT_K, weights=None):
    """
    Classifies a term vector with the IBk k-nearest-neighbour classifier

    ### Parameters

    - q (*TermVector*): vector to classify
    - ts (*TrainingSet*): training set
    - k (*int*): number of neighbours (all examples are used when k exceeds the training set)
    - weights (*numpy.ndarray*, optional): example weights; each neighbour's vote is weighted by
      its example weight (the distribution-aware weak learner used by boosting)

    ### Returns

    - *tuple*: (topic path, confidence), confidence being the winning share of the neighbours'
      votes

    ### Raises

    - StateError: if the training set is empty
    - ArgumentError: if k < 1 or q uses a different dictionary
    """
    _check_training_set(ts, k)
    neighbours = nearest_neighbours(q, ts, k)
    labels = ts.labels
    masses = np.ones(len(neighbours)) if weights is None else np.asarray(weights)[neighbours]
    return _vote([labels[i] for i in neighbours], masses)


def ibk_training_error(ts, k=DEFAULT_K):
    """
    Fraction of training examples the raw IBk classifier mislabels
    """
    _check_training_set(ts, k)
    wrong = sum(ibk_classify(vector, ts, k)[0] != topic for vector, topic in ts.examples)
    return wrong / len(ts)


# --------------------------------------------------------------------------------------------------
# AdaBoostM1
#
def error_adjustment(error):
    """
    AdaBoostM1 error adjustment beta = e / (1 - e), clamped to EPSILON when e = 0

    >>> error_adjustment(0.25)  # doctest: +ELLIPSIS
    0.333333333333...
    """
    if error <= 0:
        return EPSILON
    return error / (1 - error)


def reweight(weights, misclassified):
    """
    One AdaBoostM1 distribution update

    ### Parameters

    - weights (*array-like*): current example-weight distribution (sums to 1)
    - misclassified (*array-like of bools*): which examples the weak learner got wrong

    ### Returns

    - *tuple*: (error e_t, beta_t, next distribution). Correctly classified examples are
      multiplied by beta_t, then the distribution is renormalised.

    ### Raises

    - ArgumentError: if e_t >= 0.5 (the round is unusable and no update is defined)
    """
    weights = np.asarray(weights, dtype=np.float64)
    misclassified = np.asarray(misclassified, dtype=bool)
    error = float(weights[misclassified].sum())
    if error >= 0.5:
        raise ArgumentError(f'round error {error} >= 0.5, the distribution is not updated')
    beta = error_adjustment(error)
    new_weights = np.where(misclassified, weights, weights * beta)
    return error, beta, new_weights / new_weights.sum()


@dataclasses.dataclass(eq=False)
class BoostingRound:
    # Example-weight distribution the weak learner voted with
    weights: np.ndarray
    error: float
    beta: Optional[float]
    vote_weight: float


class BoostedClassifier:
    """
    BoostedClassifier object

    Holds the training set, the neighbour count k, the iteration budget and one BoostingRound per
    kept iteration. Each round's weak learner is the IBk classifier voting with that round's
    example weights.
    """

    def __init__(self, training_set, k=DEFAULT_K, max_iterations=DEFAULT_ITERATIONS, rounds=()):
        self.training_set = training_set
        self.k = k
        self.max_iterations = max_iterations
        self.rounds = list(rounds)

    @property
    def iterations(self):
        return [(rnd.weights, rnd.vote_weight) for rnd in self.rounds]

    def __repr__(self):
        return 'BoostedClassifier(k={}, rounds={}/{}, vote_weights={})'.format(
            self.k, len(self.rounds), self.max_iterations,
            r.repr([round(rnd.vote_weight, 4) for rnd in self.rounds]))


def adaboost_train(ts, k=DEFAULT_K, T=DEFAULT_ITERATIONS):
    """
    Boosts the IBk classifier with AdaBoostM1

    The example-weight distribution starts uniform over the training examples. Each round the
    weak learner classifies every training example with neighbour votes weighted by the current
    distribution; e_t is the weight of the misclassified examples and beta_t = e_t / (1 - e_t).
    Training stops early when a round makes no mistakes (beta_t clamped to EPSILON) or when
    e_t >= 0.5 (that round is discarded, unless it is the first one, which is kept with a vote
    weight of 1).

    ### Parameters

    - ts (*TrainingSet*): training set
    - k (*int*): neighbour count of the weak learner
    - T (*int*): maximum number of rounds

    ### Returns

    - *BoostedClassifier*

    ### Raises

    - ArgumentError: if T < 1 or k < 1
    - StateError: if the training set is empty
    """
    if T < 1:
        raise ArgumentError('the number of boosting iterations must be at least 1')
    _check_training_set(ts, k)
    n = len(ts)
    labels = ts.labels
    # The neighbourhoods never change, only the weights do
    neighbourhoods = [nearest_neighbours(vector, ts, k) for vector, _ in ts.examples]
    weights = np.full(n, 1.0 / n)
    rounds = []
    for t in range(1, T + 1):
        predictions = [_vote([labels[i] for i in neighbours], weights[neighbours])[0]
                       for neighbours in neighbourhoods]
        misclassified = np.array([p != label for p, label in zip(predictions, labels)])
        error = float(weights[misclassified].sum())
        if error >= 0.5:
            if not rounds:
                logger.info('Round 1 error %.4f >= 0.5, keeping the weak learner alone', error)
                rounds.append(BoostingRound(weights, error, None, 1.0))
            else:
                logger.info('Round %d error %.4f >= 0.5, discarding it and stopping', t, error)
            break
        error, beta, next_weights = reweight(weights, misclassified)
        rounds.append(BoostingRound(weights, error, beta, math.log(1 / beta)))
        logger.debug('Round %d: error=%.6f beta=%.6g vote=%.4f', t, error, beta,
                     math.log(1 / beta))
        if error == 0:
            logger.info('Round %d made no mistakes, stopping', t)
            break
        weights = next_weights
    return BoostedClassifier(ts, k, T, rounds)


def boosted_classify(q, c):
    """
    Classifies a term vector with a boosted classifier

    Every round's weak learner votes for one class with mass log(1 / beta_t); the class with the
    largest total mass wins (ties lexicographic).

    ### Returns

    - *tuple*: (topic path, confidence), confidence being the winning share of the vote mass

    ### Raises

    - StateError: if the classifier has no rounds
    """
    if not c.rounds:
        raise StateError('the classifier has not been trained')
    ts = c.training_set
    neighbours = nearest_neighbours(q, ts, c.k)
    labels = [ts.labels[i] for i in neighbours]
    winners = [_vote(labels, rnd.weights[neighbours])[0] for rnd in c.rounds]
    return _vote(winners, [rnd.vote_weight for rnd in c.rounds])


def training_error(c):
    """
    Fraction of training examples a boosted classifier mislabels
    """
    examples = c.training_set.examples
    wrong = sum(boosted_classify(vector, c)[0] != topic for vector, topic in examples)
    return wrong / len(examples)


# --------------------------------------------------------------------------------------------------
# Paper database
#
@dataclasses.dataclass(frozen=True)
class ClassifiedPaper:
    url: str
    topic: str
    classification_confidence: float

    def __post_init__(self):
        if not 0 <= self.classification_confidence <= 1:
            raise ArgumentError(f'classification confidence {self.classification_confidence} '
                                f'of {self.url!r} is outside [0, 1]')

    def to_record(self):
        return {'url': self.url, 'topic': self.topic,
                'confidence': self.classification_confidence}


class PaperDatabase:
    """
    PaperDatabase object

    The central database of classified papers. It owns the stop-list, the term dictionary and
    the boosted classifier used to label every paper added to it.
    """

    def __init__(self, stoplist=frozenset(), dictionary=None, classifier=None):
        self.stoplist = frozenset(stoplist)
        self.dictionary = dictionary
        self.classifier = classifier
        self.papers = {}

    @classmethod
    def train(cls, documents, labels, stoplist=frozenset(), k=DEFAULT_K,
              iterations=DEFAULT_ITERATIONS, capacity=DEFAULT_CAPACITY, kb=None):
        """
        Trains a classifier on labelled documents and classifies every document

        ### Parameters

        - documents (*dict*): url -> paper text
        - labels (*dict*): url -> topic path for the training documents
        - stoplist (*set of strings*): stop words
        - k, iterations, capacity (*int*): classifier parameters
        - kb (*KnowledgeBase*, optional): when given, training labels must be in its topic forest

        ### Returns

        - *PaperDatabase*: labelled documents are stored with their label (confidence 1.0), the
          others with the classifier's decision
        """
        tokens = {url: tokenize_and_stem(text, stoplist) for url, text in documents.items()}
        training_urls = []
        for url in sorted(labels):
            if url in tokens:
                training_urls.append(url)
            else:
                logger.warning('Training label for %s has no document, skipping it', url)
        dictionary = build_dictionary([tokens[url] for url in training_urls], capacity)
        ts = TrainingSet((vectorize(tokens[url], dictionary), labels[url])
                         for url in training_urls)
        if kb is not None:
            ts.validate(kb)
        db = cls(stoplist, dictionary, adaboost_train(ts, k, iterations))
        for url in sorted(documents):
            if url in labels:
                db.correct(url, labels[url])
            else:
                db._store(url, *db._classify_tokens(tokens[url]))
        logger.info('Trained on %d examples, %d papers in the database', len(ts), len(db))
        return db

    @property
    def trained(self):
        return self.classifier is not None and bool(self.classifier.rounds)

    def __len__(self):
        return len(self.papers)

    def __iter__(self):
        return iter(self.papers[url] for url in sorted(self.papers))

    def _classify_tokens(self, tokens):
        if not self.trained:
            raise StateError('the paper database has no trained classifier')
        return boosted_classify(vectorize(tokens, self.dictionary), self.classifier)

    def _store(self, url, topic, confidence):
        paper = ClassifiedPaper(url, topic, min(1.0, max(0.0, float(confidence))))
        self.papers[url] = paper
        return paper

    def classify_text(self, text):
        """
        Classifies paper text without storing it

        ### Returns

        - *tuple*: (topic path, confidence)
        """
        return self._classify_tokens(tokenize_and_stem(text, self.stoplist))

    def add_paper(self, url, text):
        """
        Classifies a paper and stores it in the database
        """
        return self._store(url, *self.classify_text(text))

    def correct(self, url, topic):
        """
        Records a user-supplied classification for a paper
        """
        return self._store(url, normalize_topic(topic), 1.0)

    def paper(self, url):
        return self.papers.get(url)

    def topic_of(self, url):
        paper = self.papers.get(url)
        return paper.topic if paper is not None else None

    def save(self, path):
        with open(path, 'wb') as f:
            pickle.dump(self, f, protocol=pickle.HIGHEST_PROTOCOL)

    @classmethod
    def load(cls, path):
        with open(path, 'rb') as f:
            try:
                db = pickle.load(f)
            except (pickle.UnpicklingError, EOFError, AttributeError, ImportError):
                raise ArgumentError(f'{path} does not hold a paper database') from None
        if not isinstance(db, cls):
            raise ArgumentError(f'{path} does not hold a paper database')
        return db

    def __repr__(self):
        return 'PaperDatabase({} papers, dictionary={!r}, classifier={!r})'.format(
            len(self), self.dictionary, self.classifier)


def read_manifest(path):
    """
    Reads a corpus manifest of `{file, url}` records (files relative to the manifest)

    ### Returns

    - *dict*: url -> paper text
    """
    base = pathlib.Path(path).parent
    documents = {}
    for record in read_records(path):
        try:
            file, url = record['file'], record['url']
        except KeyError as e:
            raise ArgumentError(f'manifest record {record!r} is missing {e.args[0]!r}') from None
        documents[url] = (base / file).read_text(encoding='utf-8', errors='replace')
    return documents


def read_training(path):
    """
    Reads training records `{url, topic_path}`

    ### Returns

    - *dict*: url -> topic path
    """
    labels = {}
    for record in read_records(path):
        try:
            labels[record['url']] = normalize_topic(record['topic_path'])
        except KeyError as e:
            raise ArgumentError(f'training record {record!r} is missing {e.args[0]!r}') from None
    return labels
