"""
Turns paper text into term frequency vectors: tokenising, stop-listing, Porter stemming, the
global term dictionary and the kNN distance between vectors.
"""

# Built-ins
import collections
import importlib.resources
import logging
import math
import re

# Third-party
import numpy as np
import scipy.sparse
from nltk.stem import PorterStemmer

# This package
from .exceptions import ArgumentError


logger = logging.getLogger(__name__)

DEFAULT_CAPACITY = 15000

RE_WORD = re.compile(r'[a-z]+')

stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)


def load_stoplist(path=None):
    """
    Loads a stop-list (one word per line, blank lines and `#` comments ignored)

    ### Parameters

    - path (*string*, optional): stop-list file, defaults to the stop-list shipped with the package

    ### Returns

    - *frozenset of strings*: lowercase stop words
    """
    if path is None:
        text = importlib.resources.files('cpc.ontorec').joinpath('data/stoplist.txt').read_text(
            encoding='utf-8')
    else:
        with open(path, encoding='utf-8') as f:
            text = f.read()
    words = (line.split('#', 1)[0].strip().lower() for line in text.splitlines())
    return frozenset(word for word in words if word)


def tokenize_and_stem(text, stoplist=frozenset()):
    """
    Splits text into lowercase alphabetic tokens, drops stop words and Porter-stems the rest

    ### Parameters

    - text (*string*): text to tokenise
    - stoplist (*set of strings*): stop words (compared before stemming)

    ### Returns

    - *list of strings*: stemmed terms, in text order

    >>> tokenize_and_stem('the agents', {'the'})
    ['agent']
    """
    return [stemmer.stem(token) for token in RE_WORD.findall(text.lower())
            if token not in stoplist]


class TermDictionary:
    """
    TermDictionary object

    Maps each kept term to a dense index; indexes follow lexicographic term order.
    """

    def __init__(self, terms, capacity=DEFAULT_CAPACITY):
        terms = tuple(sorted(set(terms)))
        if capacity < 1:
            raise ArgumentError('dictionary capacity must be at least 1')
        if len(terms) > capacity:
            raise ArgumentError(f'{len(terms)} terms exceed the dictionary capacity {capacity}')
        self.terms = terms
        self.capacity = capacity
        self.index = {term: i for i, term in enumerate(terms)}

    def __len__(self):
        return len(self.terms)

    def __contains__(self, term):
        return term in self.index

    def __eq__(self, other):
        if not isinstance(other, TermDictionary):
            return NotImplemented
        return self is other or (self.capacity == other.capacity and self.terms == other.terms)

    def __hash__(self):
        return hash((self.capacity, self.terms))

    def __repr__(self):
        return f'TermDictionary({len(self.terms)} terms, capacity={self.capacity})'


class TermVector:
    """
    TermVector object

    A sparse term frequency vector over a TermDictionary, stored as a 1-row
    `scipy.sparse.csr_matrix` with one column per dictionary term.
    """

    def __init__(self, weights, dictionary):
        # ------------------------------------------------------------------------------------------
        # Validate the weights
        #
        size = len(dictionary)
        for index, weight in weights.items():
            if not 0 <= index < size:
                raise ArgumentError(f'term index {index} outside dictionary bounds [0, {size})')
            if weight < 0:
                raise ArgumentError(f'term weight {weight} for index {index} is negative')
        indexes = sorted(index for index, weight in weights.items() if weight != 0)
        values = np.array([weights[index] for index in indexes], dtype=np.float64)
        self.row = scipy.sparse.csr_matrix(
            (values, (np.zeros(len(indexes), dtype=np.int64), np.array(indexes, dtype=np.int64))),
            shape=(1, size))
        self.dictionary = dictionary

    @classmethod
    def from_terms(cls, term_weights, dictionary):
        """
        Builds a vector from a term -> weight map (terms outside the dictionary are ignored)
        """
        return cls({dictionary.index[term]: weight for term, weight in term_weights.items()
                    if term in dictionary}, dictionary)

    @property
    def weights(self):
        return {int(index): float(value) for index, value in zip(self.row.indices, self.row.data)}

    def term_weights(self):
        return {self.dictionary.terms[index]: value for index, value in self.weights.items()}

    def __eq__(self, other):
        if not isinstance(other, TermVector):
            return NotImplemented
        return self.dictionary == other.dictionary and self.weights == other.weights

    def __repr__(self):
        return f'TermVector({self.term_weights()!r})'


def build_dictionary(corpus, capacity=DEFAULT_CAPACITY):
    """
    Builds the global term dictionary from a corpus of token lists

    Keeps the `capacity` terms with the highest document frequency (ties broken
    lexicographically).

    ### Parameters

    - corpus (*list of lists of strings*): tokenised documents
    - capacity (*int*): maximum number of terms

    ### Returns

    - *TermDictionary*

    ### Raises

    - ArgumentError: if capacity < 1
    """
    if capacity < 1:
        raise ArgumentError('dictionary capacity must be at least 1')
    document_frequency = collections.Counter()
    for tokens in corpus:
        document_frequency.update(set(tokens))
    ranked = sorted(document_frequency, key=lambda term: (-document_frequency[term], term))
    dictionary = TermDictionary(ranked[:capacity], capacity)
    logger.debug('Built a dictionary of %d terms from %d documents (%d distinct terms)',
                 len(dictionary), len(corpus), len(document_frequency))
    return dictionary


def vectorize(tokens, dictionary):
    """
    Counts the in-dictionary terms of a token list

    ### Returns

    - *TermVector*: weight of each term = number of occurrences
    """
    counts = collections.Counter(token for token in tokens if token in dictionary)
    return TermVector.from_terms(counts, dictionary)


def check_same_dictionary(a, b):
    if a.dictionary is not b.dictionary and a.dictionary != b.dictionary:
        raise ArgumentError('term vectors are built over different dictionaries')


def knn_distance(a, b):
    """
    Euclidean distance between two term vectors, over all dictionary terms

    ### Raises

    - ArgumentError: if the vectors use different dictionaries
    """
    check_same_dictionary(a, b)
    diff = a.row - b.row
    return math.sqrt(diff.multiply(diff).sum())


def distances_to(matrix, q):
    """
    Distances from a query vector to every row of a CSR matrix of term vectors

    ### Parameters

    - matrix (*scipy.sparse.csr_matrix*): one term vector per row
    - q (*TermVector*): query

    ### Returns

    - *numpy.ndarray*: one distance per row
    """
    n = matrix.shape[0]
    diff = matrix - scipy.sparse.csr_matrix(np.ones((n, 1))) @ q.row
    return np.sqrt(np.asarray(diff.multiply(diff).sum(axis=1)).ravel())
