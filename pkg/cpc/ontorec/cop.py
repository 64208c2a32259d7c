"""
Identifies a person's community of practice by breadth-first spreading activation over the
typed relations of the knowledge base.
"""

# Built-ins
import collections
import dataclasses
import logging
from typing import Tuple

# This package
from .exceptions import ArgumentError, NotFoundError, StateError
from .kb import RELATION_TYPES, relation_frequency


logger = logging.getLogger(__name__)

DEFAULT_MAX_DEPTH = 3

DEFAULT_WEIGHTS = {
    'attended': 0.4,
    'supervises': 0.7,
    'authored': 0.3,
    'has_research_interest': 0.8,
    'member_of_project': 0.5,
}


@dataclasses.dataclass(frozen=True)
class CopResult:
    """
    Ranked (person, relevance) pairs, most relevant first
    """
    members: Tuple[Tuple[str, float], ...] = ()

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def relevance(self):
        return dict(self.members)

    def to_records(self):
        return [{'person': person, 'relevance': relevance} for person, relevance in self.members]


def check_weights(weights):
    """
    Validates relation weights

    ### Returns

    - *dict*: relation type -> weight (types with weight 0 are dropped)

    ### Raises

    - ArgumentError: on unknown relation types or weights outside [0, 1]
    """
    checked = {}
    for rel_type, weight in weights.items():
        if rel_type not in RELATION_TYPES:
            raise ArgumentError(f'unknown relation type {rel_type!r}')
        weight = float(weight)
        if not 0 <= weight <= 1:
            raise ArgumentError(f'weight {weight} of {rel_type} is outside [0, 1]')
        if weight > 0:
            checked[rel_type] = weight
    return checked


def _incident(graph, node):
    """
    (neighbour, relation type) pairs of a node, relations taken as undirected
    """
    pairs = [(target, key) for _, target, key in graph.out_edges(node, keys=True)]
    pairs += [(source, key) for source, _, key in graph.in_edges(node, keys=True)]
    return sorted(pair for pair in pairs if pair[0] != node)


def spread_activation(kb, seed, weights, max_depth=DEFAULT_MAX_DEPTH):
    """
    Breadth-first spreading activation from a seed entity

    The seed starts with activation 1. Layer by layer, every frontier node passes its activation
    (as it stood when the layer started) times the relation weight across each incident relation
    with a nonzero weight; arriving activation is summed. A node is expanded only in the layer
    after it is first reached, and nodes first reached at `max_depth` hops are not expanded.

    ### Parameters

    - kb (*KnowledgeBase*): knowledge base
    - seed (*string*): entity id to start from
    - weights (*dict*): relation type -> weight in [0, 1]; absent types are not traversed
    - max_depth (*int*): number of hops

    ### Returns

    - *tuple*: (activation by node id, set of expanded node ids)
    """
    if seed not in kb.entities:
        raise NotFoundError(f'unknown seed {seed!r}')
    if max_depth < 1:
        raise ArgumentError('max_depth must be at least 1')
    weights = check_weights(weights)
    activation = collections.defaultdict(float)
    activation[seed] = 1.0
    reached = {seed}
    expanded = set()
    frontier = [seed]
    for _ in range(max_depth):
        start = {node: activation[node] for node in frontier}
        next_frontier = []
        for node in frontier:
            expanded.add(node)
            for neighbour, rel_type in _incident(kb.graph, node):
                weight = weights.get(rel_type)
                if weight is None:
                    continue
                activation[neighbour] += start[node] * weight
                if neighbour not in reached:
                    reached.add(neighbour)
                    next_frontier.append(neighbour)
        if not next_frontier:
            break
        frontier = sorted(next_frontier)
    return dict(activation), expanded


def identify_cop(kb, seed, w=None, max_depth=DEFAULT_MAX_DEPTH):
    """
    Ranks the people closest to a seed person

    Publications, projects, events and topics relay activation but are left out of the result.
    Relevance is activation divided by the largest person activation, so the closest person
    scores 1.0. Ties are ordered by person id.

    ### Parameters

    - kb (*KnowledgeBase*): knowledge base
    - seed (*string*): person id
    - w (*dict*, optional): relation weights, defaults to DEFAULT_WEIGHTS
    - max_depth (*int*): number of hops

    ### Returns

    - *CopResult*: the seed itself is excluded

    ### Raises

    - NotFoundError: if the seed is unknown or is not a person
    """
    if seed in kb.entities and kb.kind_of(seed) != 'person':
        raise NotFoundError(f'seed {seed!r} is a {kb.kind_of(seed)}, not a person')
    activation, expanded = spread_activation(kb, seed, DEFAULT_WEIGHTS if w is None else w,
                                             max_depth)
    people = {node: value for node, value in activation.items()
              if node != seed and node in kb.entities and kb.entities[node].kind == 'person'
              and value > 0}
    if not people:
        return CopResult()
    top = max(people.values())
    ranked = sorted(((person, value / top) for person, value in people.items()),
                    key=lambda pair: (-pair[1], pair[0]))
    logger.debug('Community of %s: %d people from %d expanded nodes', seed, len(ranked),
                 len(expanded))
    return CopResult(tuple(ranked))


def auto_select_weights(kb):
    """
    Weights each relation type by how often it is used, relative to the most frequent type

    ### Returns

    - *dict*: relation type -> weight in (0, 1], for types present in the knowledge base

    ### Raises

    - StateError: if the knowledge base holds no relations
    """
    counts = relation_frequency(kb)
    most = max(counts.values())
    if most == 0:
        raise StateError('the knowledge base holds no relations')
    return {rel_type: count / most for rel_type, count in sorted(counts.items()) if count > 0}
