"""
Defines a KnowledgeBase object. A KnowledgeBase stores the academic entities (people,
publications, projects, events and research topics), the typed relations between them, and the
is-a hierarchy of research topics.
"""

# Built-ins
import dataclasses
import datetime
import logging
import reprlib
import threading
from typing import Optional, Tuple

# Third-party
import networkx as nx

# This package
from .exceptions import ArgumentError, KnowledgeBaseError, NotFoundError
from .records import parse_date, read_records


logger = logging.getLogger(__name__)

# Create reprlib
r = reprlib.Repr()
r.maxlist = 4  # max elements displayed for lists
r.maxstring = 50  # max characters displayed for strings

TOPIC_SEPARATOR = '\\'

ENTITY_KINDS = ('person', 'publication', 'project', 'event', 'topic')

# Relation type -> (source kind, target kind)
RELATION_TYPES = {
    'authored': ('person', 'publication'),
    'supervises': ('person', 'person'),
    'attended': ('person', 'event'),
    'member_of_project': ('person', 'project'),
    'has_research_interest': ('person', 'topic'),
}

MIN_PUBLICATION_YEAR = 1900

# Assertions copy the kb, so only one may run at a time
_write_lock = threading.Lock()


def split_topic(path):
    """
    Splits a topic path into its labels, root first

    >>> split_topic('AI\\\\Agents\\\\ Recommender Systems')
    ['AI', 'Agents', 'Recommender Systems']
    """
    return [label.strip() for label in str(path).split(TOPIC_SEPARATOR) if label.strip()]


def join_topic(labels):
    """
    Joins topic labels into a canonical topic path

    >>> join_topic(['AI', 'Agents'])
    'AI\\\\Agents'
    """
    return TOPIC_SEPARATOR.join(labels)


def normalize_topic(path):
    """
    Returns the canonical form of a topic path (labels stripped of surrounding whitespace)
    """
    labels = split_topic(path)
    if not labels:
        raise ArgumentError(f'empty topic path {path!r}')
    return join_topic(labels)


@dataclasses.dataclass(frozen=True)
class Entity:
    id: str
    kind: str
    attributes: dict = dataclasses.field(default_factory=dict)


@dataclasses.dataclass(frozen=True)
class Publication:
    id: str
    title: str
    year: Optional[int]
    authors: Tuple[str, ...]
    topic_label: Optional[str] = None
    uri: Optional[str] = None


@dataclasses.dataclass(frozen=True)
class TopicNode:
    path: str
    parent: Optional[str] = None


@dataclasses.dataclass(frozen=True)
class Relation:
    source: str
    rel_type: str
    target: str
    value: Optional[float] = None
    date: Optional[datetime.date] = None


class KnowledgeBase:
    """
    KnowledgeBase object

    Relations are held in a `networkx.MultiDiGraph` (one edge per relation, keyed by relation
    type) and the topic forest in a `networkx.DiGraph` with an edge from each topic to its parent.
    Use `load_kb()` to build one; after loading it only changes through
    `assert_interest_profile()`, which returns a new KnowledgeBase.
    """

    def __init__(self):
        # ------------------------------------------------------------------------------------------
        # Attributes
        #
        # Declared entity records, by id
        self.entities = {}
        # Topic forest (child -> parent)
        self.topics = nx.DiGraph()
        # Relation graph (every entity and topic is a node)
        self.graph = nx.MultiDiGraph()

    def __len__(self):
        return len(self.entities)

    def __contains__(self, entity_id):
        return entity_id in self.entities or entity_id in self.topics

    def copy(self):
        new = KnowledgeBase()
        new.entities = dict(self.entities)
        new.topics = self.topics.copy()
        new.graph = self.graph.copy()
        return new

    def entity(self, entity_id):
        """
        Looks up an entity by id

        Topics that were only declared through topic records are returned as entities of kind
        topic.

        ### Raises

        - NotFoundError: if the id is unknown
        """
        if entity_id in self.entities:
            return self.entities[entity_id]
        if entity_id in self.topics:
            return Entity(entity_id, 'topic', {'name': split_topic(entity_id)[-1]})
        raise NotFoundError(f'unknown entity {entity_id!r}')

    def kind_of(self, entity_id):
        return self.entity(entity_id).kind

    def has_topic(self, path):
        try:
            return normalize_topic(path) in self.topics
        except ArgumentError:
            return False

    def topic_paths(self):
        return sorted(self.topics.nodes)

    def topic_node(self, path):
        path = normalize_topic(path)
        if path not in self.topics:
            raise NotFoundError(f'unknown topic {path!r}')
        return TopicNode(path, self.parent_of(path))

    def parent_of(self, path):
        parents = list(self.topics.successors(path))
        return parents[0] if parents else None

    def depth(self):
        """
        Number of levels in the deepest branch of the topic forest
        """
        return max((len(split_topic(path)) for path in self.topics), default=0)

    def relations(self, rel_type=None):
        """
        Lists stored relations, ordered by (source, relation type, target)
        """
        relations = [
            Relation(source, key, target, data.get('value'), data.get('date'))
            for source, target, key, data in self.graph.edges(keys=True, data=True)
            if rel_type is None or key == rel_type
        ]
        return sorted(relations, key=lambda rel: (rel.source, rel.rel_type, rel.target))

    def to_records(self):
        """
        Serialises the knowledge base back into the record stream accepted by `load_kb()`

        ### Returns

        - *list of dicts*: entity records, then topic records, then relation records
        """
        records = []
        for entity_id in sorted(self.entities):
            entity = self.entities[entity_id]
            records.append({'id': entity.id, 'kind': entity.kind,
                            'attributes': dict(entity.attributes)})
        for path in self.topic_paths():
            record = {'path': path}
            parent = self.parent_of(path)
            if parent is not None:
                record['parent'] = parent
            records.append(record)
        for rel in self.relations():
            record = {'source': rel.source, 'rel': rel.rel_type, 'target': rel.target}
            if rel.value is not None:
                record['value'] = rel.value
            if rel.date is not None:
                record['date'] = rel.date.isoformat()
            records.append(record)
        return records

    def __repr__(self):
        details = ''
        details += '- entities: {}\n'.format(r.repr(sorted(self.entities)))
        details += '- topics: {}\n'.format(r.repr(self.topic_paths()))
        details += '- relations: {}\n'.format(self.graph.number_of_edges())
        return 'KnowledgeBase:\n{}'.format(details)


# --------------------------------------------------------------------------------------------------
# Loading
#
def _build_topic_forest(declarations):
    """
    Builds the topic forest from (path, parent) declarations
    """
    parents = {}
    for path, parent in declarations:
        if parent is not None and parents.get(path) not in (None, parent):
            raise KnowledgeBaseError(f'topic {path!r} declared with two parents '
                                     f'({parents[path]!r} and {parent!r})')
        if parent is not None or path not in parents:
            parents[path] = parent
    # Missing ancestors are created from the path prefixes
    for path in list(parents):
        labels = split_topic(path)
        for depth in range(1, len(labels)):
            prefix = join_topic(labels[:depth])
            if prefix not in parents:
                parents[prefix] = join_topic(labels[:depth - 1]) if depth > 1 else None
        if parents[path] is None and len(labels) > 1:
            parents[path] = join_topic(labels[:-1])
    forest = nx.DiGraph()
    forest.add_nodes_from(parents)
    for path, parent in parents.items():
        if parent is None:
            continue
        if parent not in parents:
            raise KnowledgeBaseError(f'topic {path!r} refers to undeclared parent {parent!r}')
        forest.add_edge(path, parent)
    # Parentage must be acyclic
    try:
        cycle = nx.find_cycle(forest)
    except nx.NetworkXNoCycle:
        cycle = []
    if cycle:
        names = [edge[0] for edge in cycle] + [cycle[0][0]]
        raise KnowledgeBaseError('cyclic topic parentage: {}'.format(' -> '.join(names)))
    # Path of a node = parent path + own label
    for path, parent in parents.items():
        parent_labels = split_topic(parent) if parent is not None else []
        if split_topic(path)[:-1] != parent_labels:
            raise KnowledgeBaseError(f'topic path {path!r} does not extend its parent {parent!r}')
    return forest


def _check_relation(kb, record):
    try:
        source, rel_type, target = record['source'], record['rel'], record['target']
    except KeyError as e:
        raise KnowledgeBaseError(f'relation record {record!r} is missing {e.args[0]!r}') from None
    if rel_type not in RELATION_TYPES:
        raise KnowledgeBaseError(f'unknown relation type {rel_type!r}')
    source_kind, target_kind = RELATION_TYPES[rel_type]
    if target_kind == 'topic':
        try:
            target = normalize_topic(target)
        except ArgumentError as e:
            raise KnowledgeBaseError(str(e)) from None
    for entity_id, kind in ((source, source_kind), (target, target_kind)):
        if entity_id not in kb:
            raise KnowledgeBaseError(f'dangling reference: {rel_type} relation refers to '
                                     f'undefined id {entity_id!r}')
        if kb.kind_of(entity_id) != kind:
            raise KnowledgeBaseError(f'{rel_type} relation expects {entity_id!r} to be a {kind}, '
                                     f'not a {kb.kind_of(entity_id)}')
    value = record.get('value')
    if rel_type == 'has_research_interest':
        if value is None:
            raise KnowledgeBaseError(f'has_research_interest relation {source!r} -> {target!r} '
                                     'carries no value')
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise KnowledgeBaseError(f'has_research_interest relation {source!r} -> {target!r} '
                                     f'has a non-numeric value {value!r}') from None
    elif value is not None:
        raise KnowledgeBaseError(f'{rel_type} relation {source!r} -> {target!r} must not carry '
                                 'a value')
    date = record.get('date')
    if date is not None:
        try:
            date = parse_date(date, what='relation date')
        except ArgumentError as e:
            raise KnowledgeBaseError(str(e)) from None
    return Relation(source, rel_type, target, value, date)


def _check_entity(record):
    entity_id, kind = record.get('id'), record['kind']
    if not entity_id:
        raise KnowledgeBaseError(f'entity record {record!r} has no id')
    if kind not in ENTITY_KINDS:
        raise KnowledgeBaseError(f'entity {entity_id!r} has unknown kind {kind!r}')
    attributes = {str(key): str(value)
                  for key, value in (record.get('attributes') or {}).items()
                  if value is not None}
    return Entity(str(entity_id), kind, attributes)


def load_kb(source):
    """
    Loads a KnowledgeBase from a stream of structured records

    Three kinds of record are accepted:

    - entities: `{id, kind, attributes}`
    - topics: `{path, parent}` (missing ancestors are created from the path prefixes)
    - relations: `{source, rel, target, value?, date?}`

    ### Parameters

    - source (*iterable of dicts*): the records

    ### Returns

    - *KnowledgeBase*

    ### Raises

    - KnowledgeBaseError: on dangling references, cyclic topic parentage, duplicate ids or
      malformed records
    """
    kb = KnowledgeBase()
    entity_records, topic_records, relation_records = [], [], []
    for record in source:
        if 'kind' in record:
            entity_records.append(record)
        elif 'rel' in record:
            relation_records.append(record)
        elif 'path' in record:
            topic_records.append(record)
        else:
            raise KnowledgeBaseError(f'unrecognised record {record!r}')
    # ----------------------------------------------------------------------------------------------
    # Topic forest
    #
    declarations = []
    for record in topic_records:
        try:
            path = normalize_topic(record['path'])
            parent = normalize_topic(record['parent']) if record.get('parent') else None
        except ArgumentError as e:
            raise KnowledgeBaseError(str(e)) from None
        declarations.append((path, parent))
    kb.topics = _build_topic_forest(declarations)
    for path in kb.topics:
        kb.graph.add_node(path, kind='topic')
    # ----------------------------------------------------------------------------------------------
    # Entities
    #
    for record in entity_records:
        entity = _check_entity(record)
        if entity.id in kb.entities:
            raise KnowledgeBaseError(f'duplicate entity id {entity.id!r}')
        if entity.kind == 'topic':
            if entity.id not in kb.topics:
                raise KnowledgeBaseError(f'topic entity {entity.id!r} is not in the topic forest')
        elif entity.id in kb.topics:
            raise KnowledgeBaseError(f'entity id {entity.id!r} clashes with a topic path')
        if entity.kind == 'publication':
            _check_publication(kb, entity)
        kb.entities[entity.id] = entity
        kb.graph.add_node(entity.id, kind=entity.kind)
    # ----------------------------------------------------------------------------------------------
    # Relations
    #
    for record in relation_records:
        rel = _check_relation(kb, record)
        if kb.graph.has_edge(rel.source, rel.target, key=rel.rel_type):
            logger.debug('Merging duplicate relation %s', rel)
        kb.graph.add_edge(rel.source, rel.target, key=rel.rel_type, value=rel.value,
                          date=rel.date)
    logger.info('Loaded %d entities, %d topics and %d relations', len(kb.entities),
                kb.topics.number_of_nodes(), kb.graph.number_of_edges())
    return kb


def _check_publication(kb, entity):
    year = entity.attributes.get('year')
    if year is not None:
        try:
            year = int(year)
        except ValueError:
            raise KnowledgeBaseError(f'publication {entity.id!r} has a non-integer year '
                                     f'{year!r}') from None
        if year < MIN_PUBLICATION_YEAR:
            raise KnowledgeBaseError(f'publication {entity.id!r} year {year} is before '
                                     f'{MIN_PUBLICATION_YEAR}')
    topic = entity.attributes.get('topic')
    if topic is not None and not kb.has_topic(topic):
        raise KnowledgeBaseError(f'dangling reference: publication {entity.id!r} is labelled '
                                 f'with undefined topic {topic!r}')


def load_kb_file(path):
    """
    Loads a KnowledgeBase from a JSON-lines file (see `load_kb()`)
    """
    try:
        records = read_records(path)
    except ArgumentError as e:
        raise KnowledgeBaseError(str(e)) from None
    return load_kb(records)


# --------------------------------------------------------------------------------------------------
# Queries
#
def _person(kb, person):
    if person not in kb.entities or kb.entities[person].kind != 'person':
        raise NotFoundError(f'unknown person {person!r}')
    return kb.entities[person]


def publication(kb, publication_id):
    """
    Builds the Publication view of a publication entity
    """
    entity = kb.entities.get(publication_id)
    if entity is None or entity.kind != 'publication':
        raise NotFoundError(f'unknown publication {publication_id!r}')
    year = entity.attributes.get('year')
    topic = entity.attributes.get('topic')
    authors = sorted(source for source, _, key in kb.graph.in_edges(publication_id, keys=True)
                     if key == 'authored')
    return Publication(
        id=entity.id,
        title=entity.attributes.get('title', ''),
        year=int(year) if year is not None else None,
        authors=tuple(authors),
        topic_label=normalize_topic(topic) if topic is not None else None,
        uri=entity.attributes.get('uri'),
    )


def publications_of(kb, person):
    """
    Lists the publications authored by a person

    ### Parameters

    - kb (*KnowledgeBase*): knowledge base
    - person (*string*): person id

    ### Returns

    - *list of Publication*: ordered by descending year, then id (undated publications last)

    ### Raises

    - NotFoundError: if person is not a known person
    """
    _person(kb, person)
    ids = {target for _, target, key in kb.graph.out_edges(person, keys=True) if key == 'authored'}
    publications = [publication(kb, publication_id) for publication_id in ids]
    return sorted(publications,
                  key=lambda pub: (pub.year is None, -(pub.year or 0), pub.id))


def superclass_chain(kb, topic):
    """
    Lists the ancestors of a topic, nearest first

    ### Parameters

    - kb (*KnowledgeBase*): knowledge base
    - topic (*string*): topic path

    ### Returns

    - *list of strings*: element i is i+1 levels above `topic`

    ### Raises

    - NotFoundError: if the topic is not in the forest
    """
    path = kb.topic_node(topic).path
    chain = []
    parent = kb.parent_of(path)
    while parent is not None:
        chain.append(parent)
        parent = kb.parent_of(parent)
    return chain


def relation_frequency(kb):
    """
    Counts the stored relations by type (types that never occur map to 0)
    """
    counts = {rel_type: 0 for rel_type in RELATION_TYPES}
    for _, _, key in kb.graph.edges(keys=True):
        counts[key] += 1
    return counts


def assert_interest_profile(kb, person, profile, date):
    """
    Asserts a person's interest profile into the knowledge base

    The profile replaces every research interest previously asserted for the person, so a
    re-assertion never duplicates relations.

    ### Parameters

    - kb (*KnowledgeBase*): knowledge base
    - person (*string*): person id
    - profile (*InterestProfile*): profile to assert
    - date (*datetime.date* or *string*): date of the profile

    ### Returns

    - *KnowledgeBase*: a new version of the knowledge base (the original is left untouched)

    ### Raises

    - NotFoundError: if the person or any topic of the profile is unknown (nothing is written)
    """
    _person(kb, person)
    date = parse_date(date)
    entries = {}
    for topic, value in profile.entries.items():
        if not kb.has_topic(topic):
            raise NotFoundError(f'profile for {person!r} refers to unknown topic {topic!r}')
        entries[normalize_topic(topic)] = float(value)
    with _write_lock:
        new = kb.copy()
        stale = [(source, target, key)
                 for source, target, key in new.graph.out_edges(person, keys=True)
                 if key == 'has_research_interest']
        new.graph.remove_edges_from(stale)
        for topic in sorted(entries):
            if entries[topic] != 0:
                new.graph.add_edge(person, topic, key='has_research_interest',
                                   value=entries[topic], date=date)
    logger.debug('Asserted %d interests for %s on %s', len(entries), person, date)
    return new


def interest_profile(kb, person):
    """
    Reads back the research interests asserted for a person

    ### Returns

    - *InterestProfile*: `as_of` is the latest assertion date (None when nothing was asserted)
    """
    from .profile import InterestProfile

    _person(kb, person)
    entries, dates = {}, []
    for _, topic, key, data in kb.graph.out_edges(person, keys=True, data=True):
        if key == 'has_research_interest':
            entries[topic] = data['value']
            if data.get('date') is not None:
                dates.append(data['date'])
    return InterestProfile(person, max(dates, default=None), entries)


def classified_publications(kb, person, papers=None):
    """
    Lists the (topic, year) pairs of a person's publications, as used to bootstrap profiles

    A publication's topic comes from the paper database when its `uri` has been classified there,
    otherwise from its ground-truth `topic` attribute. Publications with neither are skipped.

    ### Parameters

    - kb (*KnowledgeBase*): knowledge base
    - person (*string*): person id
    - papers (*PaperDatabase*, optional): classified paper database

    ### Returns

    - *list of (string, int or None) tuples*
    """
    result = []
    for pub in publications_of(kb, person):
        topic = None
        if papers is not None and pub.uri:
            topic = papers.topic_of(pub.uri)
        if topic is None:
            topic = pub.topic_label
        if topic is None:
            logger.warning('Skipping publication %s of %s: no topic', pub.id, person)
            continue
        result.append((topic, pub.year))
    return result
