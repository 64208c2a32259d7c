# Built-ins
import datetime

# Third-party
import pytest

# This package
from cpc.ontorec.classify import PaperDatabase
from cpc.ontorec.kb import load_kb
from cpc.ontorec.records import write_records


RS = 'AI\\Agents\\Recommender Systems'
MOBILE = 'AI\\Agents\\Mobile Agents'
DISTRIBUTED = 'AI\\Distributed Systems'
LEARNING = 'AI\\Machine Learning'
KT = 'Knowledge Technology'
ONTOLOGY = 'Knowledge Technology\\Ontology'
KM = 'Knowledge Technology\\Knowledge Management'
COP = 'Knowledge Technology\\Knowledge Management\\CoP'
KA = 'Knowledge Technology\\Knowledge Acquisition'
DEVICES = 'Knowledge Technology\\Knowledge Devices'

# Leaves only; the ancestors are created from the path prefixes
TOPIC_RECORDS = [{'path': path} for path in
                 (RS, MOBILE, DISTRIBUTED, LEARNING, ONTOLOGY, COP, KA, DEVICES)]

SHADBOLT_PUBLICATIONS = [
    ('pub-prefs', 'Capturing Knowledge of User Preferences: ontologies on recommender systems',
     2001, RS),
    ('pub-kt', 'Knowledge Technologies', 2001, KT),
    ('pub-onto-ka', 'The Use of Ontologies for Knowledge Acquisition', 2001, ONTOLOGY),
    ('pub-kbs', 'Certifying KBSs: Using CommonKADS to Provide Supporting Evidence for Fitness '
                'for Purpose of KBSs', 2000, KM),
    ('pub-semweb', 'Extracting Focused Knowledge from the Semantic Web', 2000, KA),
    ('pub-kem', 'Knowledge Engineering and Management', 2000, KM),
]

# Interests found for the people close to Middleton
SIMILAR_INTERESTS = {
    'deroure': {DISTRIBUTED: 1.2, RS: 0.73},
    'revill': {MOBILE: 1.0, RS: 0.4},
    'beales': {DEVICES: 0.9, MOBILE: 0.87},
    'alani': {ONTOLOGY: 1.8, COP: 0.7},
    'shadbolt': {KM: 1.5, RS: 1.0},
}

MIDDLETON_COP = (('deroure', 1.0), ('beales', 0.82), ('revill', 0.82), ('alani', 0.47),
                 ('shadbolt', 0.46))


def person(person_id, name=None):
    return {'id': person_id, 'kind': 'person', 'attributes': {'name': name or person_id}}


def publication(pub_id, title, year, topic, authors):
    records = [{'id': pub_id, 'kind': 'publication',
                'attributes': {'title': title, 'year': year, 'topic': topic}}]
    records += [{'source': author, 'rel': 'authored', 'target': pub_id} for author in authors]
    return records


def shadbolt_records():
    records = list(TOPIC_RECORDS) + [person('shadbolt', 'Nigel Shadbolt')]
    for pub_id, title, year, topic in SHADBOLT_PUBLICATIONS:
        records += publication(pub_id, title, year, topic, ['shadbolt'])
    return records


def middleton_records():
    records = shadbolt_records()
    records += [person(p) for p in ('middleton', 'deroure', 'revill', 'beales', 'alani')]
    records += publication('pub-joint', 'Ontology-based recommender systems', 2001, RS,
                           ['middleton', 'deroure', 'shadbolt'])
    records += [{'source': 'deroure', 'rel': 'supervises', 'target': student}
                for student in ('middleton', 'revill', 'beales')]
    records += [{'id': 'conf-2001', 'kind': 'event', 'attributes': {'name': 'K-CAP 2001'}},
                {'source': 'middleton', 'rel': 'attended', 'target': 'conf-2001'},
                {'source': 'alani', 'rel': 'attended', 'target': 'conf-2001'}]
    for member, interests in sorted(SIMILAR_INTERESTS.items()):
        records += [{'source': member, 'rel': 'has_research_interest', 'target': topic,
                     'value': value, 'date': '2002-01-01'}
                    for topic, value in sorted(interests.items())]
    return records


@pytest.fixture
def shadbolt_kb():
    return load_kb(shadbolt_records())


@pytest.fixture
def middleton_kb():
    return load_kb(middleton_records())


# --------------------------------------------------------------------------------------------------
# Synthetic corpus
#
CLASS_WORDS = {
    RS: ['recommender', 'profile', 'collaborative', 'filtering', 'rating'],
    MOBILE: ['mobile', 'agent', 'migration', 'platform', 'itinerary'],
    ONTOLOGY: ['ontology', 'concept', 'axiom', 'taxonomy', 'reasoning'],
}


def synthetic_document(words, stressed):
    """
    Every class word once, one of them three times, with a few stop words around
    """
    return 'The {} of the {} and {}'.format(' '.join(words), words[stressed], words[stressed])


def synthetic_corpus():
    """
    Three well separated classes of four training papers each plus one unlabelled paper per class

    ### Returns

    - *tuple*: (documents by url, training labels by url)
    """
    documents, labels = {}, {}
    for topic, words in sorted(CLASS_WORDS.items()):
        slug = words[0]
        for i in range(4):
            url = f'http://papers.example.org/{slug}-{i}'
            documents[url] = synthetic_document(words, i)
            labels[url] = topic
        documents[f'http://papers.example.org/{slug}-new'] = ' '.join(words)
    return documents, labels


@pytest.fixture(scope='session')
def corpus():
    documents, labels = synthetic_corpus()
    return PaperDatabase.train(documents, labels, stoplist={'the', 'of', 'and'})


# --------------------------------------------------------------------------------------------------
# Replay fixture: 5 users, 12 topics, 7 weekly logs
#
REPLAY_START = datetime.date(2002, 3, 4)
REPLAY_USERS = ['alice', 'bob', 'carol', 'dave', 'erin']

# (user, week, day in week, event type, topic)
REPLAY_EVENTS = [
    ('alice', 1, 0, 'paper_browsed', RS),
    ('alice', 2, 3, 'paper_browsed', DISTRIBUTED),
    ('alice', 3, 1, 'recommendation_followed', RS),
    ('alice', 5, 4, 'paper_browsed', RS),
    ('alice', 7, 2, 'topic_rated_interesting', RS),
    ('bob', 1, 2, 'paper_browsed', MOBILE),
    ('bob', 4, 0, 'paper_browsed', MOBILE),
    ('bob', 6, 5, 'recommendation_followed', RS),
    ('carol', 2, 1, 'paper_browsed', KA),
    ('carol', 3, 6, 'topic_rated_interesting', ONTOLOGY),
    ('carol', 7, 0, 'paper_browsed', ONTOLOGY),
    ('dave', 1, 4, 'paper_browsed', KM),
    ('dave', 5, 2, 'recommendation_followed', COP),
    ('erin', 2, 5, 'paper_browsed', DEVICES),
    ('erin', 4, 3, 'paper_browsed', ONTOLOGY),
    ('erin', 6, 1, 'topic_rated_interesting', DEVICES),
]


def replay_kb_records():
    records = list(TOPIC_RECORDS) + [person(user) for user in REPLAY_USERS]
    records += publication('pub-a1', 'Recommending papers', 2001, RS, ['alice'])
    records += publication('pub-a2', 'Learning user models', 2000, LEARNING, ['alice', 'bob'])
    records += publication('pub-b1', 'Agents on the move', 2001, MOBILE, ['bob'])
    records += publication('pub-c1', 'Upper ontologies', 2001, ONTOLOGY, ['carol'])
    records += publication('pub-d1', 'Communities of practice', 1999, COP, ['dave'])
    records += publication('pub-e1', 'Knowledge devices', 2001, DEVICES, ['erin'])
    records += publication('pub-e2', 'Grid middleware', 2000, DISTRIBUTED, ['erin', 'dave'])
    records += [
        {'source': 'alice', 'rel': 'supervises', 'target': 'bob'},
        {'source': 'alice', 'rel': 'supervises', 'target': 'carol'},
        {'source': 'dave', 'rel': 'supervises', 'target': 'erin'},
        {'id': 'conf-1', 'kind': 'event', 'attributes': {'name': 'Agents 2001'}},
        {'source': 'alice', 'rel': 'attended', 'target': 'conf-1'},
        {'source': 'dave', 'rel': 'attended', 'target': 'conf-1'},
        {'id': 'proj-1', 'kind': 'project', 'attributes': {'name': 'Advanced Knowledge'}},
        {'source': 'carol', 'rel': 'member_of_project', 'target': 'proj-1'},
        {'source': 'erin', 'rel': 'member_of_project', 'target': 'proj-1'},
    ]
    return records


def replay_event_records():
    records = []
    for i, (user, week, day, etype, topic) in enumerate(REPLAY_EVENTS):
        date = REPLAY_START + datetime.timedelta(days=7 * (week - 1) + day)
        record = {'user': user, 'etype': etype, 'topic': topic, 'date': date.isoformat()}
        if etype != 'topic_rated_interesting':
            record['url'] = f'http://papers.example.org/log-{i}'
        records.append(record)
    return records


@pytest.fixture
def replay_kb():
    return load_kb(replay_kb_records())


def write_jsonl(path, records):
    with open(path, 'w', encoding='utf-8') as f:
        write_records(records, f)
    return str(path)
