# Built-ins
import datetime

# Third-party
from pytest import raises

# This package
from cpc.ontorec import KnowledgeBaseError, NotFoundError
from cpc.ontorec.kb import (assert_interest_profile, classified_publications, interest_profile,
                            load_kb, load_kb_file, normalize_topic, publications_of,
                            relation_frequency, split_topic, superclass_chain)
from cpc.ontorec.profile import InterestProfile

from conftest import COP, KM, KT, RS, middleton_records, shadbolt_records, write_jsonl


def test_table_1_loads_as_7_entities_and_6_authored_relations(shadbolt_kb):
    assert len(shadbolt_kb.entities) == 7
    assert relation_frequency(shadbolt_kb) == {'authored': 6, 'supervises': 0, 'attended': 0,
                                               'member_of_project': 0,
                                               'has_research_interest': 0}


def test_publications_of_lists_the_table_1_publications(shadbolt_kb):
    pubs = publications_of(shadbolt_kb, 'shadbolt')
    assert len(pubs) == 6
    assert [pub.year for pub in pubs] == [2001, 2001, 2001, 2000, 2000, 2000]
    assert all(pub.authors == ('shadbolt',) for pub in pubs)
    assert {pub.topic_label for pub in pubs if pub.year == 2000} == {
        KM, 'Knowledge Technology\\Knowledge Acquisition'}


def test_publications_of_unknown_person_raises(shadbolt_kb):
    with raises(NotFoundError):
        publications_of(shadbolt_kb, 'nobody')
    # A publication is not a person
    with raises(NotFoundError):
        publications_of(shadbolt_kb, 'pub-kt')


def test_superclass_chain():
    kb = load_kb(shadbolt_records() + [{'path': COP}])
    assert superclass_chain(kb, RS) == ['AI\\Agents', 'AI']
    assert superclass_chain(kb, COP) == [KM, KT]
    assert superclass_chain(kb, KT) == []
    assert len(superclass_chain(kb, COP)) < kb.depth()


def test_superclass_chain_unknown_topic_raises(shadbolt_kb):
    with raises(NotFoundError):
        superclass_chain(shadbolt_kb, 'AI\\Robotics')


def test_topic_paths_are_normalised():
    assert split_topic('Knowledge Management\\ CoP') == ['Knowledge Management', 'CoP']
    assert normalize_topic(' AI \\Agents') == 'AI\\Agents'
    kb = load_kb([{'path': 'Knowledge Technology\\Knowledge Management\\ CoP'}])
    assert kb.has_topic(COP)
    assert superclass_chain(kb, 'Knowledge Technology\\ Knowledge Management\\CoP') == [KM, KT]


def test_missing_ancestors_are_created():
    kb = load_kb([{'path': 'A\\B\\C'}])
    assert kb.topic_paths() == ['A', 'A\\B', 'A\\B\\C']
    assert kb.parent_of('A\\B\\C') == 'A\\B'
    assert kb.parent_of('A') is None
    assert kb.depth() == 3


def test_explicit_parents_are_accepted():
    kb = load_kb([{'path': 'A'}, {'path': 'A\\B', 'parent': 'A'}])
    assert kb.topic_node('A\\B').parent == 'A'


def test_dangling_reference_names_the_id():
    records = shadbolt_records() + [{'source': 'ghost', 'rel': 'authored', 'target': 'pub-kt'}]
    with raises(KnowledgeBaseError) as e:
        load_kb(records)
    assert 'ghost' in str(e.value)


def test_dangling_publication_topic_names_the_topic():
    records = [{'id': 'p', 'kind': 'publication', 'attributes': {'topic': 'Nowhere'}}]
    with raises(KnowledgeBaseError) as e:
        load_kb(records)
    assert 'Nowhere' in str(e.value)


def test_cyclic_parentage_names_the_cycle():
    with raises(KnowledgeBaseError) as e:
        load_kb([{'path': 'X', 'parent': 'Y'}, {'path': 'Y', 'parent': 'X'}])
    message = str(e.value)
    assert 'cyclic' in message
    assert 'X' in message and 'Y' in message


def test_two_parents_raise():
    with raises(KnowledgeBaseError):
        load_kb([{'path': 'A'}, {'path': 'B'}, {'path': 'A\\C', 'parent': 'A'},
                 {'path': 'A\\C', 'parent': 'B'}])


def test_path_must_extend_its_parent():
    with raises(KnowledgeBaseError):
        load_kb([{'path': 'A'}, {'path': 'B', 'parent': 'A'}])


def test_duplicate_ids_raise():
    with raises(KnowledgeBaseError):
        load_kb([{'id': 'p', 'kind': 'person'}, {'id': 'p', 'kind': 'project'}])


def test_malformed_records_raise():
    with raises(KnowledgeBaseError):
        load_kb([{'something': 'else'}])
    with raises(KnowledgeBaseError):
        load_kb([{'id': 'p', 'kind': 'robot'}])
    with raises(KnowledgeBaseError):
        load_kb([{'id': 'a', 'kind': 'person'}, {'id': 'b', 'kind': 'person'},
                 {'source': 'a', 'rel': 'likes', 'target': 'b'}])


def test_relation_endpoint_kinds_are_checked():
    records = [{'id': 'a', 'kind': 'person'}, {'id': 'b', 'kind': 'person'},
               {'source': 'a', 'rel': 'authored', 'target': 'b'}]
    with raises(KnowledgeBaseError):
        load_kb(records)


def test_research_interest_needs_a_value():
    records = [{'path': 'AI'}, {'id': 'a', 'kind': 'person'},
               {'source': 'a', 'rel': 'has_research_interest', 'target': 'AI'}]
    with raises(KnowledgeBaseError):
        load_kb(records)
    for value in ('high', [1.0], {'value': 1}):
        records[-1]['value'] = value
        with raises(KnowledgeBaseError) as e:
            load_kb(records)
        assert 'non-numeric' in str(e.value)
    records[-1]['value'] = '0.5'
    assert load_kb(records).relations('has_research_interest')[0].value == 0.5


def test_publication_year_must_be_1900_or_later():
    with raises(KnowledgeBaseError):
        load_kb([{'id': 'p', 'kind': 'publication', 'attributes': {'year': 1850}}])
    with raises(KnowledgeBaseError):
        load_kb([{'id': 'p', 'kind': 'publication', 'attributes': {'year': 'recent'}}])


def test_load_kb_file(tmp_path):
    kb = load_kb_file(write_jsonl(tmp_path / 'kb.jsonl', shadbolt_records()))
    assert len(kb.entities) == 7


def test_load_kb_file_with_bad_json_names_the_line(tmp_path):
    path = tmp_path / 'kb.jsonl'
    path.write_text('{"path": "AI"}\nnot json\n', encoding='utf-8')
    with raises(KnowledgeBaseError) as e:
        load_kb_file(path)
    assert ':2:' in str(e.value)


def test_load_kb_file_that_is_not_utf8(tmp_path):
    path = tmp_path / 'kb.jsonl'
    path.write_bytes(b'\xff\xfe{"path": "AI"}\n')
    with raises(KnowledgeBaseError) as e:
        load_kb_file(path)
    assert 'not UTF-8' in str(e.value)


def test_to_records_round_trip(middleton_kb):
    records = middleton_kb.to_records()
    reloaded = load_kb(records)
    assert reloaded.to_records() == records
    assert len(reloaded.entities) == len(middleton_kb.entities)
    assert reloaded.graph.number_of_edges() == middleton_kb.graph.number_of_edges()


def test_table_5_profile_asserts_7_interest_relations(middleton_kb):
    table_5 = {RS: 1.76, 'AI\\Agents\\Mobile Agents': 0.77, 'AI\\Distributed Systems': 0.6,
               'Knowledge Technology\\Ontology': 0.42,
               'Knowledge Technology\\Knowledge Devices': 0.37, KM: 0.35, COP: 0.16}
    profile = InterestProfile('middleton', datetime.date(2002, 1, 1), table_5)
    kb = assert_interest_profile(middleton_kb, 'middleton', profile, '2002-01-01')
    interests = [rel for rel in kb.relations('has_research_interest')
                 if rel.source == 'middleton']
    assert len(interests) == 7
    assert {rel.target: rel.value for rel in interests} == table_5
    assert all(rel.date == datetime.date(2002, 1, 1) for rel in interests)


def test_assert_interest_profile_leaves_the_original_untouched(middleton_kb):
    before = middleton_kb.to_records()
    profile = InterestProfile('middleton', datetime.date(2002, 1, 1), {RS: 1.0})
    kb = assert_interest_profile(middleton_kb, 'middleton', profile, datetime.date(2002, 1, 1))
    assert middleton_kb.to_records() == before
    assert kb is not middleton_kb
    assert interest_profile(kb, 'middleton').entries == {RS: 1.0}
    assert interest_profile(middleton_kb, 'middleton').entries == {}


def test_assert_interest_profile_is_idempotent(middleton_kb):
    profile = InterestProfile('middleton', datetime.date(2002, 1, 1), {RS: 1.0, KM: 0.5})
    once = assert_interest_profile(middleton_kb, 'middleton', profile, '2002-01-01')
    twice = assert_interest_profile(once, 'middleton', profile, '2002-01-01')
    assert twice.to_records() == once.to_records()


def test_assert_interest_profile_replaces_older_interests(middleton_kb):
    kb = assert_interest_profile(
        middleton_kb, 'deroure', InterestProfile('deroure', None, {KM: 2.0}), '2002-02-01')
    profile = interest_profile(kb, 'deroure')
    assert profile.entries == {KM: 2.0}
    assert profile.as_of == datetime.date(2002, 2, 1)


def test_assert_interest_profile_with_unknown_topic_writes_nothing(middleton_kb):
    profile = InterestProfile('middleton', None, {RS: 1.0, 'AI\\Robotics': 2.0})
    with raises(NotFoundError):
        assert_interest_profile(middleton_kb, 'middleton', profile, '2002-01-01')
    assert interest_profile(middleton_kb, 'middleton').entries == {}


def test_assert_interest_profile_unknown_person_raises(middleton_kb):
    with raises(NotFoundError):
        assert_interest_profile(middleton_kb, 'nobody', InterestProfile('nobody', None, {}),
                                '2002-01-01')


def test_interest_profile_reads_asserted_interests(middleton_kb):
    profile = interest_profile(middleton_kb, 'alani')
    assert profile.entries == {'Knowledge Technology\\Ontology': 1.8, COP: 0.7}
    assert profile.as_of == datetime.date(2002, 1, 1)


def test_classified_publications_uses_the_topic_labels(shadbolt_kb):
    pubs = classified_publications(shadbolt_kb, 'shadbolt')
    assert sorted(pubs) == sorted([
        (RS, 2001), (KT, 2001), ('Knowledge Technology\\Ontology', 2001), (KM, 2000),
        ('Knowledge Technology\\Knowledge Acquisition', 2000), (KM, 2000)])


def test_classified_publications_prefers_the_paper_database():
    records = [{'path': RS}, {'path': KM}, {'id': 'p', 'kind': 'person'},
               {'id': 'pub', 'kind': 'publication',
                'attributes': {'year': 2001, 'topic': RS, 'uri': 'http://x/pub'}},
               {'source': 'p', 'rel': 'authored', 'target': 'pub'}]
    kb = load_kb(records)

    class Papers:
        def topic_of(self, url):
            return KM if url == 'http://x/pub' else None

    assert classified_publications(kb, 'p', Papers()) == [(KM, 2001)]
    assert classified_publications(kb, 'p') == [(RS, 2001)]


def test_entity_lookup(middleton_kb):
    assert middleton_kb.entity('deroure').kind == 'person'
    assert middleton_kb.entity(KM).kind == 'topic'
    assert 'deroure' in middleton_kb
    with raises(NotFoundError):
        middleton_kb.entity('nobody')


def test_middleton_records_load():
    kb = load_kb(middleton_records())
    assert len(kb.relations('supervises')) == 3
    assert 'relations' in repr(kb)
