"""
The `ontorec` command: one entry point for loading the knowledge base, training and applying the
paper classifier, profiling, recommending, finding communities of practice, bootstrapping
profiles and replaying the weekly logs.

Records are written to standard output as JSON lines (the replay metrics as CSV), diagnostics to
standard error.
"""

# Built-ins
import argparse
import logging
import os
import sys

# This package
from .bootstrap import export_profiles, new_system_profile, new_user_profile
from .classify import PaperDatabase, read_manifest, read_training
from .config import load_config
from .cop import auto_select_weights, identify_cop
from .exceptions import (ArgumentError, ConfigError, KnowledgeBaseError, NotFoundError,
                         StateError, UsageError)
from .harness import (WeeklySplit, new_user_evaluation, replay_experiment, replay_profiles,
                      write_metrics)
from .kb import classified_publications, interest_profile, load_kb_file
from .profile import browsed_urls, compute_profile, events_by_user, read_events
from .recommend import recommend_all, to_records as recommendation_records
from .records import parse_date, write_records
from .text import load_stoplist


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_STATE = 3


class ArgumentParser(argparse.ArgumentParser):
    """
    An ArgumentParser that raises UsageError instead of exiting
    """

    def error(self, message):
        raise UsageError(message)


def _date(value):
    try:
        return parse_date(value)
    except ArgumentError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser():
    common = ArgumentParser(add_help=False)
    common.add_argument('--config', metavar='FILE', help='YAML config file')
    common.add_argument('--set', metavar='SECTION.KEY=VALUE', action='append', default=[],
                        help='override one config value (repeatable)')
    common.add_argument('-v', '--verbose', action='store_true', help='log debug messages')
    common.add_argument('-q', '--quiet', action='store_true', help='log errors only')

    users = ArgumentParser(add_help=False)
    users.add_argument('--user', action='append', default=[],
                       help='user to process (repeatable, defaults to every user)')

    bootstrap = ArgumentParser(add_help=False)
    bootstrap.add_argument('--reference-date', type=_date,
                           help='date publication ages are measured from')

    parser = ArgumentParser(prog='ontorec',
                            description='Ontology-backed research paper recommender')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    commands.add_parser('kb-load', parents=[common],
                        help='load and check the knowledge base, write its records')

    commands.add_parser('train', parents=[common],
                        help='train the paper classifier and classify the corpus')

    sub = commands.add_parser('classify', parents=[common],
                              help='classify paper text files with the trained model')
    sub.add_argument('files', nargs='*', help='text files (all stored papers when omitted)')
    sub.add_argument('--store', action='store_true',
                     help='add the classified papers to the model')

    for name, help_text in (('profile', 'compute interest profiles from the event log'),
                            ('recommend', 'recommend unseen papers to each user')):
        sub = commands.add_parser(name, parents=[common, users], help=help_text)
        sub.add_argument('--as-of', type=_date,
                         help='profile date (defaults to the date of the latest event)')
    sub = commands.choices['profile']
    sub.add_argument('--export', metavar='FILE',
                     help='assert the profiles into the knowledge base and write it to FILE')

    sub = commands.add_parser('cop', parents=[common],
                              help="rank the people in a person's community of practice")
    sub.add_argument('--seed', required=True, help='person id')
    sub.add_argument('--max-depth', type=int, help='number of hops')
    sub.add_argument('--auto-weights', action='store_true',
                     help='weight relation types by how often they occur')

    commands.add_parser('bootstrap-new-system', parents=[common, users, bootstrap],
                        help='initial profiles from publications')

    sub = commands.add_parser('bootstrap-new-user', parents=[common, users, bootstrap],
                              help='initial profiles from publications and similar users')
    sub.add_argument('--gamma', type=float, help='weight of the similar users')
    sub.add_argument('--confidence-source', choices=['unit', 'relevance'],
                     help='confidence given to each similar user')
    sub.add_argument('--auto-weights', action='store_true',
                     help='weight relation types by how often they occur')

    sub = commands.add_parser('replay', parents=[common, users],
                              help='replay the weekly logs and score the profiles')
    sub.add_argument('--bootstrap', choices=['on', 'off', 'both'], default='both',
                     help='runs to replay (default: both)')
    sub.add_argument('--weeks', type=int, help='number of weeks')
    sub.add_argument('--start', type=_date, help='first day of week 1')
    sub.add_argument('--gamma', type=float, help='weight of the similar users')
    sub.add_argument('--confidence-source', choices=['unit', 'relevance'],
                     help='confidence given to each similar user in the new-user evaluation')
    sub.add_argument('--new-user', action='store_true',
                     help='append the new-user evaluation row')
    sub.add_argument('--per-user', action='store_true', help='add one row per user')
    return parser


# --------------------------------------------------------------------------------------------------
# Inputs
#
def _path(config, name):
    path = getattr(config.paths, name)
    if path is None:
        raise ConfigError(f'no paths.{name} configured')
    if not os.path.exists(path):
        raise ConfigError(f'paths.{name} {path} does not exist')
    return path


def _load_kb(config):
    return load_kb_file(_path(config, 'kb'))


def _load_model(config, required=True):
    path = config.paths.model
    if path is None or not os.path.exists(path):
        if required:
            raise StateError(f"no trained model at {path or 'paths.model'}, "
                             "run `ontorec train` first")
        return None
    return PaperDatabase.load(path)


def _weights(args, config, kb):
    if getattr(args, 'auto_weights', False) or config.cop.auto_weights:
        return auto_select_weights(kb)
    return config.cop.weights


def _users(args, default):
    return sorted(set(args.user)) if args.user else sorted(default)


def _profiles(args, config):
    kb = _load_kb(config)
    papers = _load_model(config, required=False)
    events = read_events(_path(config, 'logs'), papers)
    if args.as_of is not None:
        as_of = args.as_of
    elif events:
        as_of = max(event.date for event in events)
    else:
        raise ArgumentError('the event log is empty, pass --as-of')
    by_user = events_by_user(events)
    profiles = [compute_profile(user, by_user.get(user, []), kb, as_of)
                for user in _users(args, by_user)]
    return kb, papers, events, profiles


# --------------------------------------------------------------------------------------------------
# Commands
#
def cmd_kb_load(args, config, out):
    write_records(_load_kb(config).to_records(), out)


def cmd_train(args, config, out):
    documents = read_manifest(_path(config, 'corpus_manifest'))
    labels = read_training(_path(config, 'training'))
    stoplist = load_stoplist(config.paths.stoplist)
    kb = _load_kb(config) if config.paths.kb is not None else None
    if config.paths.model is None:
        raise ConfigError('no paths.model configured')
    db = PaperDatabase.train(documents, labels, stoplist, k=config.classifier.k,
                             iterations=config.classifier.iterations,
                             capacity=config.classifier.dictionary_capacity, kb=kb)
    db.save(config.paths.model)
    logger.info('Saved the paper database to %s', config.paths.model)
    write_records([paper.to_record() for paper in db], out)


def cmd_classify(args, config, out):
    db = _load_model(config)
    if not args.files:
        write_records([paper.to_record() for paper in db], out)
        return
    records = []
    for file in args.files:
        with open(file, encoding='utf-8', errors='replace') as f:
            text = f.read()
        if args.store:
            paper = db.add_paper(file, text)
            topic, confidence = paper.topic, paper.classification_confidence
        else:
            topic, confidence = db.classify_text(text)
        records.append({'url': file, 'topic': topic, 'confidence': confidence})
    if args.store:
        db.save(config.paths.model)
    write_records(records, out)


def cmd_profile(args, config, out):
    kb, _, _, profiles = _profiles(args, config)
    write_records([record for profile in profiles for record in profile.to_records()], out)
    if args.export:
        kb = export_profiles(profiles, kb)
        with open(args.export, 'w', encoding='utf-8') as f:
            write_records(kb.to_records(), f)


def cmd_recommend(args, config, out):
    _, papers, events, profiles = _profiles(args, config)
    if papers is None:
        raise StateError('recommending needs a trained model, run `ontorec train` first')
    recommendations = recommend_all({profile.user: profile for profile in profiles}, papers,
                                    browsed_urls(events), limit=config.recommend.limit,
                                    n_topics=config.recommend.top_topics)
    for user, recs in recommendations.items():
        write_records(recommendation_records(user, recs), out)


def cmd_cop(args, config, out):
    kb = _load_kb(config)
    max_depth = args.max_depth if args.max_depth is not None else config.cop.max_depth
    write_records(identify_cop(kb, args.seed, _weights(args, config, kb), max_depth).to_records(),
                  out)


def _people(args, kb):
    return _users(args, [entity.id for entity in kb.entities.values() if entity.kind == 'person'])


def cmd_bootstrap_new_system(args, config, out):
    kb = _load_kb(config)
    papers = _load_model(config, required=False)
    params = config.bootstrap.params()
    for person in _people(args, kb):
        profile = new_system_profile(person, classified_publications(kb, person, papers), kb,
                                     params)
        write_records(profile.to_records(), out)


def cmd_bootstrap_new_user(args, config, out):
    kb = _load_kb(config)
    papers = _load_model(config, required=False)
    params = config.bootstrap.params()
    weights = _weights(args, config, kb)
    for person in _people(args, kb):
        cop = identify_cop(kb, person, weights, config.cop.max_depth)
        similar = {}
        for member, _ in cop:
            profile = interest_profile(kb, member)
            if profile.entries:
                similar[member] = profile
        profile = new_user_profile(person, classified_publications(kb, person, papers), cop,
                                   similar, kb, params)
        write_records(profile.to_records(), out)


def cmd_replay(args, config, out):
    kb = _load_kb(config)
    papers = _load_model(config)
    events = read_events(_path(config, 'logs'), papers)
    weeks = args.weeks if args.weeks is not None else config.replay.weeks
    logs = WeeklySplit.from_events(events, args.start or config.replay.start, weeks)
    users = _users(args, events_by_user(events))
    params = config.bootstrap.params()
    rows = []
    for bootstrap_on in {'off': [False], 'on': [True], 'both': [False, True]}[args.bootstrap]:
        rows += replay_experiment(kb, papers, logs, users, bootstrap_on, params, args.per_user)
    if args.new_user:
        final = replay_profiles(kb, papers, logs, users, False, params)[-1]
        exported = export_profiles(final.values(), kb)
        weights = _weights(args, config, exported)
        cops = {user: identify_cop(exported, user, weights, config.cop.max_depth)
                for user in users}
        result = new_user_evaluation(exported, final, cops, params, papers, week=logs.weeks,
                                     per_user=args.per_user)
        rows += result if args.per_user else [result]
    write_metrics(rows, out)


COMMANDS = {
    'kb-load': cmd_kb_load,
    'train': cmd_train,
    'classify': cmd_classify,
    'profile': cmd_profile,
    'recommend': cmd_recommend,
    'cop': cmd_cop,
    'bootstrap-new-system': cmd_bootstrap_new_system,
    'bootstrap-new-user': cmd_bootstrap_new_user,
    'replay': cmd_replay,
}


def _configure(args):
    config = load_config(args.config, args.set)
    changes = {}
    if getattr(args, 'gamma', None) is not None:
        changes['gamma'] = args.gamma
    if getattr(args, 'reference_date', None) is not None:
        changes['reference_date'] = args.reference_date
    if getattr(args, 'confidence_source', None) is not None:
        changes['cop_confidence_source'] = args.confidence_source
    if changes:
        config = config.replace('bootstrap', **changes)
        config.bootstrap.params()
    return config


def run(argv=None, out=None):
    """
    Runs one command

    ### Parameters

    - argv (*list of strings*, optional): command-line arguments, defaults to `sys.argv[1:]`
    - out (*text stream*, optional): where records are written, defaults to standard output

    ### Returns

    - *int*: exit status (0 success, 1 usage error, 2 data error, 3 state error)
    """
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        level = logging.DEBUG if args.verbose else logging.ERROR if args.quiet else logging.WARNING
        logging.basicConfig(level=level, stream=sys.stderr,
                            format='%(levelname)s %(name)s: %(message)s')
        logging.getLogger('cpc.ontorec').setLevel(level)
        COMMANDS[args.command](args, _configure(args), out)
    except UsageError as e:
        print(f'ontorec: usage error: {e}', file=sys.stderr)
        return EXIT_USAGE
    except StateError as e:
        print(f'ontorec: {e}', file=sys.stderr)
        return EXIT_STATE
    except (KnowledgeBaseError, NotFoundError, ArgumentError, ConfigError) as e:
        print(f'ontorec: {e}', file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f'ontorec: {e.filename or ""}: {e.strerror or e}', file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def main(argv=None):
    return run(argv)
