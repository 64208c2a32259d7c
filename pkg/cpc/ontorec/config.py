"""
Defines a Config object. A Config holds the settings of every ontorec command, read from the
defaults shipped with the package, an optional YAML file and `section.key=value` overrides.
"""

# Built-ins
import dataclasses
import datetime
import importlib.resources
import logging
from typing import Optional

# Third-party
import yaml

# This package
from .bootstrap import BootstrapParams
from .cop import DEFAULT_WEIGHTS, check_weights
from .exceptions import ArgumentError, ConfigError
from .records import parse_date


logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class PathsConfig:
    kb: Optional[str] = None
    corpus_manifest: Optional[str] = None
    training: Optional[str] = None
    stoplist: Optional[str] = None
    logs: Optional[str] = None
    model: Optional[str] = None


@dataclasses.dataclass(frozen=True)
class ClassifierConfig:
    k: int = 5
    iterations: int = 10
    dictionary_capacity: int = 15000


@dataclasses.dataclass(frozen=True)
class CopConfig:
    max_depth: int = 3
    weights: dict = dataclasses.field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    auto_weights: bool = False


@dataclasses.dataclass(frozen=True)
class BootstrapConfig:
    gamma: float = 2.5
    reference_date: datetime.date = datetime.date(2002, 1, 1)
    cop_confidence_source: str = 'relevance'

    def params(self):
        return BootstrapParams(self.gamma, self.reference_date, self.cop_confidence_source)


@dataclasses.dataclass(frozen=True)
class RecommendConfig:
    limit: int = 10
    top_topics: int = 3


@dataclasses.dataclass(frozen=True)
class ReplayConfig:
    weeks: int = 7
    start: Optional[datetime.date] = None


@dataclasses.dataclass(frozen=True)
class Config:
    """
    Config object

    One frozen section per concern. Build one with `load_config()`.
    """
    paths: PathsConfig = dataclasses.field(default_factory=PathsConfig)
    classifier: ClassifierConfig = dataclasses.field(default_factory=ClassifierConfig)
    cop: CopConfig = dataclasses.field(default_factory=CopConfig)
    bootstrap: BootstrapConfig = dataclasses.field(default_factory=BootstrapConfig)
    recommend: RecommendConfig = dataclasses.field(default_factory=RecommendConfig)
    replay: ReplayConfig = dataclasses.field(default_factory=ReplayConfig)

    def replace(self, section, **changes):
        """
        Returns a copy with some keys of one section changed
        """
        return dataclasses.replace(self, **{
            section: dataclasses.replace(getattr(self, section), **changes)})


SECTIONS = {field.name: field.type for field in dataclasses.fields(Config)}


# --------------------------------------------------------------------------------------------------
# Reading
#
def load_defaults():
    """
    The default settings shipped with the package, as a nested dict
    """
    text = importlib.resources.files('cpc.ontorec').joinpath('data/defaults.yml').read_text(
        encoding='utf-8')
    return yaml.safe_load(text)


def merge(base, override):
    """
    Recursively merges two nested dicts, values of `override` winning

    >>> merge({'a': {'x': 1, 'y': 2}}, {'a': {'y': 3}})
    {'a': {'x': 1, 'y': 3}}
    """
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def parse_override(text):
    """
    Parses a `section.key=value` override into a nested dict, the value read as YAML

    >>> parse_override('cop.weights.attended=0.5')
    {'cop': {'weights': {'attended': 0.5}}}
    """
    key, sep, value = text.partition('=')
    names = [name.strip() for name in key.split('.')]
    if not sep or len(names) < 2 or not all(names):
        raise ConfigError(f'override {text!r} is not of the form section.key=value')
    try:
        override = yaml.safe_load(value) if value.strip() else None
    except (yaml.YAMLError, ValueError) as e:
        raise ConfigError(f'override {text!r} has an unreadable value: {e}') from None
    for name in reversed(names):
        override = {name: override}
    return override


def _positive_int(section, key, value):
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f'{section}.{key} must be a positive integer, not {value!r}')
    return value


def _section(name, values):
    cls = SECTIONS[name]
    if values is None:
        values = {}
    if not isinstance(values, dict):
        raise ConfigError(f'section {name!r} must be a mapping')
    known = {field.name for field in dataclasses.fields(cls)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f'unknown {name} setting(s): {", ".join(unknown)}')
    return values


def config_from_dict(settings):
    """
    Builds and validates a Config from a nested dict

    ### Raises

    - ConfigError: on unknown sections or keys and invalid values
    """
    unknown = sorted(set(settings) - set(SECTIONS))
    if unknown:
        raise ConfigError(f'unknown config section(s): {", ".join(unknown)}')
    sections = {name: _section(name, settings.get(name)) for name in SECTIONS}

    paths = PathsConfig(**{key: (str(value) if value is not None else None)
                           for key, value in sections['paths'].items()})

    classifier = ClassifierConfig(**{
        key: _positive_int('classifier', key, value)
        for key, value in sections['classifier'].items()})

    cop = dict(sections['cop'])
    if 'max_depth' in cop:
        _positive_int('cop', 'max_depth', cop['max_depth'])
    if not isinstance(cop.get('auto_weights', False), bool):
        raise ConfigError('cop.auto_weights must be true or false')
    try:
        cop['weights'] = check_weights(cop.get('weights', DEFAULT_WEIGHTS) or {})
    except (ArgumentError, TypeError, ValueError) as e:
        raise ConfigError(f'cop.weights: {e}') from None
    cop = CopConfig(**cop)

    bootstrap = dict(sections['bootstrap'])
    try:
        if 'reference_date' in bootstrap:
            bootstrap['reference_date'] = parse_date(bootstrap['reference_date'],
                                                     what='bootstrap.reference_date')
        if 'gamma' in bootstrap:
            bootstrap['gamma'] = float(bootstrap['gamma'])
        bootstrap = BootstrapConfig(**bootstrap)
        bootstrap.params()
    except (ArgumentError, TypeError, ValueError) as e:
        raise ConfigError(f'bootstrap: {e}') from None

    recommend = RecommendConfig(**{
        key: _positive_int('recommend', key, value)
        for key, value in sections['recommend'].items()})

    replay = dict(sections['replay'])
    if 'weeks' in replay:
        _positive_int('replay', 'weeks', replay['weeks'])
    if replay.get('start') is not None:
        try:
            replay['start'] = parse_date(replay['start'], what='replay.start')
        except ArgumentError as e:
            raise ConfigError(str(e)) from None
    replay = ReplayConfig(**replay)

    return Config(paths, classifier, cop, bootstrap, recommend, replay)


def load_config(path=None, overrides=()):
    """
    Loads the settings: package defaults, then a YAML file, then overrides

    ### Parameters

    - path (*string*, optional): YAML config file
    - overrides (*list of strings*): `section.key=value` overrides, applied in order

    ### Returns

    - *Config*

    ### Raises

    - ConfigError: if the file can't be read or any value is invalid
    """
    settings = load_defaults()
    if path is not None:
        try:
            with open(path, encoding='utf-8') as f:
                user_settings = yaml.safe_load(f) or {}
        except OSError as e:
            raise ConfigError(f'cannot read config file {path}: {e.strerror}') from None
        except (yaml.YAMLError, ValueError) as e:
            raise ConfigError(f'config file {path} is not valid YAML: {e}') from None
        if not isinstance(user_settings, dict):
            raise ConfigError(f'config file {path} must hold a mapping')
        logger.debug('Read settings from %s', path)
        settings = merge(settings, user_settings)
    for text in overrides:
        settings = merge(settings, parse_override(text))
    return config_from_dict(settings)
