"""
Reading and writing structured records (one JSON object per line)
"""

# Built-ins
import datetime
import json
import logging

# This package
from .exceptions import ArgumentError


logger = logging.getLogger(__name__)


def parse_date(value, what='date'):
    """
    Converts an ISO-8601 calendar date (or a date object) to a `datetime.date`

    ### Parameters

    - value (*string*, *datetime.date* or *datetime.datetime*): value to convert
    - what (*string*): name of the value, used in the error message

    ### Returns

    - *datetime.date*

    ### Raises

    - ArgumentError: if the value can't be parsed

    >>> parse_date('2002-01-31')
    datetime.date(2002, 1, 31)
    """
    if isinstance(value, datetime.datetime):
        return value.date()
    if isinstance(value, datetime.date):
        return value
    try:
        return datetime.date.fromisoformat(str(value))
    except ValueError:
        raise ArgumentError(f'{what} {value!r} is not an ISO-8601 calendar date') from None


def _default(value):
    if isinstance(value, (datetime.date, datetime.datetime)):
        return value.isoformat()
    raise TypeError(f'{type(value).__name__} is not serialisable')


def dumps(record):
    """
    Serialises one record deterministically (sorted keys, ISO dates)

    >>> dumps({'b': 1, 'a': 'x'})
    '{"a": "x", "b": 1}'
    """
    return json.dumps(record, sort_keys=True, default=_default)


def iter_records(lines, source='<stream>'):
    """
    Parses an iterable of text lines into records, skipping blank lines

    ### Parameters

    - lines (*iterable of strings*): lines to parse
    - source (*string*): name of the source, used in error messages

    ### Returns

    - *generator of dicts*

    ### Raises

    - ArgumentError: if a line is not a JSON object
    """
    for line_number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            raise ArgumentError(f'{source}:{line_number}: invalid JSON record ({e.msg})') from None
        if not isinstance(record, dict):
            raise ArgumentError(f'{source}:{line_number}: record must be a JSON object')
        yield record


def read_records(path):
    """
    Reads all records from a JSON-lines file

    ### Parameters

    - path (*string* or *Path*): file to read

    ### Returns

    - *list of dicts*

    ### Raises

    - ArgumentError: if the file is not UTF-8 text or a line is not a JSON object
    """
    logger.debug('Reading records from %s', path)
    with open(path, encoding='utf-8') as f:
        try:
            return list(iter_records(f, source=str(path)))
        except UnicodeDecodeError as e:
            raise ArgumentError(f'{path}: not UTF-8 text ({e.reason} at byte {e.start})') from None


def write_records(records, stream):
    """
    Writes records to a text stream, one JSON object per line
    """
    for record in records:
        stream.write(dumps(record))
        stream.write('\n')
