"""
Defines all Exceptions used by the OntoRec package
"""


class OntoRecError(Exception):
    def __init__(self, *args, **kwargs):
        Exception.__init__(self, *args, **kwargs)


class KnowledgeBaseError(OntoRecError):
    def __init__(self, *args, **kwargs):
        Exception.__init__(self, *args, **kwargs)


class NotFoundError(OntoRecError, KeyError):
    def __init__(self, *args, **kwargs):
        Exception.__init__(self, *args, **kwargs)

    def __str__(self):
        # KeyError quotes its message, we don't want that
        return Exception.__str__(self)


class ArgumentError(OntoRecError, ValueError):
    def __init__(self, *args, **kwargs):
        Exception.__init__(self, *args, **kwargs)


class StateError(OntoRecError):
    def __init__(self, *args, **kwargs):
        Exception.__init__(self, *args, **kwargs)


class ConfigError(OntoRecError):
    def __init__(self, *args, **kwargs):
        Exception.__init__(self, *args, **kwargs)


class UsageError(OntoRecError):
    def __init__(self, *args, **kwargs):
        Exception.__init__(self, *args, **kwargs)
