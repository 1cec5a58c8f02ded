"""Exception types shared across the package."""


class DataError(Exception):
    """Invalid input data (bad files, malformed graphs, bad ids)."""


class GraphParseError(DataError):
    """Edge-list text that does not parse; message carries the line number."""
