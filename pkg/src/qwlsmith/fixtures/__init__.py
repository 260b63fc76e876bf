"""Matrix documents shipped with the package."""

from importlib import resources


def path(name: str):
    """Traversable for a shipped fixture (``.json`` appended when missing)."""
    if not name.endswith(".json"):
        name += ".json"
    return resources.files(__name__).joinpath(name)


def load(name: str):
    from ..expr_io import read_matrix

    return read_matrix(path(name).read_bytes())


def names():
    return sorted(p.name[:-5] for p in resources.files(__name__).iterdir() if p.name.endswith(".json"))
