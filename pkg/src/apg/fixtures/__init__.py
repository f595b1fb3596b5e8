"""Small graphs shipped with the package, used by the tests and the docs.

vertices.apg    two vertex labels (User, Trip) with one element each
edges.apg       driver/rider edges between a trip and two users
names.apg       a user with two name properties
plates1.apg     license plates (country, (region, number)), first source
plates2.apg     license plates, second source, one plate shared with the first
trips.apg       the full trips graph: vertices, timestamps, events, two trips
mapping.apgm    a schema mapping from a three-field record to a two-field one
mapping_input.apg  a graph on the mapping's target schema, one record
"""

from importlib import resources


def path(name: str):
    return resources.files(__package__) / name


def load(name: str) -> str:
    return path(name).read_text(encoding="utf-8")
