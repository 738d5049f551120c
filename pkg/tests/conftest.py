import pytest

from kcluster.model import Position

# Integer placement (meters) whose 3-nearest-neighbour lists under the
# one-relay cost are exactly the ten lists of the worked k=3 example.
TABLE_I_POSITIONS = {
    1: (19.0, 74.0),
    2: (42.0, 73.0),
    3: (15.0, 52.0),
    4: (34.0, 54.0),
    5: (60.0, 58.0),
    6: (50.0, 45.0),
    7: (6.0, 8.0),
    8: (81.0, 19.0),
    9: (69.0, 4.0),
    10: (28.0, 6.0),
}


@pytest.fixture
def table1_positions():
    return {i: Position(*xy) for i, xy in TABLE_I_POSITIONS.items()}
