import numpy as np
import pytest

import robustkit as rk

# Worked example: 3 scenarios over 4 items, choose 2.
TABLE1_COSTS = np.array(
    [
        [5.0, 5.0, 3.0, 3.0],
        [3.0, 8.0, 9.0, 7.0],
        [3.0, 2.0, 1.0, 6.0],
    ]
)

TABLE1_TEXT = """\
# robust-instance v1
problem selection
n 4
p 2
N 3
c 5 5 3 3
c 3 8 9 7
c 3 2 1 6
"""


@pytest.fixture
def table1():
    return rk.UncertaintySet(TABLE1_COSTS.copy()), rk.Selection(n=4, p=2)


@pytest.fixture
def table1_text():
    return TABLE1_TEXT
