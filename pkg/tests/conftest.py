from fractions import Fraction

import pytest

from qfock import FORMAL_Q, FockSpace


@pytest.fixture(scope="session")
def sym1():
    """One letter, formal parameter, room for degree-11 words."""
    return FockSpace.with_scalar_q(1, FORMAL_Q, level=11)


@pytest.fixture(scope="session")
def sym2():
    """Two letters, formal parameter."""
    return FockSpace.with_scalar_q(2, FORMAL_Q, level=8)


@pytest.fixture(scope="session")
def half2():
    """Two letters at q = 1/2; shared because its level-7 Gram data is the
    most expensive exact object in the suite."""
    return FockSpace.with_scalar_q(2, Fraction(1, 2), level=8)
