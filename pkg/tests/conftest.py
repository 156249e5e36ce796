import logging
import sys

import pytest
import structlog

from padic_k1.coeff import UnramifiedRing, make_extension, unramified_ring
from padic_k1.groups import Group, load_group


@pytest.fixture
def z3() -> UnramifiedRing:
    """Z_3 modulo 27."""
    return unramified_ring(make_extension(3, 1), 3)


@pytest.fixture
def z3_wide() -> UnramifiedRing:
    return unramified_ring(make_extension(3, 1), 4)


@pytest.fixture
def w9() -> UnramifiedRing:
    """W(F_9) modulo 27."""
    return unramified_ring(make_extension(3, 2), 3)


@pytest.fixture
def c2() -> Group:
    return load_group("C2")


@pytest.fixture
def c3() -> Group:
    return load_group("C3")


@pytest.fixture
def q8() -> Group:
    return load_group("Q8")


@pytest.fixture(autouse=True)
def quiet_logs() -> None:
    """Keep library logs off stdout, where the command line prints JSON."""
    structlog.configure(
        wrapper_class=structlog.make_filtering_bound_logger(logging.WARNING),
        logger_factory=structlog.PrintLoggerFactory(file=sys.__stderr__),
    )
