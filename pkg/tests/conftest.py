import pytest

from tridesign.datasets import as_certificate, expand_special, load_dataset
from tridesign.gf2n import build_field
from tridesign.orbits import expand_certificate


@pytest.fixture(scope="session")
def f5():
    return build_field(5)


@pytest.fixture(scope="session")
def f6():
    return build_field(6)


@pytest.fixture(scope="session")
def f7():
    return build_field(7)


@pytest.fixture(scope="session")
def f12():
    return build_field(12)


@pytest.fixture(scope="session")
def f13():
    return build_field(13)


@pytest.fixture(scope="session")
def design6():
    return expand_special(load_dataset("design6"))


@pytest.fixture(scope="session")
def gdd6_2():
    return expand_special(load_dataset("gdd6-2"))


@pytest.fixture(scope="session")
def gdd12_6():
    return expand_certificate(as_certificate(load_dataset("gdd12-6")))


@pytest.fixture(scope="session")
def frob7_design():
    return expand_certificate(as_certificate(load_dataset("frob7")))


@pytest.fixture(scope="session")
def frob13_design():
    return expand_certificate(as_certificate(load_dataset("frob13")))
