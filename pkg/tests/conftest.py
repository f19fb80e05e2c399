import pytest

from twistcartan.catalog import catalog_list


@pytest.fixture(scope="session")
def catalog():
    return catalog_list()
