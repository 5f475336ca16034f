import pytest

from fixtures import make_fixture_gazetteer, make_fixture_records
from stubs import ChatStub, GeocoderStub


@pytest.fixture
def chat_stub():
    with ChatStub() as stub:
        yield stub


@pytest.fixture
def geocoder_stub():
    with GeocoderStub() as stub:
        yield stub


@pytest.fixture
def records():
    return make_fixture_records()


@pytest.fixture
def store(records):
    return make_fixture_gazetteer(records)
