import pytest

from autgrp import catalog
from autgrp.contraction import build_certificate
from autgrp.nilpotent import build_instance


@pytest.fixture(scope="session")
def grig():
    return catalog.get("grigorchuk")


@pytest.fixture(scope="session")
def basilica():
    return catalog.get("basilica")


@pytest.fixture(scope="session")
def poly1():
    return catalog.get("poly1")


@pytest.fixture(scope="session")
def adding():
    return catalog.get("adding")


@pytest.fixture(scope="session")
def flip():
    return catalog.get("flip")


@pytest.fixture(scope="session")
def grig_cert(grig):
    # per-section shrink at block 2: every length-2 block has sections of
    # length at most 1
    return build_certificate(grig, 2, 1, "item1")


@pytest.fixture(scope="session")
def basilica_cert(basilica):
    # the shrinking cell; the (1, 1) weak cell exists but can cycle
    return build_certificate(basilica, 3, 2, "item1")


@pytest.fixture(scope="session")
def basilica_weak_cert(basilica):
    return build_certificate(basilica, 1, 1, "item2")


@pytest.fixture(scope="session")
def z4():
    return build_instance("z4")


@pytest.fixture(scope="session")
def z2():
    return build_instance("z2")


@pytest.fixture(scope="session")
def heis():
    return build_instance("heis")
