import os
import tempfile

import numpy as np
import pytest

from mmhybrid.channel import ArrayConfig
from mmhybrid.codebook import build_beamsteering_codebook
from mmhybrid.utils.rng import seeded_stream

FIXTURES_ROOT = os.path.join(os.path.dirname(__file__), "fixtures")
GOLDEN_ROOT = os.path.join(FIXTURES_ROOT, "golden")


@pytest.fixture()
def fixture_file():
    return lambda name: os.path.join(FIXTURES_ROOT, name)


@pytest.fixture()
def rng():
    return seeded_stream(1234)


@pytest.fixture()
def codebook_factory():
    def factory(bits, n_elements, spacing=0.5, dedupe=False):
        return build_beamsteering_codebook(bits, ArrayConfig(n_elements, spacing), dedupe=dedupe)

    return factory


@pytest.fixture()
def random_channel(rng):
    def factory(n_rx, n_tx):
        return (rng.standard_normal((n_rx, n_tx)) + 1j * rng.standard_normal((n_rx, n_tx))) / np.sqrt(2)

    return factory


@pytest.fixture(scope="function")
def temp_file():
    temp_files = []

    def tempfile_factory(extension=".csv", prefix="mmhybrid_"):
        tf = tempfile.mktemp(suffix=extension, prefix=prefix)
        temp_files.append(tf)
        return tf

    yield tempfile_factory

    for tf in temp_files:
        if os.path.exists(tf):
            os.unlink(tf)


@pytest.fixture()
def golden(request):
    """Directory of the frozen golden sweep and whether to rewrite it."""
    return GOLDEN_ROOT, request.config.option.update_golden


def pytest_addoption(parser):
    parser.addoption(
        "--skip-slow",
        action="store_true",
        dest="skip_slow",
        default=False,
        help="skip marked slow tests",
    )
    parser.addoption(
        "--update-golden",
        action="store_true",
        dest="update_golden",
        default=False,
        help="rewrite the golden sweep CSVs instead of comparing against them",
    )


def pytest_configure(config):
    mark_expr = []

    if config.option.markexpr:
        mark_expr.append(config.option.markexpr)

    if config.option.skip_slow:
        mark_expr.append("not slow")
    if mark_expr:
        setattr(config.option, "markexpr", " and ".join(mark_expr))
