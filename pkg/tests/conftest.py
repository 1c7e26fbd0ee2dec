import pytest

from src.models.fourier import Grid


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run full-resolution reproduction tests"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def grid():
    return Grid(64)


@pytest.fixture
def fine_grid():
    return Grid(128)


@pytest.fixture(autouse=True)
def app_dir(tmp_path, monkeypatch):
    """Keep config and log files out of the real per-user directory."""
    appdata = tmp_path / "appdata"
    monkeypatch.setenv("APPDATA", str(appdata))
    return appdata / "VortexSheet"
