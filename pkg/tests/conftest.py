import os

# keep test runs from writing pathograph_debug.log next to main.py
os.environ.setdefault("PATHOGRAPH_NO_FILE_LOG", "true")

import pytest  # noqa: E402

from containment.truemper import prism_set, pyramid_set, theta_set, truemper_union, wheel_set  # noqa: E402
from helpers import complete, cycle, path, square_with_urpath, wheel  # noqa: E402
from pathograph.model import Pathograph  # noqa: E402


@pytest.fixture
def square_h() -> Pathograph:
    return square_with_urpath()


@pytest.fixture
def theta():
    return theta_set()


@pytest.fixture
def pyramid():
    return pyramid_set()


@pytest.fixture
def prism():
    return prism_set()


@pytest.fixture
def wheels():
    return wheel_set()


@pytest.fixture
def theta_wheel():
    return truemper_union(["theta", "wheel"])


@pytest.fixture
def theta_prism_wheel():
    return truemper_union(["theta", "prism", "wheel"])


@pytest.fixture
def k1() -> Pathograph:
    return complete(1)


@pytest.fixture
def k2() -> Pathograph:
    return complete(2)


@pytest.fixture
def k3() -> Pathograph:
    return complete(3)


@pytest.fixture
def p3() -> Pathograph:
    return path(3)


@pytest.fixture
def c4() -> Pathograph:
    return cycle(4)


@pytest.fixture
def c5() -> Pathograph:
    return cycle(5)


@pytest.fixture
def k23() -> Pathograph:
    return Pathograph.graph(
        ["p", "q", "r", "s", "t"],
        [(a, b) for a in ("p", "q") for b in ("r", "s", "t")],
    )


@pytest.fixture
def wheel5() -> Pathograph:
    return wheel(4)


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file under tmp_path and return its path as a string."""

    def write(name: str, text: str) -> str:
        target = tmp_path / name
        target.write_text(text, encoding="utf-8")
        return str(target)

    return write
