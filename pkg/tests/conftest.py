import pytest

from tests.strategies import make_dataset


@pytest.fixture
def worked():
    """The three-sequence example: A,B,C / A,B,D / A,C,D."""
    return make_dataset(["ABC", "ABD", "ACD"], name="worked")


@pytest.fixture
def write_file(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
