import numpy as np
import pytest

from ts_2_sym.compression import compress
from ts_2_sym.digitization import FitInput, fit


FIVE_POINTS = [0.0, 1.0, 2.0, 1.0, 0.0]


@pytest.fixture(autouse=True)
def quiet_environment(tmp_path_factory, monkeypatch):
    monkeypatch.setenv('T2S_LOG_DIR', str(tmp_path_factory.getbasetemp() / 'logs'))
    monkeypatch.setenv('NO_COLOR', '1')
    monkeypatch.delenv('T2S_DEFAULTS', raising=False)


@pytest.fixture
def five_points() -> np.ndarray:
    return np.array(FIVE_POINTS)


@pytest.fixture
def five_point_model():
    model, sequences = fit(FitInput([compress(FIVE_POINTS, 0.1, 'apca')], scl=1.0, alpha=0.5))
    return model, sequences[0]


def random_walk(seed: int, n: int = 300) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal(n).cumsum()


def write_csv(path, columns, header: bool = True) -> str:
    """CSV with one column per series"""
    lines = [','.join(f'series_{i}' for i in range(len(columns)))] if header else []
    for row in zip(*columns):
        lines.append(','.join(repr(float(value)) for value in row))
    path.write_text('\n'.join(lines) + '\n')
    return str(path)
