"""Global pytest fixtures."""
import os

import numpy as np
import pytest

from dockvision.scene.camera import CameraIntrinsics
from dockvision.scene.layout import LandmarkLayout
from dockvision.settings import RunConfig, dump_config


@pytest.fixture(scope='function', autouse=True)
def cd_cwd(request):
    """Change to current directory - default for all tests."""
    os.chdir(request.fspath.dirname)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)


@pytest.fixture()
def intrinsics():
    """The default 112 x 112 dataset camera."""
    return CameraIntrinsics()


@pytest.fixture()
def desk_camera():
    """The 3200 x 2400 benchmark camera."""
    return RunConfig().bench.camera


@pytest.fixture()
def layout():
    """Eight lights on a 1200 mm circle."""
    return LandmarkLayout()


@pytest.fixture()
def small_config(tmp_path):
    """A run config small enough to push every command through in seconds."""
    return RunConfig(
        image={'size': 32},
        grid={'G': 4, 'B': 1},
        camera={
            'k_x': 40.0,
            'k_y': 40.0,
            'u_0': 16.0,
            'v_0': 16.0,
            'image_width': 32,
            'image_height': 32,
        },
        poses={'distance_min_mm': 3000.0, 'distance_max_mm': 4000.0},
        dataset={'n_fg': 6, 'n_bg': 6, 'holdout': 2, 'distractors': 1},
        train={'filters': [4, 8], 'dense': [16], 'epochs': 2, 'batch': 4},
        bench={'trials': 20},
        paths={'out_dir': str(tmp_path / 'runs')},
    )


@pytest.fixture()
def small_config_file(small_config, tmp_path):
    """`small_config` written as a yaml run config."""
    path = tmp_path / 'run.yaml'
    with open(path, 'w') as f:
        dump_config(small_config, f)
    return str(path)


def pytest_addoption(parser):
    parser.addoption(
        "--skip-slow", action="store_true", default=False, help="skip slow tests"
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: mark test as slow to run")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--skip-slow"):
        skip_slow = pytest.mark.skip(reason="skipped slow test")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)
