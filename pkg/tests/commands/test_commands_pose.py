import json

import numpy as np
import pytest

from dockvision import exceptions
from dockvision.evaluation.pose import trial_error
from dockvision.main import run
from dockvision.scene import Pose, RenderSpec, project_points, render_scene
from dockvision.settings import RunConfig, dump_config, load_config
from dockvision.utils.images import write_image

TRUTH = Pose.from_euler(10.0, -5.0, 2.0, [100.0, -50.0, 4000.0])


def _estimated(output) -> Pose:
    return Pose(np.reshape(output['pose']['R'], (3, 3)), output['pose']['T'])


def test_commands_pose_from_centroids(small_config_file, tmp_path):
    config = load_config(small_config_file)
    pixels = project_points(config.layout.points, config.camera, TRUTH)
    path = tmp_path / 'centroids.json'
    # Order is irrelevant, the command sorts around the ring.
    path.write_text(json.dumps(pixels[[3, 0, 6, 1, 7, 2, 5, 4]].tolist()))

    output = run('pose', config=small_config_file, centroids=str(path))
    error = trial_error(_estimated(output), TRUTH)
    assert error.orientation_deg < 1e-6
    assert error.position_mm < 1e-3
    assert output['landmarks']['observation'] == 'Full'
    assert 'pose' in output['timings_s']
    with open(config.path('pose')) as f:
        assert json.load(f)['pose'] == output['pose']


def test_commands_pose_centroids_under_a_key(small_config_file, tmp_path):
    config = load_config(small_config_file)
    pixels = project_points(config.layout.points, config.camera, TRUTH)
    path = tmp_path / 'centroids.yaml'
    lines = [f'  - [{float(u)!r}, {float(v)!r}]' for u, v in pixels]
    path.write_text('\n'.join(['centroids:', *lines]) + '\n')
    output = run(
        'pose', config=small_config_file, centroids=str(path), out=str(tmp_path / 'p')
    )
    assert trial_error(_estimated(output), TRUTH).position_mm < 1e-3


def test_commands_pose_from_image(tmp_path):
    config = RunConfig(
        image={'size': 640},
        grid={'G': 4, 'B': 1},
        camera={
            'k_x': 800.0,
            'k_y': 800.0,
            'u_0': 320.0,
            'v_0': 320.0,
            'image_width': 640,
            'image_height': 640,
        },
        landmarks={'preset': 'rendered'},
        paths={'out_dir': str(tmp_path / 'runs')},
    )
    config_path = tmp_path / 'run.yaml'
    with open(config_path, 'w') as f:
        dump_config(config, f)
    image, truth = render_scene(config.layout, config.camera, TRUTH, RenderSpec())
    image_path = str(tmp_path / 'scene.png')
    write_image(image_path, image)

    output = run(
        'pose', config=str(config_path), image=image_path, box=list(truth.box)
    )
    error = trial_error(_estimated(output), TRUTH)
    assert error.orientation_deg <= 3.0
    assert error.relative_position <= 0.02
    assert set(output['timings_s']) == {'landmarks', 'pose'}


@pytest.mark.parametrize(
    'kwargs',
    [{}, {'image': 'a.png', 'centroids': 'b.json'}, {'centroids': 'c', 'box': [0.5]}],
)
def test_commands_pose_argument_combinations(small_config_file, kwargs):
    with pytest.raises(exceptions.ConfigInvalid):
        run('pose', config=small_config_file, **kwargs)


def test_commands_pose_malformed_centroids(small_config_file, tmp_path):
    path = tmp_path / 'centroids.json'
    path.write_text(json.dumps({'points': [[1, 2]]}))
    with pytest.raises(exceptions.IoFailure):
        run('pose', config=small_config_file, centroids=str(path))


def test_commands_pose_too_few_centroids(small_config_file, tmp_path):
    path = tmp_path / 'centroids.json'
    path.write_text(json.dumps([[1.0, 2.0], [3.0, 4.0], [5.0, 1.0]]))
    with pytest.raises(exceptions.PartialObservation):
        run('pose', config=small_config_file, centroids=str(path))
