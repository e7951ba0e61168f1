import os
import typing

import numpy as np
import pytest

from dockvision import exceptions
from dockvision.deform import (
    DEFORMATIONS,
    SWEEP_GRIDS,
    DeformSettings,
    deform_manifest,
    get_deformation,
)
from dockvision.deform.suite import DeformOp
from dockvision.image import ImageBuffer
from dockvision.scene import DatasetManifest, generate_dataset
from dockvision.scene.dataset import MANIFEST_NAME, ManifestRecord, read_manifest
from dockvision.utils.images import read_image, write_image

OP_PARAMS = {
    'blur': 1.0,
    'hue': 0.7,
    'sat': 0.7,
    'val': 0.7,
    'gamma': 1.5,
    'illum': 1.0,
    'mirror': 0.0,
    'noisy': 2.0,
}


def test_deform_suite_registry_covers_every_op():
    assert set(DEFORMATIONS) == set(typing.get_args(DeformOp))
    assert set(SWEEP_GRIDS) == set(DEFORMATIONS)
    assert SWEEP_GRIDS['blur'] == tuple(float(i) for i in range(1, 11))
    assert 1.0 in SWEEP_GRIDS['gamma']


def test_deform_suite_unknown_op():
    with pytest.raises(exceptions.ConfigInvalid):
        get_deformation('swirl')


@pytest.mark.parametrize('op', sorted(OP_PARAMS))
def test_deform_suite_ops_keep_size_and_range(op, rng):
    image = ImageBuffer(rng.uniform(0.0, 0.3, size=(64, 64, 3)))
    record = ManifestRecord(
        id='fg-000000',
        path='images/fg-000000.png',
        label='foreground',
        box=(0.25, 0.625, 0.25, 0.25),
    )
    out = get_deformation(op)(
        image, record, OP_PARAMS[op], np.random.default_rng(0), DeformSettings()
    )
    assert out.shape == image.shape
    assert out.color_space == image.color_space
    assert out.data.min() >= 0.0
    assert out.data.max() <= 1.0
    assert not np.array_equal(out.data, image.data)


def test_deform_suite_illumination_model_scale():
    settings = DeformSettings()
    base = settings.illumination_model()
    wide = settings.illumination_model(2.0)
    assert wide.mean == base.mean
    assert np.allclose(wide.var, 4 * np.asarray(base.var))
    assert settings.illumination_model().mean == base.mean


@pytest.fixture
def manifest(small_config, tmp_path):
    return generate_dataset(
        3,
        2,
        small_config.poses,
        small_config.render,
        str(tmp_path / 'data'),
        layout=small_config.layout,
        intr=small_config.camera,
        seed=small_config.seed,
    )


def test_deform_suite_value_shift_over_manifest(manifest, tmp_path):
    out_dir = str(tmp_path / 'val')
    derived = deform_manifest(manifest, 'val', 0.5, out_dir)
    assert len(derived) == len(manifest)
    assert derived.root == os.path.abspath(out_dir)
    for before, after in zip(manifest, derived):
        assert after.deform == {'op': 'val', 'param': 0.5, 'seed': 0}
        assert after.box == before.box
        assert after.label == before.label
        original = read_image(manifest.image_path(before))
        shifted = read_image(derived.image_path(after))
        assert shifted.shape == original.shape
        assert np.allclose(shifted.value(), 0.5 * original.value(), atol=1 / 255)

    reread = read_manifest(os.path.join(out_dir, MANIFEST_NAME))
    assert [i.deform for i in reread] == [i.deform for i in derived]


def test_deform_suite_is_deterministic(manifest, tmp_path):
    first = deform_manifest(manifest, 'noisy', 2.0, str(tmp_path / 'a'), seed=4)
    second = deform_manifest(manifest, 'noisy', 2.0, str(tmp_path / 'b'), seed=4)
    for a, b in zip(first, second):
        assert a.deform['seed'] == 4
        assert np.array_equal(
            read_image(first.image_path(a)).data, read_image(second.image_path(b)).data
        )


def test_deform_suite_flags_skipped_samples(tmp_path):
    image = ImageBuffer(np.full((32, 32), 0.2), 'GRAY')
    write_image(str(tmp_path / 'images' / 'fg.png'), image)
    write_image(str(tmp_path / 'images' / 'bg.png'), image)
    manifest = DatasetManifest(
        root=str(tmp_path),
        records=[
            ManifestRecord(
                id='fg',
                path='images/fg.png',
                label='foreground',
                box=(0.25, 0.0, 0.25, 0.25),
            ),
            ManifestRecord(id='bg', path='images/bg.png', label='background'),
        ],
    )
    derived = deform_manifest(manifest, 'mirror', 0.0, str(tmp_path / 'out'))
    fg, bg = derived.records
    assert fg.deform['skipped'] == 'NoRoomAbove'
    assert 'skipped' not in bg.deform
    for record in derived:
        assert np.allclose(read_image(derived.image_path(record)).data, 0.2)


def test_deform_suite_unknown_op_over_manifest(manifest, tmp_path):
    with pytest.raises(exceptions.ConfigInvalid):
        deform_manifest(manifest, 'swirl', 1.0, str(tmp_path / 'out'))
