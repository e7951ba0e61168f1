import json

import numpy as np
import pytest

from dockvision import exceptions
from dockvision.detector import (
    NetArch,
    SgdSettings,
    TinyNet,
    detect,
    load_checkpoint,
    save_checkpoint,
    train,
)
from dockvision.scene import DatasetManifest, generate_dataset
from dockvision.utils.files import read_csv
from dockvision.utils.images import read_image


def _dataset(config, out_dir, n_fg, n_bg):
    return generate_dataset(
        n_fg,
        n_bg,
        config.poses,
        config.render,
        str(out_dir),
        layout=config.layout,
        intr=config.camera,
        seed=config.seed,
        distractors=1,
    )


@pytest.fixture
def manifest(small_config, tmp_path):
    return _dataset(small_config, tmp_path / 'data', 4, 4)


def test_detector_train_zero_learning_rate(small_config, manifest):
    net = TinyNet(small_config.net_arch(), seed=1)
    before = net.params.copy()
    result = train(net, manifest, small_config.loss, SgdSettings(lr=0.0, epochs=2))
    assert np.array_equal(result.net.params, before)
    assert len(result.curve) == 2


def test_detector_train_is_deterministic(small_config, manifest):
    sgd = SgdSettings(lr=0.01, epochs=2, batch=3, seed=4)
    arch, weights = small_config.net_arch(), small_config.loss
    first = train(TinyNet(arch, seed=4), manifest, weights, sgd)
    second = train(TinyNet(arch, seed=4), manifest, weights, sgd)
    assert np.array_equal(first.net.params, second.net.params)
    assert [i.total for i in first.curve] == [i.total for i in second.curve]


def test_detector_train_learning_rate_steps(small_config, manifest):
    sgd = SgdSettings(lr=0.1, lr_steps=[2, 4])
    assert [sgd.lr_at(i) for i in range(1, 6)] == pytest.approx(
        [0.1, 0.1, 0.01, 0.01, 0.001]
    )

    arch, weights = small_config.net_arch(), small_config.loss
    stepped = SgdSettings(lr=0.02, lr_steps=[0], lr_drop=0.5, epochs=2, seed=1)
    flat = SgdSettings(lr=0.01, epochs=2, seed=1)
    first = train(TinyNet(arch, seed=2), manifest, weights, stepped)
    second = train(TinyNet(arch, seed=2), manifest, weights, flat)
    assert np.array_equal(first.net.params, second.net.params)


def test_detector_train_writes_loss_curve(small_config, manifest, tmp_path):
    path = str(tmp_path / 'loss.csv')
    net = TinyNet(small_config.net_arch())
    sgd = SgdSettings(epochs=3, batch=4)
    train(net, manifest, small_config.loss, sgd, curve_path=path)
    rows = read_csv(path)
    assert [int(i['epoch']) for i in rows] == [1, 2, 3]
    assert set(rows[0]) == {'epoch', 'l_B', 'l_d', 'l_dbar', 'total'}
    with open(path) as f:
        assert f.readline().startswith('# schema_version=')


def test_detector_train_overfits_one_sample(small_config, tmp_path):
    manifest = _dataset(small_config, tmp_path / 'one', 1, 0)
    arch = NetArch(input_size=32, channels=3, filters=[4, 8], dense=[16], G=2, B=1)
    sgd = SgdSettings(lr=0.05, momentum=0.9, epochs=400, batch=1, seed=0)
    result = train(TinyNet(arch, seed=0), manifest, small_config.loss, sgd)
    assert result.curve[-1].total < 0.01 * result.curve[0].total


def test_detector_train_divergence(small_config, manifest):
    net = TinyNet(small_config.net_arch())
    net.params[0] = np.nan
    with pytest.raises(exceptions.DivergenceDetected):
        train(net, manifest, small_config.loss, SgdSettings(epochs=1))


def test_detector_train_empty_manifest(small_config, tmp_path):
    empty = DatasetManifest(root=str(tmp_path), records=[])
    with pytest.raises(exceptions.PreconditionViolation):
        train(TinyNet(small_config.net_arch()), empty, small_config.loss, SgdSettings())


def test_detector_checkpoint_round_trip(small_config, tmp_path):
    net = TinyNet(small_config.net_arch(), seed=8)
    path = str(tmp_path / 'ckpt' / 'net.json')
    save_checkpoint(path, net)
    again = load_checkpoint(path)
    assert again.arch == net.arch
    assert np.array_equal(again.params, net.params)
    x = np.random.default_rng(0).uniform(size=(1, 32, 32, 3))
    assert np.array_equal(again.forward(x), net.forward(x))


def test_detector_checkpoint_schema_version(small_config, tmp_path):
    path = tmp_path / 'net.json'
    save_checkpoint(str(path), TinyNet(small_config.net_arch()))
    blob = json.loads(path.read_text())
    blob['schema_version'] = 99
    path.write_text(json.dumps(blob))
    with pytest.raises(exceptions.IoFailure):
        load_checkpoint(str(path))


@pytest.mark.parametrize('content', ['{}', '{"schema_version": 1}', 'not json'])
def test_detector_checkpoint_malformed(tmp_path, content):
    path = tmp_path / 'net.json'
    path.write_text(content)
    with pytest.raises(exceptions.IoFailure):
        load_checkpoint(str(path))


def test_detector_checkpoint_missing(tmp_path):
    with pytest.raises(exceptions.IoFailure):
        load_checkpoint(str(tmp_path / 'nothing.json'))


def test_detector_inference_batches_agree(small_config, manifest):
    net = TinyNet(small_config.net_arch(), seed=2)
    images = [read_image(manifest.image_path(i)) for i in manifest]
    whole = detect(net, images)
    chunked = detect(net, images, batch=3)
    assert len(whole) == len(manifest)
    for a, b in zip(whole, chunked):
        assert a.box == pytest.approx(b.box, abs=1e-12)
        assert a.confidence == pytest.approx(b.confidence, abs=1e-12)
        assert 0 < a.confidence < 1
