import numpy as np
import pytest

from dockvision import exceptions
from dockvision.image import ImageBuffer


def test_image_gray_promoted_to_three_dimensions():
    image = ImageBuffer(np.zeros((4, 5)), 'GRAY')
    assert image.shape == (4, 5)
    assert image.channels == 1


@pytest.mark.parametrize(
    'data,color_space',
    [(np.zeros((4, 4, 1)), 'RGB'), (np.zeros((4, 4, 3)), 'GRAY'), (np.zeros(4), 'RGB')],
)
def test_image_shape_mismatch(data, color_space):
    with pytest.raises(exceptions.ShapeMismatch):
        ImageBuffer(data, color_space)


def test_image_non_finite():
    data = np.zeros((2, 2, 3))
    data[0, 0, 0] = np.nan
    with pytest.raises(exceptions.NonFiniteInput):
        ImageBuffer(data)


def test_image_hsv_round_trip(rng):
    image = ImageBuffer(rng.uniform(size=(8, 8, 3)))
    back = image.to_hsv().to_rgb()
    assert np.allclose(back.data, image.data, atol=1e-12)


def test_image_value_is_channel_max(rng):
    data = rng.uniform(size=(3, 3, 3))
    image = ImageBuffer(data)
    assert np.allclose(image.value(), data.max(axis=2))
    assert np.allclose(image.to_hsv().value(), data.max(axis=2))


def test_image_gray_to_rgb_and_back():
    gray = ImageBuffer(np.full((2, 3, 1), 0.4), 'GRAY')
    rgb = gray.to_rgb()
    assert rgb.channels == 3
    assert np.allclose(rgb.to_gray().data, gray.data)


def test_image_crop_copies():
    image = ImageBuffer(np.arange(16, dtype=float).reshape(4, 4) / 16, 'GRAY')
    patch = image.crop(1, 2, 2, 2)
    assert patch.shape == (2, 2)
    assert patch.data[0, 0, 0] == image.data[1, 2, 0]
    patch.data[0, 0, 0] = 0.99
    assert image.data[1, 2, 0] != 0.99
