import numpy as np
import pytest

from dockvision import exceptions
from dockvision.deform import estimate_gamma, estimate_lambda, gamma_contrast, hsv_shift
from dockvision.image import ImageBuffer


@pytest.fixture
def image(rng):
    return ImageBuffer(rng.uniform(0.05, 0.95, size=(24, 24, 3)))


@pytest.mark.parametrize('channel', ['H', 'S', 'V'])
def test_deform_color_unit_lambda_is_identity(image, channel):
    out = hsv_shift(image, channel, 1.0)
    assert out.color_space == 'RGB'
    assert np.allclose(out.data, image.data, rtol=0, atol=1e-6)


def test_deform_color_gray_ignores_saturation():
    img = ImageBuffer(np.full((4, 4, 3), 0.6))
    out = hsv_shift(img, 'S', 0.5)
    assert np.allclose(out.data, 0.6, rtol=0, atol=1e-12)


def test_deform_color_value_halves_red():
    img = ImageBuffer(np.tile([1.0, 0.0, 0.0], (2, 2, 1)))
    out = hsv_shift(img, 'V', 0.5)
    assert np.allclose(out.data, [0.5, 0.0, 0.0], rtol=0, atol=1e-12)


def test_deform_color_hue_wraps():
    img = ImageBuffer(np.array([[[0.8, 0.5, 0.5]]]), 'HSV')
    out = hsv_shift(img, 'H', 1.5)
    assert out.color_space == 'HSV'
    assert out.data[0, 0, 0] == pytest.approx(0.2)
    assert out.data[0, 0, 1:] == pytest.approx([0.5, 0.5])


def test_deform_color_saturation_and_value_clamp():
    img = ImageBuffer(np.array([[[0.1, 0.8, 0.8]]]), 'HSV')
    assert hsv_shift(img, 'S', 2.0).data[0, 0, 1] == 1.0
    assert hsv_shift(img, 'V', 2.0).data[0, 0, 2] == 1.0


@pytest.mark.parametrize('lambda_p', [0.0, -0.5])
def test_deform_color_lambda_must_be_positive(image, lambda_p):
    with pytest.raises(exceptions.PreconditionViolation):
        hsv_shift(image, 'V', lambda_p)


@pytest.mark.parametrize('channel', ['H', 'S', 'V'])
@pytest.mark.parametrize('lambda_p', [0.5, 0.7, 0.9])
def test_deform_color_lambda_is_recovered(image, channel, lambda_p):
    shifted = hsv_shift(image, channel, lambda_p)
    assert estimate_lambda(image, shifted, channel) == pytest.approx(
        lambda_p, rel=0.02
    )


def test_deform_color_identical_images_give_unit_lambda(image):
    assert estimate_lambda(image, image, 'V') == pytest.approx(1.0)


def test_deform_color_black_image_excluded():
    black = ImageBuffer(np.zeros((4, 4, 3)))
    with pytest.raises(exceptions.AllPixelsExcluded):
        estimate_lambda(black, black, 'V')


def test_deform_color_estimators_need_equal_shapes(image):
    other = ImageBuffer(np.full((12, 24, 3), 0.5))
    with pytest.raises(exceptions.ShapeMismatch):
        estimate_lambda(image, other, 'V')
    with pytest.raises(exceptions.ShapeMismatch):
        estimate_gamma(image, other)


def test_deform_color_unit_gamma_is_identity(image):
    assert np.allclose(gamma_contrast(image, 1.0).data, image.data, atol=1e-12)


def test_deform_color_gamma_squares():
    img = ImageBuffer(np.full((2, 2), 0.25), 'GRAY')
    assert np.allclose(gamma_contrast(img, 2.0).data, 0.0625, rtol=0, atol=1e-12)


def test_deform_color_gamma_round_trip(image):
    out = gamma_contrast(gamma_contrast(image, 0.5), 2.0)
    assert np.allclose(out.data, image.data, rtol=0, atol=1e-9)


def test_deform_color_gamma_keeps_hsv(image):
    out = gamma_contrast(image.to_hsv(), 1.5)
    assert out.color_space == 'HSV'
    expected = gamma_contrast(image, 1.5).to_hsv()
    assert np.allclose(out.data, expected.data, atol=1e-9)


@pytest.mark.parametrize('gamma', [0.0, -2.0])
def test_deform_color_gamma_must_be_positive(image, gamma):
    with pytest.raises(exceptions.PreconditionViolation):
        gamma_contrast(image, gamma)


@pytest.mark.parametrize('gamma', [0.4, 1.5, 3.0])
def test_deform_color_gamma_is_recovered(image, gamma):
    assert estimate_gamma(image, gamma_contrast(image, gamma)) == pytest.approx(
        gamma, rel=0.02
    )


def test_deform_color_identical_images_give_unit_gamma(image):
    assert estimate_gamma(image, image) == pytest.approx(1.0)


def test_deform_color_white_image_excluded():
    white = ImageBuffer(np.ones((4, 4, 3)))
    with pytest.raises(exceptions.AllPixelsExcluded):
        estimate_gamma(white, white)
