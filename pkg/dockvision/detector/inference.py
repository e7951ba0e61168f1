import numpy as np

from dockvision.detector.encoding import Detection, decode_prediction
from dockvision.detector.network import TinyNet
from dockvision.image import ImageBuffer


def detect(
    net: TinyNet, images: list[ImageBuffer], batch: int = 32
) -> list[Detection]:
    """Batched forward pass and decoding, one detection per image."""
    detections = []
    for start in range(0, len(images), batch):
        chunk = images[start : start + batch]
        pred = net.forward(np.stack([i.data for i in chunk]))
        for image, tensor in zip(chunk, pred):
            detections.append(decode_prediction(tensor, image.width, image.height))
    return detections
