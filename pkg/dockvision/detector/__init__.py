from dockvision.detector.checkpoint import load_checkpoint, save_checkpoint
from dockvision.detector.encoding import (
    Detection,
    GridEncoding,
    decode_prediction,
    encode_target,
    iou,
)
from dockvision.detector.inference import detect
from dockvision.detector.loss import LossTerms, LossWeights, loss
from dockvision.detector.network import NetArch, TinyNet
from dockvision.detector.train import EpochLoss, SgdSettings, TrainResult, train

__all__ = [
    'Detection',
    'EpochLoss',
    'GridEncoding',
    'LossTerms',
    'LossWeights',
    'NetArch',
    'SgdSettings',
    'TinyNet',
    'TrainResult',
    'decode_prediction',
    'detect',
    'encode_target',
    'iou',
    'load_checkpoint',
    'loss',
    'save_checkpoint',
    'train',
]
