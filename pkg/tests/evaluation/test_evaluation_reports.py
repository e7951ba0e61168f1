import json

import pytest

from dockvision.evaluation import (
    ScoredDetection,
    pose_errors,
    roc_curve,
    write_pose_json,
    write_roc_csv,
    write_roc_points,
    write_summary_json,
)
from dockvision.scene import Pose
from dockvision.types import SCHEMA_VERSION
from dockvision.utils.files import read_csv

GT = (0.25, 0.25, 0.5, 0.5)


@pytest.fixture
def curve():
    return roc_curve(
        [
            ScoredDetection('fg-0', GT, 0.9, gt_box=GT),
            ScoredDetection('fg-1', GT, 0.4, gt_box=GT),
            ScoredDetection('bg-0', GT, 0.6),
            ScoredDetection('bg-1', GT, 0.1),
        ]
    )


def test_evaluation_reports_roc_csv(curve, tmp_path):
    path = tmp_path / 'reports' / 'roc.csv'
    write_roc_csv(str(path), curve)
    assert path.read_text().splitlines()[0] == f'# schema_version={SCHEMA_VERSION}'
    rows = read_csv(str(path))
    assert list(rows[0]) == ['threshold', 'TP', 'FP', 'TN', 'FN', 'TPR', 'FPR']
    assert len(rows) == len(curve.points)
    assert rows[0]['threshold'] == 'inf'
    assert rows[-1]['threshold'] == '-inf'
    assert [float(i['TPR']) for i in rows] == list(curve.tpr)


def test_evaluation_reports_summary_json(curve, tmp_path):
    path = tmp_path / 'summary.json'
    write_summary_json(str(path), curve, extra={'iou_threshold': 0.5})
    summary = json.loads(path.read_text())
    assert summary == {
        'auc': pytest.approx(0.75),
        'n_pos': 2,
        'n_neg': 2,
        'iou_threshold': 0.5,
        'schema_version': SCHEMA_VERSION,
    }


def test_evaluation_reports_roc_points(curve, tmp_path):
    path = tmp_path / 'points.csv'
    write_roc_points(str(path), curve)
    rows = read_csv(str(path))
    assert list(rows[0]) == ['FPR', 'TPR']
    assert (rows[-1]['FPR'], rows[-1]['TPR']) == ('1.0', '1.0')


def test_evaluation_reports_pose_json(tmp_path):
    truth = Pose.identity(3000.0)
    estimate = Pose.identity(3010.0)
    path = tmp_path / 'pose.json'
    write_pose_json(str(path), pose_errors([(estimate, truth)]), extra={'sigma': 3})
    summary = json.loads(path.read_text())
    assert summary['mean_position_mm'] == pytest.approx(10.0)
    assert summary['sigma'] == 3
    assert summary['schema_version'] == SCHEMA_VERSION
