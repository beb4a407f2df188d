import pandas as pd
import pytest

from reporthandler import REPORT_COLUMNS, ReportHandler


@pytest.fixture
def table():
    return pd.DataFrame(
        [
            {"case": 0, "suite": "bcw", "n": 2, "degree": 4, "passed": True, "detail": "d=2 inverse=True a=H:True"},
            {"case": 0, "suite": "parity", "n": 2, "degree": 4, "passed": False, "detail": "odd=False"},
        ],
        columns=REPORT_COLUMNS,
    )


def test_save_and_read(tmp_path, table):
    path = str(tmp_path / "nested" / "report.csv")
    ReportHandler(path).save_report(table)
    frame = ReportHandler(path).read_report()
    assert list(frame.columns) == REPORT_COLUMNS
    assert frame["passed"].tolist() == [True, False]
    assert frame["detail"].tolist() == table["detail"].tolist()


def test_failures(tmp_path, table):
    handler = ReportHandler(str(tmp_path / "report.csv"))
    handler.save_report(table)
    assert handler.failures()["suite"].tolist() == ["parity"]


def test_append(tmp_path, table):
    path = str(tmp_path / "report.csv")
    handler = ReportHandler(path, delimiter=";")
    handler.append_report(table)
    handler.append_report(table)
    assert len(ReportHandler(path, delimiter=";").read_report()) == 4


def test_missing_columns_are_rejected(tmp_path):
    with pytest.raises(AssertionError):
        ReportHandler(str(tmp_path / "r.csv")).save_report(pd.DataFrame({"case": [0]}))
