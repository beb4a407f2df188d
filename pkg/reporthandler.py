import logging
import os

import pandas as pd

REPORT_COLUMNS = ["case", "suite", "n", "degree", "passed", "detail"]


class ReportHandler:
    """Class to store selftest tables as CSV files."""

    def __init__(self, file_path: str, delimiter: str = ",") -> None:
        """
        Initialize the ReportHandler.

        Args:
            file_path (str): Path to the CSV file.
            delimiter (str): Delimiter used in the CSV file.
        """
        assert isinstance(file_path, str), "file_path must be a string."
        assert isinstance(delimiter, str), "delimiter must be a string."

        self.file_path = file_path
        self.delimiter = delimiter
        self.dataframe = None
        self.logger = logging.getLogger(__name__)

    def save_report(self, df: pd.DataFrame) -> None:
        """
        Save a selftest table, creating the parent directory when needed.

        Args:
            df (DataFrame): Table with the report columns.
        """
        assert isinstance(df, pd.DataFrame), "df must be a DataFrame."
        missing = [c for c in REPORT_COLUMNS if c not in df.columns]
        assert not missing, f"report is missing columns {missing}."

        folder = os.path.dirname(self.file_path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        df.to_csv(self.file_path, sep=self.delimiter, index=False)
        self.dataframe = df
        self.logger.info(f"Saved selftest report with {len(df)} rows to {self.file_path}")

    def read_report(self) -> pd.DataFrame:
        """
        Read a selftest table back.

        Returns:
            DataFrame: The table, with `passed` as booleans.
        """
        self.dataframe = pd.read_csv(self.file_path, sep=self.delimiter, dtype={"detail": str})
        self.dataframe["passed"] = self.dataframe["passed"].astype(bool)
        self.logger.info(f"Read selftest report from {self.file_path}")
        return self.dataframe

    def append_report(self, df: pd.DataFrame) -> None:
        """
        Append rows to an existing report, or create it.

        Args:
            df (DataFrame): Rows to append.
        """
        assert isinstance(df, pd.DataFrame), "df must be a DataFrame."
        if not os.path.isfile(self.file_path):
            self.save_report(df)
            return
        df.to_csv(self.file_path, mode="a", header=False, sep=self.delimiter, index=False)
        if self.dataframe is not None:
            self.dataframe = pd.concat([self.dataframe, df], ignore_index=True)
        else:
            self.dataframe = df
        self.logger.info(f"Appended {len(df)} rows to {self.file_path}")

    def failures(self) -> pd.DataFrame:
        """Rows of the loaded report that did not pass."""
        assert self.dataframe is not None, "no report loaded."
        return self.dataframe[~self.dataframe["passed"]]
