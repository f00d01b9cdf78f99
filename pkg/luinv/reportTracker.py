import json
import os

import pandas as pd

from appConfig import app_config
from loggerConfig import log_manager


class ReportTracker:
    def __init__(self, output_dir=app_config.output_dir):
        """
        This class is used to collect the reports of a verification run.

        Parameters
        output_dir(str): Directory receiving the summary files.
        """
        self.summary_csv = os.path.join(output_dir, 'summary_checks.csv')
        self.summary_json = os.path.join(output_dir, 'summary_checks.json')
        self.reports = []

        self.summary = {
            'Check': [],
            'Passed': [],
            'Max Residual': [],
            'Tolerance': [],
            'Exact': [],
            'Cases': [],
            'Notes': [],
        }

    def store_report(self, report):
        """
        Store one CheckReport.
        """
        self.reports.append(report)
        self.summary['Check'].append(report.name)
        self.summary['Passed'].append(bool(report.passed))
        self.summary['Max Residual'].append(report.max_residual)
        self.summary['Tolerance'].append(report.tolerance)
        self.summary['Exact'].append(report.exact)
        self.summary['Cases'].append(len(report.details))
        self.summary['Notes'].append(report.notes)
        log_manager.main_logger.info(f"Stored report {report.name}: passed={report.passed}")

    def store_reports(self, reports):
        for report in reports:
            self.store_report(report)

    def all_passed(self):
        return all(report.passed for report in self.reports)

    def to_frame(self):
        return pd.DataFrame(self.summary)

    def to_json(self, header=None):
        return {"header": header or {}, "passed": self.all_passed(), "reports": [r.to_json() for r in self.reports]}

    def save(self, header=None, json_path=None):
        """
        Save the summary table to CSV and the full reports to JSON.

        Returns:
        - str: Path of the JSON file.
        """
        json_path = json_path or self.summary_json
        self.to_frame().to_csv(self.summary_csv, index=False)
        with open(json_path, 'w') as file:
            json.dump(self.to_json(header), file, indent=2)
        log_manager.main_logger.info(f"Results saved to {self.summary_csv} and {json_path}")
        return json_path

    def render_table(self):
        df = self.to_frame()
        if df.empty:
            return "(no checks run)"
        df['Max Residual'] = df['Max Residual'].map(lambda x: f"{x:.3e}")
        df['Tolerance'] = df['Tolerance'].map(lambda x: f"{x:.1e}")
        return df.drop(columns=['Notes']).to_string(index=False)
