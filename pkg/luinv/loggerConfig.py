import logging
import os

import pandas as pd

from appConfig import app_config


class LogManager:
    def __init__(self, output_dir=app_config.output_dir):
        """
        Collects the application log and the per-case log of verification runs.

        Parameters:
        - output_dir (str): Directory receiving log files and case tables.
        """
        self.output_dir = output_dir
        if not os.path.exists(self.output_dir):
            os.makedirs(self.output_dir)

        self.case_log = os.path.join(self.output_dir, 'log_cases.csv')
        self.main_logger = None
        self.run_id = None
        self.cases = []

    def setup_logger(self, level=logging.DEBUG):
        """Setup main logger"""
        formatter = logging.Formatter('%(asctime)s - %(levelname)s  - %(message)s')
        self.main_logger = logging.getLogger('luinv')
        self.main_logger.setLevel(level)

        all_handler = logging.FileHandler(os.path.join(self.output_dir, 'luinv_all_logs.log'), mode='w')
        no_debug_handler = logging.FileHandler(os.path.join(self.output_dir, 'luinv_no_debug_logs.log'), mode='w')

        all_handler.setLevel(logging.DEBUG)
        no_debug_handler.setLevel(logging.INFO)

        all_handler.setFormatter(formatter)
        no_debug_handler.setFormatter(formatter)

        if self.main_logger.hasHandlers():
            self.main_logger.handlers.clear()

        self.main_logger.addHandler(all_handler)
        self.main_logger.addHandler(no_debug_handler)

    def set_run_info(self, run_id):
        """
        Set the identifier of the current command run; it is stamped on every case row.
        """
        self.run_id = run_id

    def log_case(self, check, case, seed, residual, details=None):
        """
        Record one case of a verification check.

        Parameters:
        - check (str): Name of the check, e.g. "check_invariance".
        - case (int): Index of the case inside the check.
        - seed (int): Seed that reproduces the inputs of the case.
        - residual (float): Residual observed for the case.
        - details (str): Free-form description of the inputs.
        """
        self.cases.append({
            'Run ID': self.run_id,
            'Check': check,
            'Case': case,
            'Seed': seed,
            'Residual': residual,
            'Details': details,
        })

    def get_case_log_df(self):
        """
        Return the case log as a pandas DataFrame
        """
        return pd.DataFrame(self.cases, columns=['Run ID', 'Check', 'Case', 'Seed', 'Residual', 'Details'])

    def save_to_csv(self, path=None):
        """
        Save the case log to a CSV file.
        """
        path = path or self.case_log
        self.get_case_log_df().to_csv(path, index=False)
        self.main_logger.info(f"Case log saved to {path}")
        return path

    def clear_cases(self):
        self.cases = []


log_manager = LogManager()
log_manager.setup_logger()
