import json
import os


class AppConfig:
    # ====================
    # VERSION
    # ====================
    VERSION = "1.0.0"

    # ====================
    # SETTINGS FILE
    # ====================
    # Budgets, seeds and tolerances are read from input/settings.json so they can be changed without touching code
    base_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    settings_path = os.path.join(base_dir, "input", "settings.json")
    output_dir = os.path.join(base_dir, "output")

    with open(settings_path) as file:
        SETTINGS = json.load(file)

    # ====================
    # RANDOMNESS AND BUDGETS
    # ====================
    DEFAULT_SEED = SETTINGS["seed"]
    ENUMERATION_BUDGET = SETTINGS["enumeration_budget"]  # cap on enumeration_cost(m, k-1)
    CONTRACTION_BUDGET = SETTINGS["contraction_budget"]  # cap on index assignments of one evaluation

    # ====================
    # NUMERICAL CHECKS
    # ====================
    TOLERANCES = SETTINGS["tolerances"]
    VALUES_RANK_THRESHOLD = SETTINGS["rank_thresholds"]["values"]
    JACOBIAN_RANK_THRESHOLD = SETTINGS["rank_thresholds"]["jacobian"]
    FINITE_DIFFERENCE_STEP = SETTINGS["finite_difference_step"]

    # ====================
    # COUNTING DEFAULTS
    # ====================
    # Largest degree of count tables; the enumeration cross-check stops at the budget
    DEFAULT_MAX_M = {int(k): v for k, v in SETTINGS["default_max_m"].items()}

    def tolerance(self, name, override=None):
        """
        Return the tolerance of a check.

        Parameters:
        - name (str): Check name as used in settings.json, e.g. "invariance".
        - override (float): Value given on the command line, takes precedence.

        Returns:
        - float: The tolerance to apply.
        """
        if override is not None:
            return float(override)
        return float(self.TOLERANCES[name])

    def default_max_m(self, k):
        """
        Return the default largest degree for count tables of a k-partite system.
        """
        return self.DEFAULT_MAX_M.get(k, min(self.DEFAULT_MAX_M.values()))


app_config = AppConfig()
