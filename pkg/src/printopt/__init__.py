"""printopt: evidence-driven selection of FDM print configurations.

A fast approximate evaluator scores a print configuration against a part
(print time, material cost, predicted quality failures), and a guided
Bayesian optimizer searches the configuration space, optionally steered
by structured corrective advice compiled into soft and hard constraints.
"""

from .configspace import PrintConfig, default_config
from .errors import PrintOptError

__version__ = "0.1.0"

__all__ = ["PrintConfig", "PrintOptError", "default_config", "__version__"]
