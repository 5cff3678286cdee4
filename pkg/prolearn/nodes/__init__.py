from .assessor import Assessor
from .emitter import Emitter, emit_plot_data
from .loader import ConfigLoader
from .simulator import Simulator, simulate_run

__all__ = ["Assessor", "ConfigLoader", "Emitter", "Simulator", "emit_plot_data", "simulate_run"]
