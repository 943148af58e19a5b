"""Motion planning through gadgets: model, classify, solve and reduce."""

from .core import (
    Configuration,
    Gadget,
    Instance,
    Move,
    MovePath,
    System,
    SystemBuilder,
    configuration_graph,
    make_gadget,
    step,
    tunnel_decomposition,
)

__version__ = "0.1.0"
