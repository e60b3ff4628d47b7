"""bridgescript: an embeddable scripting language with a reflective
bridge to a statically typed host object system.

Scripts call host objects through proxy tables whose missing-key
fallbacks resolve members on demand and cache method dispatchers; host
code calls script tables through wrappers typed as a host interface or
class.  See README.md for the tour.
"""

from .demo import build_demo_interpreter, build_demo_registry
from .errors import BridgeScriptError
from .interp import Interpreter, eval_chunk
from .registry import HostClassDescriptor, HostRegistry

__version__ = "0.1.0"

__all__ = [
    "BridgeScriptError",
    "HostClassDescriptor",
    "HostRegistry",
    "Interpreter",
    "build_demo_interpreter",
    "build_demo_registry",
    "eval_chunk",
    "__version__",
]
