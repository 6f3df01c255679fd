"""A-infinity algebras, morphisms, Hochschild cochains and homotopy transfer."""

from .core import *  # noqa: F401,F403
from .core import __all__ as _core_all
from .hochschild import *  # noqa: F401,F403
from .hochschild import __all__ as _hh_all
from .transfer import *  # noqa: F401,F403
from .transfer import __all__ as _tr_all
from .samples import *  # noqa: F401,F403
from .samples import __all__ as _sm_all

__all__ = _core_all + _hh_all + _tr_all + _sm_all
