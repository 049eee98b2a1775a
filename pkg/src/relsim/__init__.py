"""Recovery-language toolchain and simulated fault-tolerant run-time.

Subpackages:

* ``relsim.ariel``    -- ARIEL lexer, parser, r-code compiler and binary codec
* ``relsim.vm``       -- the RINT interpreter for r-code
* ``relsim.backbone`` -- replicated notification database, TOM, alpha-count
* ``relsim.tools``    -- watchdog, exception reporter, majority voter
* ``relsim.sim``      -- deterministic discrete-event world
"""

from relsim.entities import EntityKind, EntityRef, ErrorClass, PredKind, Verb

__all__ = ["EntityKind", "EntityRef", "ErrorClass", "PredKind", "Verb"]
__version__ = "0.1.0"
