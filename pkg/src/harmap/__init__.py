"""Harmonic maps between surfaces built from elliptic sinh-Gordon solutions.

Submodules: ``elliptic``, ``soliton``, ``mapgen``, ``beltrami_pde``,
``verify``, ``catalog``, ``backlund`` and the command line in ``cli``.
"""

__version__ = "0.1.0"
