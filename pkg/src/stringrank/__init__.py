"""Exact rank functions and limits of modules over string algebras.

Submodules: ``gf`` (finite fields and linear algebra), ``algebra`` (string
algebras and R-matrices), ``modules`` (string, band and raw modules),
``rank`` (normalized ranks and audits), ``pp`` (pp-formulas), ``strings``
(string graphs and local statistics), ``limitlab`` (tilings and
epsilon-isomorphisms), ``params`` (module parameters and the tester) and
``cli``.
"""

__version__ = "0.1.0"

from .errors import BudgetError, ParseError, PreconditionError, StringRankError  # noqa: E402,F401
