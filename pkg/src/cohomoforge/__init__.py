"""cohomoforge: exact low-degree cohomology of finite groups and Lie rings over F_p.

Finite groups are Cayley tables, modules are finite abelian groups with a
matrix action, and every answer is an invariant factor list computed by
exact integer arithmetic.  Theorem checkers report hypotheses, conclusions
and witnesses.
"""

from .abelian import FiniteAbelianGroup, smith_normal_form, subquotient
from .cohomology import (CohomologyGroup, ShortExactSequence, check_complex, check_long_exact,
                         cohomology_group, connecting_map, h1_der, h1_maps)
from .config import Limits, get_limits, limits_from_env, use_limits
from .errors import BudgetError, CohomoforgeError, SchemaError, UnknownCommand, ValidationError
from .gmodule import GModule, module_from_generators, trivial_module
from .groups import FiniteGroup, from_permutations, make_subgroup, validate_group
from .liering import (LieModule, LieRing, ce_cohomology, check_lie_inf_res, check_six_term, lie_h1_der,
                      validate_lie, validate_restricted)
from .theorems import (TheoremReport, maschke_report, schur_check, verify_frattini, verify_inf_res,
                       verify_nilpotent_vanishing)

__version__ = "0.1.0"
