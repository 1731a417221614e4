"""Arithmetic prime digraphs of finite permutation groups.

Compute the Gruenberg-Kegel, Hawkes, Sylow and Schmidt graphs of small
permutation groups, take class-level unions over corpora, probe closure
operators (S, Q, D0, R0, N0, EPhi), and verify the structural criteria the
graphs support (Sylow towers, solubility tests, Hall decompositions).
"""

from .arithgraph import (PrimeDigraph, SectionSelector, gk_graph,
                         hawkes_graph, schmidt_graph, schmidt_graph_bruteforce,
                         sylow_graph, theta_local_graph)
from .catalog import GroupSpec, build, schmidt_group
from .classgraph import (Corpus, GRAPH_FUNCTIONS, ClosureReport, SamplingPolicy,
                         closure_check, corpus_graph, recognition_probe,
                         x_gamma_member)
from .errors import (BudgetExceeded, DegreeMismatch, GroupError, InvalidSpec,
                     NotAMember, NotFound, NotNormal, NotSolubleAndTooLarge,
                     ParseError, PrimeNotDividing, SelectorUndefined,
                     ThresholdExceeded)
from .permcore import (FiniteGroup, Permutation, SubgroupRef, direct_product,
                       element_order, group_from_generators, quotient_group,
                       subgroup_generated)
from .structure import (CoreTriple, SeriesReport, centralizer, cores,
                        derived_series, frattini_subgroup, hall_subgroup,
                        is_nilpotent, is_soluble, normal_subgroups, normalizer,
                        sylow_subgroup)
from .theorems import (TheoremVerdict, coprime_triple_check,
                       direct_decomposition_check, hall_normal_check,
                       minimal_simple_graph_check, solubility_criteria,
                       sylow_tower_check)

__version__ = "0.1.0"
