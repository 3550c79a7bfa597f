"""Repair conjunctive queries so that they fit labeled data examples."""
from .errors import (ArityMismatch, ConstantNotSupported, CQRepairError, EmptyList, EmptyPositives,
                     EmptySchema, InvalidDistribution, NoFittingExists, ParseError,
                     RepeatedHeadVariables, SafetyViolation, SchemaMismatch, SearchTimeout,
                     UnknownRelation)
from .model import CQ, Atom, DataExample, LabeledExampleSet, Schema, VarMapping, atom, common_schema
from .syntax import (from_json, parse_cq, parse_example, parse_facts, parse_instance, parse_labeled,
                     parse_mu, parse_schema, serialize, serialize_cq, serialize_example,
                     serialize_labeled, to_json)
from .hom import (contained, equivalent, evaluate, find_homomorphism, fits, fits_all,
                  hom_equivalent, iter_homomorphisms, maps_to, member, strictly_contained)
from .canon import canonical_form, canonical_labeling, certificate, isomorphic
from .cores import core_cq, core_example, is_core
from .structure import (canonical_cq, canonical_example, conjunction, direct_product,
                        maximally_constrained, minimally_constrained_set, normalize_head,
                        product_all, quotient, restore_head)
from .enumerate import count_cqs, enumerate_cqs, set_partitions
from .fitting import (BoundedVerdict, bounded_size_fitting, fitting_below_exists,
                      fitting_candidates, fitting_exists, most_specific_fitting,
                      repetition_free_fitting_exists, wmg_fitting_construct, wmg_fitting_verify)
from .metrics import (ExampleDistribution, dist_preorder_leq, distance, edit_dist, edit_dist_leq,
                      mu_dist, sdi_dist, sdq_dist, smallest_distinguishing_instance,
                      smallest_distinguishing_query)
from .results import RepairResult, ResultItem
from .cod import (cod_generalization_as_repair, cod_generalization_construct,
                  cod_generalization_exists, cod_generalization_verify, cod_leq, cod_repair_construct,
                  cod_repair_exists, cod_repair_verify, cod_specialization_construct,
                  cod_specialization_exists, cod_specialization_verify, hat_negatives,
                  positive_repair_condition, wmg_as_specialization)
from .distrepair import (edit_bounded_fitting, edit_repair_construct, edit_repair_exists,
                         edit_repair_verify, generic_dist_repair)
from .limits import time_limit

__version__ = "0.1.0"
