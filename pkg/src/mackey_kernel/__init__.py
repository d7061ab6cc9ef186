"""Exact span and biset calculus of finite groupoids."""

from .groupoids import (Budget, FiniteGroupoid, GroupoidFunctor,
                        IsoCommaResult, NatTransformation,
                        SearchBudgetExceeded, connected_components,
                        disjoint_union, enumerate_nat_transfs, functor_iso,
                        identity_functor, is_faithful, is_mackey_square,
                        iso_comma, skeleton)
from .groups import build_group, named_group, named_group_names
from .linear import LinComb, ring_by_name
from .spans import (BasisKey, SixForm, Span, SpannablePair, add,
                    canonical_form, check_spannable, compose_spans,
                    hom_basis, named_pair, span_equivalent, zero)
from .words import Word, normalize_word, word
from .bisets import (Biset, FiveForm, biset_iso, biset_tensor,
                     bouc_canonical_form, double_burnside_table,
                     elementary_biset_defl, elementary_biset_ind,
                     elementary_biset_infl, elementary_biset_iso,
                     elementary_biset_res, is_bifree, is_right_free,
                     transitive_decomposition)
from .realization import (check_functorial, check_restricted_iso,
                          kernel_witness, realize, section)
from .gsets import (GMap, GSet, TwistingMap, burnside_table,
                    check_fused_pullback_mackey,
                    check_transport_mackey_preservation, fused_gmap_related,
                    fused_span_equivalent, nat_to_twist, orbit_decomposition,
                    pullback_gsets, transport_2cell, transport_functor,
                    transport_groupoid)

__version__ = "0.1.0"
