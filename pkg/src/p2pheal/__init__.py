"""Targeted attacks, stretch healing and reverse-percolation repair on power-law overlays.

Modules
-------
graph       simple graph with degree-proportional sampling, generators, census, edge-list IO
powerlaw    discrete maximum-likelihood power-law fits
attack      top-degree, degree-targeted and uniform peer removal
healing     stretch healing and the edge-loss feedback trigger
churn       growth / preferential deletion / compensation model
genfunc     generating functions of attacked degree laws and giant-component criteria
restore     reconnection of fragments by random stub matching
experiment  multi-trial scenarios and reproduction sweeps
cli         command-line interface
"""
from .attack import (AttackReport, AttackSpec, EdgeLossEvent, attack_degree_targeted, attack_top_degree,
                     attack_uniform, edge_loss_closed_form, edge_loss_probability)
from .churn import ChurnResult, ChurnSpec, churn_step, run_churn
from .errors import (ConfigError, DegenerateDistributionError, EmptyGraphError, InsufficientDataError,
                     InvalidDistributionError, InvalidParameterError, P2PHealError, UnknownPeerError)
from .genfunc import (BETA_C, CriterionResult, GenFunc, OccupationModel, derivative_at_1, g0_from, g1_from,
                      giant_component_criterion, molloy_reed_check, powerlaw_pk, predicted_giant_fraction,
                      sample_occupied_graph)
from .graph import (ComponentCensus, DegreeHistogram, Graph, component_census, configuration_graph,
                    generate_powerlaw_config, generate_preferential, preferential_sample, read_edgelist,
                    write_edgelist)
from .healing import HealReport, HealSpec, compute_f, feedback_heal, heal_stretch
from .powerlaw import PowerLawFit, fit_powerlaw
from .restore import (RestoreReport, RestoreSpec, ThresholdEstimate, fragmented_graph, giant_fraction,
                      percolation_threshold, restore_connect)

__version__ = "0.1.0"
