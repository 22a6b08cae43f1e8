"""Random 2-complexes in the multi-parameter lower model, the subdivision
scheme with its mu-ratio checks, and embedding experiments for the torus."""

from .complex import (EMPTY, ComplexError, FVector, SimplicialComplex2, euler_characteristic,
                      external_set, f_vector, from_maximal_simplices, full_simplex,
                      is_closed_surface, mu)
from .domains import Domain, make_domain, open_mu, six_tuple, verify_lemma_01, verify_prop_u
from .embedding import (EmbeddingMap, HostIndex, SearchBudgetExceeded, TorusTriangulation,
                        count_embeddings, count_embeddings_bruteforce,
                        embedding_probability_upper_bound, expected_embedding_count,
                        find_embedding, is_simplicial_embedding, threshold_margin, torus_7,
                        torus_union_bound)
from .experiments import (ExperimentConfig, TrialRecord, emit_threshold_table,
                          run_expectation_check, run_mc_sweep, run_mu_study)
from .hexagon import (Hexagon, add_row, hexagon_fvector, isoperimetric_check,
                      shift_longest_side_inward)
from .minimize import MuMinResult, mu_min, mu_min_naive
from .model import (ProbabilityTriple, draw_coupled, enumerate_distribution, lower_complex,
                    probability_of, sample_X, sample_Y)
from .s2c import dumps, loads
from .subdivision import fvector_subdivided, subdivide_k, v_k_fvector, v_k_open

__version__ = "0.1.0"
