"""n-tape weighted finite-state machines with best-path search.

Core pieces: semiring weight algebras, the machine model with a text format,
the generalized trellis-and-heap best-path search with transduction, a word
aligner built on it, and independent oracles (input-tuple intersection with
classical shortest distance, the edit-distance matrix, classical HMM
decoding) that cross-validate the search.
"""

from .align import (
    Alignment,
    AlignerSpec,
    DEFAULT_MARKER,
    align_pair,
    build_aligner,
    strip_markers,
)
from .errors import (
    ArityMismatch,
    DanglingState,
    DimensionMismatch,
    DisconnectedPath,
    EpsilonCycle,
    ForbiddenEpsilonTransition,
    InvalidDistribution,
    MachineError,
    MachineSyntaxError,
    MarkerInAlphabet,
    NegativeCycle,
    NegativeWeight,
    NoAcceptingPath,
    UnboundOutputVar,
    UnknownSemiring,
    UnknownSymbol,
)
from .machine import (
    ALIGNED_EPS,
    EPSILON,
    Literal,
    NTapeMachine,
    Transition,
    Var,
    parse_machine,
    path_weight,
    validate,
    write_machine,
)
from .oracles import (
    EditMatrixResult,
    HmmModel,
    IntersectionMachine,
    bellman_ford,
    classical_viterbi,
    dijkstra,
    edit_distance_matrix,
    enumerate_paths,
    hmm_to_wfsm,
    intersect_with_tuple,
)
from .search import (
    BestPath,
    BinaryHeap,
    Match,
    PairingHeap,
    Transduction,
    best_transduction,
    fsa_viterbi,
    fsm_viterbi,
    match_transition,
    pointer_precedes,
)
from .semirings import (
    NULL,
    PROB_MAX,
    Semiring,
    TROPICAL_MAX,
    TROPICAL_MIN,
    semiring_by_name,
)

__version__ = "0.1.0"
