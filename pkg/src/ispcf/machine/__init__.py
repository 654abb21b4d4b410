from .engine import (
    Budgets, State, StepOutcome, RunResult, MachineError, classify,
    step_det, step_seeded, run_seeded, term_value, underline, is_literal,
)
from .enumeration import (
    discretize, enumerate_mass, normal_form_key, level_cells,
    BranchExplosion,
)
from .events import parse_event, EventPredicate, EventSyntaxError, EVENT_ALL
from .estimate import mc_estimate, extract_reals, standard_error, worker_cap
