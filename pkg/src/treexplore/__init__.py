"""Simulator and verification harness for adversarial multi-agent tree exploration."""

from .adversary import (
    AdversaryParams,
    Alpha,
    CheckpointRecord,
    CheckpointRevealer,
    FixedTreeRevealer,
    branch_agent_count,
    checkpoint_candidates,
    derive_params,
    fixed_tree_revealer,
    gadget_spec,
    max_team_size,
    select_targets,
)
from .game import (
    Attachment,
    ExplorerView,
    GameState,
    Outcome,
    RoundRecord,
    Transcript,
    apply_round,
    initial_tree_of,
    is_explored,
    play,
    replay_transcript,
    transcript_from_json,
    transcript_to_json,
    validate_moves,
)
from .offline import (
    BoundsReport,
    Schedule,
    bounds_report,
    brute_opt,
    euler_schedule,
    euler_tour,
    trivial_lb,
    validate_schedule,
)
from .strategies import (
    GreedyFrontierExplorer,
    IdleExplorer,
    IdleThenExplorer,
    PhaseBfsExplorer,
    SingleDfsExplorer,
    make_explorer,
)
from .tree import (
    ROOT,
    RootedTree,
    TreeStats,
    attach_path_with_star,
    decode_tree,
    encode_tree,
    make_path_star,
    root_branch,
    tree_to_dot,
)

__version__ = "0.1.0"
