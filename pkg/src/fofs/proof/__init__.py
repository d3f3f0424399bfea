"""Hilbert-style proofs for FOFS and its extensions."""
from .core import (
    Proof, ProofBuilder, ProofFormatError, ProofLine, Verdict, check_proof, dump_proof,
    gamma_form, load_proof, proof_from_json, proof_to_json,
)
from .derive import DERIVED_NAMES, SideConditionError, derive_schema
from .ipc import NotPropositionalError, ipc_decide, ipc_entails, ipc_skeleton_valid
from .schemas import AXIOM_NAMES, RULE_NAMES, make_axiom, match_axiom
from .search import (
    Proven, Refuted, TheoryApprox, Unknown, bounded_derive, box_projection,
    diamond_complement, pair_consistent_bounded,
)
