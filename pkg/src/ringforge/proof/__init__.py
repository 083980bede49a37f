"""Plan and policy validation, proof rendering and DOT export."""

from .display import DisplayMap
from .dot import DotSyntaxError, export_dot, read_dot
from .render import ProofDocument, ProofLine, load_templates, render_proof
from .validate import ValidationReport, simulate, validate_plan, validate_policy

__all__ = [
    "DisplayMap", "DotSyntaxError", "ProofDocument", "ProofLine", "ValidationReport",
    "export_dot", "load_templates", "read_dot", "render_proof", "simulate",
    "validate_plan", "validate_policy",
]
