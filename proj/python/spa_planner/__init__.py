"""Plan-space planner with plan reuse by retraction and refinement."""

from ._core import (
    ActionSchema,
    Library,
    Plan,
    Problem,
    Result,
    advisability,
    blocks_domain_text,
    break_even_ratio,
    generate_bs,
    generate_bs1,
    parse_domain,
    parse_library,
    parse_problem,
    problem_by_name,
    run_benchmark,
    solve,
)

__all__ = [
    "ActionSchema",
    "Library",
    "Plan",
    "Problem",
    "Result",
    "advisability",
    "blocks_domain_text",
    "break_even_ratio",
    "generate_bs",
    "generate_bs1",
    "parse_domain",
    "parse_library",
    "parse_problem",
    "problem_by_name",
    "run_benchmark",
    "solve",
]
