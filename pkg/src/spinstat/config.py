from dataclasses import dataclass


@dataclass
class RunConfig:
    """Knobs shared by the CLI and the experiment scripts."""

    tol: float = 1e-10
    samples: int = 8
    seed: int = 0
    fock_cutoff: int = 8
    causality_tol: float = 1e-9
