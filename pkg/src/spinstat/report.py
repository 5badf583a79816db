"""Assemble VerdictReport dictionaries (the JSON the CLI writes)."""
from __future__ import annotations

import json
import warnings
from typing import Iterable, Optional

import numpy as np

from . import analytic, quantization, spectrum
from .config import RunConfig
from .field_model import FieldSpec, build, default_samples, verify_symmetries
from .spin_algebra import sigma_values

SCHEMA = "spinstat.report/1"
SECTIONS = ("symmetry", "spectral_reality", "spectrum", "statistics", "branch_points", "corollary")


def spectrum_samples(field, p_samples) -> list:
    """Closed-form energies (both signs, all helicities) next to the pencil eigenvalues."""
    rows = []
    for p in p_samples:
        p = np.asarray(p, dtype=float)
        pn = float(np.linalg.norm(p))
        closed = []
        for s2 in sigma_values(field.spec.two_j):
            e = spectrum.energy(field.spec, pn, s2)
            closed += [e, -e]
        oracle = [float(np.real(e)) for e, _ in spectrum.solve_generalized_eigenproblem(field, p)]
        closed.sort(reverse=True)
        oracle.sort(reverse=True)
        rel = max(abs(a - b) / max(1.0, abs(a)) for a, b in zip(closed, oracle))
        rows.append({"p": p.tolist(), "closed_form": closed, "oracle": oracle, "max_rel_diff": rel})
    return rows


def build_report(spec: FieldSpec, config: Optional[RunConfig] = None, sections: Iterable[str] = SECTIONS, command: str = "report") -> dict:
    """Run the requested pipeline stages and collect their results.

    Raises the underlying library errors (SpecError, SpectrumError,
    InconsistencyError, AnalyticError); mapping them to exit codes is the CLI's job.
    """
    config = config or RunConfig()
    sections = set(sections)
    out = {"schema": SCHEMA, "command": command, "spec": spec.to_dict(), "seed": config.seed}
    for name in SECTIONS:
        out[name] = None
    field = build(spec)
    samples = default_samples(config.samples, seed=config.seed)
    caught_all = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if "symmetry" in sections:
            out["symmetry"] = verify_symmetries(field, samples, tol=config.tol).to_dict()
        if "spectral_reality" in sections:
            out["spectral_reality"] = spectrum.validate_spectrum(spec).to_dict()
        verdict = None
        if "spectrum" in sections:
            out["spectrum"] = spectrum_samples(field, samples)
        if "statistics" in sections or "corollary" in sections:
            verdict = quantization.decide_statistics(field, seed=config.seed, cutoff=config.fock_cutoff, causality_tol=config.causality_tol)
            if "statistics" in sections:
                out["statistics"] = verdict.to_dict()
        if "branch_points" in sections:
            out["branch_points"] = [r.to_dict() for r in analytic.all_branch_points(spec)]
        if "corollary" in sections:
            out["corollary"] = analytic.verify_corollary(spec, verdict=verdict).to_dict()
        caught_all = [str(w.message) for w in caught]
    out["warnings"] = sorted(set(caught_all))
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def assert_reports_close(a, b, rtol: float = 1e-9, atol: float = 1e-9, path: str = "$") -> None:
    """Structural equality with numeric leaves compared under tolerance."""
    if isinstance(a, dict) and isinstance(b, dict):
        if set(a) != set(b):
            raise AssertionError(f"{path}: keys differ: {sorted(set(a) ^ set(b))}")
        for k in a:
            assert_reports_close(a[k], b[k], rtol, atol, f"{path}.{k}")
    elif isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            raise AssertionError(f"{path}: lengths {len(a)} != {len(b)}")
        for i, (x, y) in enumerate(zip(a, b)):
            assert_reports_close(x, y, rtol, atol, f"{path}[{i}]")
    elif isinstance(a, bool) or isinstance(b, bool) or a is None or b is None or isinstance(a, str):
        if a != b:
            raise AssertionError(f"{path}: {a!r} != {b!r}")
    elif isinstance(a, (int, float)) and isinstance(b, (int, float)):
        if not np.isclose(a, b, rtol=rtol, atol=atol):
            raise AssertionError(f"{path}: {a!r} != {b!r}")
    elif a != b:
        raise AssertionError(f"{path}: {a!r} != {b!r}")
