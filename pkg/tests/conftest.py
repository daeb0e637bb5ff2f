"""Shared test fixtures for the finite-part test suite."""

import os
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))


# =============================================================================
# Environment Fixtures
# =============================================================================

@pytest.fixture
def clean_env():
    """Provide an environment without HPF_* overrides."""
    env_backup = os.environ.copy()
    for key in list(os.environ):
        if key.startswith("HPF_"):
            os.environ.pop(key)
    yield
    os.environ.clear()
    os.environ.update(env_backup)


# =============================================================================
# Function Handle Fixtures
# =============================================================================

@pytest.fixture
def cos_handle():
    """cos on (0, 1] with all four exact derivatives."""
    from src.realfunc.handle import FunctionHandle
    return FunctionHandle(
        fn=np.cos,
        derivs=(
            lambda x: -np.sin(x),
            lambda x: -np.cos(x),
            np.sin,
            np.cos,
        ),
        label="cos",
    )


@pytest.fixture
def exp_handle():
    """exp on (0, 1] without exact derivatives (finite differences only)."""
    from src.realfunc.handle import FunctionHandle
    return FunctionHandle(fn=np.exp, label="exp")


@pytest.fixture
def reciprocal_handle():
    """1/x on (0, 1], divergent at 0."""
    from src.realfunc.handle import FunctionHandle
    return FunctionHandle(fn=lambda x: 1.0 / x, derivs=(lambda x: -1.0 / x**2,), label="1/x")


@pytest.fixture
def oscillating_handle():
    """sin(1/x)/x with its arch points."""
    from src.cli.expressions import compile_expression
    return compile_expression("sin(1/x)/x")


# =============================================================================
# Witness Fixtures
# =============================================================================

@pytest.fixture(scope="session")
def reciprocal_bundle():
    """τ = 1/x with its mass table."""
    from src.cli.expressions import compile_expression
    from src.witness.bundle import WitnessBundle
    return WitnessBundle.from_tau(compile_expression("1/x"))


@pytest.fixture(scope="session")
def reciprocal_partition(reciprocal_bundle):
    """α_k = e^-k for k = 0..20."""
    from src.witness.partition import build_partition
    return build_partition(reciprocal_bundle, 20)


# =============================================================================
# File System Fixtures
# =============================================================================

@pytest.fixture
def temp_dir():
    """Provide a temporary directory that is cleaned up after tests."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def corpus_file(temp_dir):
    """A corpus with two sequences, a comment and a blank line."""
    path = temp_dir / "corpus.txt"
    path.write_text("# eventually periodic\n0110[01]*\n\n1010\n", encoding="utf-8")
    return path


# =============================================================================
# Report Fixtures
# =============================================================================

@pytest.fixture
def sample_report():
    """A report with one record of each status."""
    from src.cli.report import Report
    report = Report("pf", {"f": "cos(x)", "alpha": -1.5})
    report.check("pf/ok", "anchor", True, 1e-12, 1e-9)
    report.check("pf/bad", "anchor", False, 0.5, 1e-9, detail="too large")
    report.skip("pf/skipped", "anchor", "not applicable")
    report.info("pf/value", "anchor", 0.25)
    return report
