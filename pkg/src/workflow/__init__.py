"""Workflow orchestration for the verification suites."""

from .orchestrator import VerificationWorkflow, WorkflowConfig

__all__ = ["VerificationWorkflow", "WorkflowConfig"]
