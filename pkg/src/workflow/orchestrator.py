"""Verification workflow orchestrator."""

from __future__ import annotations

import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Any, Optional, Sequence

from tqdm import tqdm

from src.cli.report import Report
from src.cli.suites import SUITES
from src.config import settings


@dataclass
class WorkflowConfig:
    """Configuration for workflow execution.

    Attributes:
        seed: Seed shared by every randomized suite.
        output_base_dir: Base directory for saved reports (default: settings.output_dir).
        workers: Number of suites run concurrently (1 runs them in order).
        quiet: Suppress banners and the progress bar.
        save: Write report.json and summary.json into a timestamped directory.
    """
    seed: int = 7
    output_base_dir: Optional[str] = None
    workers: int = 1
    quiet: bool = False
    save: bool = False


class VerificationWorkflow:
    """Runs the acceptance suites and assembles one consolidated report.

    Suites are independent and may run on a thread pool, but their records
    are always merged in registry order, so the report does not depend on
    scheduling. Progress goes to stderr; the report itself is returned and
    never printed here.
    """

    def __init__(self, config: WorkflowConfig):
        """Initialize the workflow orchestrator.

        Args:
            config: Workflow configuration.
        """
        self.config = config
        self.last_output_dir: Optional[Path] = None

    def _print(self, message: str = "") -> None:
        if not self.config.quiet:
            print(message, file=sys.stderr)

    def run(self, names: Optional[Sequence[str]] = None) -> Report:
        """Run the selected suites (all of them by default).

        Args:
            names: Suite names from ``SUITES``; unknown names raise ValueError.

        Returns:
            The consolidated Report.

        Example:
            >>> workflow = VerificationWorkflow(WorkflowConfig(seed=7))
            >>> report = workflow.run(["finite_part"])
            >>> report.exit_code
            0
        """
        names = list(SUITES) if names is None else list(names)
        unknown = [n for n in names if n not in SUITES]
        if unknown:
            raise ValueError(f"Unknown suites: {', '.join(unknown)}")

        self._print(f"\n{'='*80}")
        self._print("Starting verification suites")
        self._print(f"Seed: {self.config.seed}")
        self._print(f"Suites: {', '.join(names)}")
        self._print(f"{'='*80}\n")

        durations: Dict[str, float] = {}

        def run_suite(name: str) -> Report:
            start = time.perf_counter()
            report = SUITES[name](self.config.seed)
            durations[name] = time.perf_counter() - start
            return report

        progress = tqdm(total=len(names), desc="suites", unit="suite", file=sys.stderr,
                        disable=self.config.quiet)
        reports: Dict[str, Report] = {}
        if self.config.workers > 1:
            with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
                futures = {name: pool.submit(run_suite, name) for name in names}
                for name in names:
                    reports[name] = futures[name].result()
                    progress.update(1)
        else:
            for name in names:
                reports[name] = run_suite(name)
                progress.update(1)
        progress.close()
        durations = {name: durations[name] for name in names}

        consolidated = Report("verify-all", {"seed": self.config.seed, "suites": names})
        for name in names:
            report = reports[name]
            consolidated.extend(report, prefix=name)
            counts = report.counts
            mark = "✓" if not report.failed else "✗"
            self._print(f"{mark} {name} completed")
            self._print(f"  Checks: {counts['pass']} passed, {counts['fail']} failed, {counts['skip']} skipped")
            self._print(f"  Duration: {durations[name]:.2f}s")
            self._print()

        if self.config.save:
            self.last_output_dir = self._save(consolidated, durations)

        counts = consolidated.counts
        self._print(f"{'='*80}")
        self._print("Verification completed" if not consolidated.failed else "Verification found failures")
        self._print(f"Checks: {counts['pass']} passed, {counts['fail']} failed, {counts['skip']} skipped")
        self._print(f"Total duration: {sum(durations.values()):.2f}s")
        if self.last_output_dir is not None:
            self._print(f"Results saved to: {self.last_output_dir}")
        self._print(f"{'='*80}\n")
        return consolidated

    def _save(self, report: Report, durations: Dict[str, float]) -> Path:
        """Write report.json and summary.json into outputs/verify-all/<timestamp>."""
        timestamp = time.strftime("%Y%m%d-%H%M%S")
        base = self.config.output_base_dir or settings.output_dir
        out_dir = Path(base) / "verify-all" / timestamp
        out_dir.mkdir(parents=True, exist_ok=True)

        (out_dir / "report.json").write_text(report.to_json(), encoding="utf-8")

        summary: Dict[str, Any] = {
            "timestamp": timestamp,
            "seed": self.config.seed,
            "workers": self.config.workers,
            "suites": [
                {"name": name, "duration_seconds": round(seconds, 3)}
                for name, seconds in durations.items()
            ],
            "counts": report.counts,
            "exit_code": report.exit_code,
            "total_duration_seconds": round(sum(durations.values()), 3),
        }
        (out_dir / "summary.json").write_text(json.dumps(summary, indent=2), encoding="utf-8")
        return out_dir
