"""Runs the verifier over mutants, classifies each outcome and computes mutation scores."""
from __future__ import annotations

import contextlib
import hashlib
import json
import logging
import os
import re
import subprocess
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import psutil

from verifier_config import VERDICT_NAMES, VerifierConfig

logger = logging.getLogger(__name__)

KILLED, ALIVE, INVALID, TIMED_OUT = VERDICT_NAMES
ORIGINAL_KEY = '__original__'
DEFAULT_KEY = '*'
TERMINATE_GRACE_SECONDS = 2.0


class AdapterSpawnError(Exception):
    pass


@dataclass(frozen=True)
class Verdict:
    status: str
    exit_status: int | None = None
    output_digest: str = ''
    duration: float = 0.0
    diagnostic: str | None = None

    def to_dict(self):
        return {
            'status': self.status,
            'exit_status': self.exit_status,
            'output_digest': self.output_digest,
            'duration': round(self.duration, 3),
            'diagnostic': self.diagnostic,
        }


def digest(output: str) -> str:
    return hashlib.sha256(output.encode('utf-8', 'replace')).hexdigest()[:16]


class VerifierAdapter:
    def __init__(self, config: VerifierConfig):
        self.config = config
        self.patterns = {name: re.compile(p) for name, p in config.patterns.items()}

    @property
    def timeout_seconds(self):
        return self.config.timeout_seconds

    def command_for(self, path):
        return [part.replace('{file}', path) for part in self.config.command]

    def classify_output(self, output: str, exit_status: int | None) -> tuple[str, str | None]:
        if self.config.classify_by == 'exit_code':
            status = self.config.exit_codes.get(str(exit_status))
            if status is None:
                return INVALID, f"unmapped exit code {exit_status}"
            return status, None
        if self.patterns['invalid'].search(output):
            return INVALID, None
        summary = self.patterns['summary'].search(output)
        if summary is None:
            return INVALID, 'no verifier summary in output'
        verified, errors = int(summary.group(1)), int(summary.group(2))
        if errors > 0:
            return KILLED, None
        timeouts = self.patterns['timeout'].search(output[summary.start():])
        if timeouts is not None and int(timeouts.group(1)) > 0:
            return TIMED_OUT, None
        if verified >= 1:
            return ALIVE, None
        return INVALID, 'verifier checked nothing'

    def classify(self, path, mutant_id=None) -> Verdict:
        command = self.command_for(path)
        started = time.monotonic()
        try:
            process = subprocess.Popen(command, stdout=subprocess.PIPE, stderr=subprocess.PIPE,
                                       text=True, errors='replace')
        except (FileNotFoundError, PermissionError) as e:
            logger.error(f"Cannot start verifier {command[0]}: {e}")
            raise AdapterSpawnError(f"cannot run verifier command {command[0]!r}: {e}") from e
        try:
            stdout, stderr = process.communicate(timeout=self.timeout_seconds)
        except subprocess.TimeoutExpired:
            kill_process_tree(process.pid)
            stdout, stderr = process.communicate()
            logger.warning(f"Verifier timed out after {self.timeout_seconds}s on {path}")
            return Verdict(TIMED_OUT, None, digest(stdout + stderr), time.monotonic() - started)
        duration = time.monotonic() - started
        output = stdout + stderr
        status, diagnostic = self.classify_output(output, process.returncode)
        return Verdict(status, process.returncode, digest(output), duration, diagnostic)


def kill_process_tree(pid):
    """Stops a verifier together with the solver processes it started."""
    try:
        root = psutil.Process(pid)
        procs = root.children(recursive=True) + [root]
    except psutil.NoSuchProcess:
        return
    for proc in procs:
        with contextlib.suppress(psutil.NoSuchProcess):
            proc.terminate()
    _, alive = psutil.wait_procs(procs, timeout=TERMINATE_GRACE_SECONDS)
    for proc in alive:
        with contextlib.suppress(psutil.NoSuchProcess):
            proc.kill()
    psutil.wait_procs(alive, timeout=TERMINATE_GRACE_SECONDS)


class StubAdapter:
    """Answers from a fixed id → verdict map instead of running a verifier."""

    timeout_seconds = 0.0

    def __init__(self, verdicts: dict):
        for key, status in verdicts.items():
            if status not in VERDICT_NAMES:
                raise ValueError(f"stub verdict for {key!r} must be one of "
                                 f"{', '.join(VERDICT_NAMES)}, got {status!r}")
        self.verdicts = dict(verdicts)

    @classmethod
    def from_file(cls, path) -> StubAdapter:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                verdicts = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Failed to read stub verdicts {path}: {e}")
            raise
        logger.info(f"Loaded {len(verdicts)} stub verdicts from {path}")
        return cls(verdicts)

    def classify(self, path, mutant_id=None) -> Verdict:
        if mutant_id == ORIGINAL_KEY:
            return Verdict(self.verdicts.get(ORIGINAL_KEY, ALIVE), 0)
        status = self.verdicts.get(mutant_id, self.verdicts.get(DEFAULT_KEY))
        if status is None:
            return Verdict(INVALID, None, diagnostic=f"no stub verdict for {mutant_id}")
        return Verdict(status, 0)


def classify(mutant_file, adapter, mutant_id=None) -> Verdict:
    return adapter.classify(mutant_file, mutant_id)


def verify_original(path, adapter) -> Verdict:
    verdict = adapter.classify(path, ORIGINAL_KEY)
    logger.info(f"Original {path} verified as {verdict.status}")
    return verdict


def run_campaign(mutants, adapter, worker_count=1) -> list[tuple[str, Verdict]]:
    """Classifies every mutant once; results come back in the order of ``mutants``."""
    if worker_count < 1:
        raise ValueError('worker_count must be at least 1')
    mutants = list(mutants)
    if not mutants:
        return []
    with tempfile.TemporaryDirectory(prefix='mutdafny-') as scratch:
        def job(mutant):
            path = mutant.path
            if path is None:
                path = os.path.join(scratch, f"{mutant.id}.dfy")
                with open(path, 'w', encoding='utf-8', newline='') as f:
                    f.write(mutant.mutated_text)
            try:
                verdict = adapter.classify(path, mutant.id)
            except AdapterSpawnError:
                raise
            except Exception as e:
                logger.error(f"Mutant {mutant.id} could not be classified: {e}")
                verdict = Verdict(INVALID, diagnostic=str(e))
            logger.info(f"Mutant {mutant.id}: {verdict.status} in {verdict.duration:.2f}s")
            return mutant.id, verdict

        with ThreadPoolExecutor(max_workers=worker_count) as pool:
            results = list(pool.map(job, mutants))
    logger.info(f"Campaign classified {len(results)} mutants with {worker_count} workers")
    return results


@dataclass
class MutationScore:
    killed: int = 0
    survived: int = 0
    invalid: int = 0
    timed_out: int = 0
    by_operator: dict = field(default_factory=dict)

    @property
    def total(self):
        return self.killed + self.survived + self.invalid + self.timed_out

    @property
    def score(self) -> float | None:
        decided = self.killed + self.survived
        return self.killed / decided if decided else None

    @property
    def killed_ratio(self) -> float | None:
        return self.killed / self.total if self.total else None

    def add(self, status):
        if status == KILLED:
            self.killed += 1
        elif status == ALIVE:
            self.survived += 1
        elif status == INVALID:
            self.invalid += 1
        elif status == TIMED_OUT:
            self.timed_out += 1
        else:
            raise ValueError(f"unknown verdict {status!r}")

    def to_dict(self):
        return {
            'killed': self.killed,
            'survived': self.survived,
            'invalid': self.invalid,
            'timed_out': self.timed_out,
            'total': self.total,
            'score': self.score,
            'killed_ratio': self.killed_ratio,
        }


def operator_of(mutant_id: str) -> str:
    return mutant_id.split('-', 1)[0]


def score(verdicts) -> MutationScore:
    """Totals over (mutant id, verdict) pairs, with a breakdown per operator."""
    result = MutationScore()
    for mutant_id, verdict in verdicts:
        status = verdict.status if isinstance(verdict, Verdict) else verdict
        result.add(status)
        result.by_operator.setdefault(operator_of(mutant_id), MutationScore()).add(status)
    return result
