"""Turns scanned mutation targets into mutant source files with stable ids."""
from __future__ import annotations

import json
import logging
import os
from collections import Counter
from dataclasses import dataclass

from dafny_syntax import Edit, apply_edits
from operator_catalog import OPERATORS, MutationTarget, Scanner
from resolver import ResolvedProgram

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.json'
SCHEMA_VERSION = 1


class StaleTarget(Exception):
    def __init__(self, target: MutationTarget, found: str):
        self.target = target
        self.found = found
        span = target.span
        super().__init__(f"{target.operator} target at {span.line}:{span.column} expected "
                         f"{target.original!r} but the source has {found!r}")


class MutantWriteError(OSError):
    def __init__(self, mutant_id, path, cause):
        self.mutant_id = mutant_id
        self.path = path
        super().__init__(f"cannot write mutant {mutant_id} to {path}: {cause}")


@dataclass(frozen=True)
class Mutant:
    id: str
    operator: str
    original_file: str
    target: MutationTarget
    mutated_text: str
    duplicate_of: str | None = None
    path: str | None = None

    @property
    def line(self):
        return self.target.span.line

    @property
    def column(self):
        return self.target.span.column

    @property
    def diff(self):
        return tuple((e.span, e.original, e.replacement) for e in self.target.edits)

    @property
    def enclosing_callable(self):
        return self.target.enclosing_callable

    @property
    def callable_has_ensures(self):
        return self.target.callable_has_ensures

    def manifest_entry(self) -> dict:
        return {
            'id': self.id,
            'operator': self.operator,
            'line': self.line,
            'column': self.column,
            'original': self.target.original,
            'replacement': self.target.replacement,
            'description': self.target.description,
            'callable': self.enclosing_callable,
            'callable_has_ensures': self.callable_has_ensures,
            'duplicate_of': self.duplicate_of,
            'path': self.path,
        }


def mutant_id(target: MutationTarget, ordinal=1) -> str:
    return f"{target.operator}-{target.span.line}-{target.span.column}-{ordinal}"


def apply_target(source_text: str, target: MutationTarget, id_=None,
                 original_file='<memory>') -> Mutant:
    for edit in target.edits:
        found = source_text[edit.span.start:edit.span.end]
        if found != edit.original:
            raise StaleTarget(target, found)
    text = apply_edits(source_text, [Edit(e.span, e.replacement) for e in target.edits])
    return Mutant(id_ or mutant_id(target), target.operator, original_file, target, text)


class MutantManager:
    def __init__(self, out_dir=None):
        self.out_dir = out_dir

    def assign_ids(self, targets) -> list[str]:
        ordinals = Counter()
        ids = []
        for target in targets:
            key = (target.operator, target.span.line, target.span.column)
            ordinals[key] += 1
            ids.append(mutant_id(target, ordinals[key]))
        return ids

    def generate_all(self, program: ResolvedProgram, operators=OPERATORS,
                     original_file='<memory>') -> list[Mutant]:
        if not operators:
            return []
        targets = Scanner(program).scan(operators)
        return self.build(program.tree.source_text, targets, original_file)

    def build(self, source, targets, original_file='<memory>') -> list[Mutant]:
        seen = {}
        mutants = []
        for target, id_ in zip(targets, self.assign_ids(targets)):
            mutant = apply_target(source, target, id_, original_file)
            first = seen.setdefault(mutant.mutated_text, mutant.id)
            if first != mutant.id:
                mutant = Mutant(mutant.id, mutant.operator, original_file, target,
                                mutant.mutated_text, duplicate_of=first)
            mutants.append(mutant)
        logger.info(f"Generated {len(mutants)} mutants of {original_file} "
                    f"({sum(1 for m in mutants if m.duplicate_of)} duplicates)")
        if self.out_dir is not None:
            mutants = self.write_all(mutants, original_file)
        return mutants

    def mutant_path(self, mutant: Mutant, original_file) -> str:
        base = os.path.splitext(os.path.basename(original_file))[0]
        return os.path.join(self.out_dir, mutant.operator, f"{base}.{mutant.id}.dfy")

    def write_all(self, mutants, original_file) -> list[Mutant]:
        written = []
        for mutant in mutants:
            path = self.mutant_path(mutant, original_file)
            try:
                os.makedirs(os.path.dirname(path), exist_ok=True)
                with open(path, 'w', encoding='utf-8', newline='') as f:
                    f.write(mutant.mutated_text)
            except OSError as e:
                logger.error(f"Failed to write mutant {mutant.id}: {e}")
                raise MutantWriteError(mutant.id, path, e) from e
            logger.debug(f"Wrote mutant {mutant.id} to {path}")
            written.append(Mutant(mutant.id, mutant.operator, mutant.original_file,
                                  mutant.target, mutant.mutated_text, mutant.duplicate_of, path))
        self.save_manifest(written, original_file)
        return written

    def save_manifest(self, mutants, original_file):
        path = os.path.join(self.out_dir, MANIFEST_NAME)
        try:
            with open(path, 'w', encoding='utf-8') as f:
                json.dump({
                    'schema_version': SCHEMA_VERSION,
                    'file': original_file,
                    'mutants': [m.manifest_entry() for m in mutants],
                }, f, ensure_ascii=False, indent=2)
            logger.info(f"Manifest with {len(mutants)} mutants saved to {path}")
        except OSError as e:
            logger.error(f"Failed to save manifest: {e}")
            raise MutantWriteError('manifest', path, e) from e


def generate_all(program: ResolvedProgram, operators=OPERATORS, out_dir=None,
                 original_file='<memory>') -> list[Mutant]:
    return MutantManager(out_dir).generate_all(program, operators, original_file)
