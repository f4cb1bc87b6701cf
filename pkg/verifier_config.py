import json
import logging
import os
import re
import shlex

logger = logging.getLogger(__name__)

ENV_COMMAND = 'MUTDAFNY_VERIFIER'
DEFAULT_CONFIG_FILE = 'verifier_config.json'

DEFAULT_PATTERNS = {
    'invalid': r"\d+ (?:parse|resolution/type) errors? detected in",
    'summary': r"Dafny program verifier finished with (\d+) verified, (\d+) errors?",
    'timeout': r"(\d+) time ?outs?",
}

DEFAULT_EXIT_CODES = {'0': 'Alive', '2': 'Invalid', '4': 'Killed'}
VERDICT_NAMES = ('Killed', 'Alive', 'Invalid', 'TimedOut')


class ConfigError(ValueError):
    pass


class VerifierConfig:
    def __init__(self, config_file=None):
        self.config_file = config_file or DEFAULT_CONFIG_FILE
        self.command = ['dafny', 'verify', '{file}']
        self.timeout_seconds = 20.0
        self.classify_by = 'output'
        self.patterns = dict(DEFAULT_PATTERNS)
        self.exit_codes = dict(DEFAULT_EXIT_CODES)
        self.load_config()
        self.apply_environment()

    def load_config(self):
        if not os.path.exists(self.config_file):
            logger.warning(f"Verifier config {self.config_file} not found, using defaults")
            return
        try:
            with open(self.config_file, 'r', encoding='utf-8') as f:
                config = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"Failed to read verifier config {self.config_file}: {e}")
            raise ConfigError(f"{self.config_file}: {e}") from e
        self.update(config)
        logger.info(f"Loaded verifier config from {self.config_file}: {' '.join(self.command)}, "
                    f"timeout {self.timeout_seconds}s, classify by {self.classify_by}")

    def update(self, config):
        if not isinstance(config, dict):
            raise ConfigError(f"{self.config_file}: top level must be an object")
        command = config.get('command', self.command)
        if not isinstance(command, list) or not command or \
                not all(isinstance(part, str) for part in command):
            raise ConfigError(f"{self.config_file}: 'command' must be a non-empty list of strings")
        if not any('{file}' in part for part in command):
            raise ConfigError(f"{self.config_file}: 'command' needs a {{file}} placeholder")
        timeout = config.get('timeout_seconds', self.timeout_seconds)
        if isinstance(timeout, bool) or not isinstance(timeout, (int, float)) or timeout <= 0:
            raise ConfigError(f"{self.config_file}: 'timeout_seconds' must be a positive number")
        classify_by = config.get('classify_by', self.classify_by)
        if classify_by not in ('output', 'exit_code'):
            raise ConfigError(f"{self.config_file}: 'classify_by' must be 'output' or 'exit_code'")
        patterns = {**self.patterns, **config.get('patterns', {})}
        for name, pattern in patterns.items():
            try:
                re.compile(pattern)
            except (re.error, TypeError) as e:
                raise ConfigError(f"{self.config_file}: bad pattern {name!r}: {e}") from e
        exit_codes = {str(k): v for k, v in config.get('exit_codes', self.exit_codes).items()}
        for code, verdict in exit_codes.items():
            if verdict not in VERDICT_NAMES:
                raise ConfigError(f"{self.config_file}: exit code {code} maps to unknown "
                                  f"verdict {verdict!r}")
        self.command = list(command)
        self.timeout_seconds = float(timeout)
        self.classify_by = classify_by
        self.patterns = patterns
        self.exit_codes = exit_codes

    def apply_environment(self):
        value = os.environ.get(ENV_COMMAND)
        if not value:
            return
        command = shlex.split(value)
        if not any('{file}' in part for part in command):
            command.append('{file}')
        self.command = command
        logger.info(f"Verifier command overridden by {ENV_COMMAND}: {value}")

    def with_timeout(self, seconds):
        if seconds is not None:
            if seconds <= 0:
                raise ConfigError('timeout must be positive')
            self.timeout_seconds = float(seconds)
        return self

    def to_dict(self):
        return {
            'command': self.command,
            'timeout_seconds': self.timeout_seconds,
            'classify_by': self.classify_by,
            'patterns': self.patterns,
            'exit_codes': self.exit_codes,
        }

    def save_config(self):
        try:
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(self.to_dict(), f, ensure_ascii=False, indent=2)
            logger.info(f"Verifier config saved to {self.config_file}")
        except OSError as e:
            logger.error(f"Failed to save verifier config: {e}")
            raise


def load_config(path=None, timeout=None) -> VerifierConfig:
    """Defaults, then the file, then MUTDAFNY_VERIFIER, then an explicit timeout."""
    return VerifierConfig(path).with_timeout(timeout)
