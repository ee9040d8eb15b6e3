"""
Configuration Management Module

Handles sweep, numerical-radius and window-search settings: built-in
defaults, the JSON settings file, environment overrides and validation.
"""

import copy
import os
import json
from typing import Dict, Any, List, Optional

import click
from dotenv import load_dotenv

from .linalg_core import Tolerance
from .sweep_manager import MAX_DIM, MIN_DIM, SweepConfig
from .window_solver import OBJECTIVE_KANTOROVICH, OBJECTIVE_WIDTH, Variant


DEFAULT_CONFIG = {
    'sweep': {
        'master_seed': 0,
        'trials': 100,
        'dims': [2, 3, 4, 5, 6],
        'tol_rel': 1e-8,
        'fill': 0.9,
        'workers': 1,
        'case_filter': None,
        'boundary': False,
        'failure_dir': 'failures',
    },
    'numrad': {
        'eps': 1e-8,
        'initial_intervals': 64,
    },
    'window': {
        'variant': Variant.A.value,
        'pad': 0.0,
        'objective': OBJECTIVE_KANTOROVICH,
    },
}

# environment variable -> (section, key, parser)
ENVIRONMENT_KEYS = {
    'SWEEP_SEED': ('sweep', 'master_seed', int),
    'SWEEP_TRIALS': ('sweep', 'trials', int),
    'SWEEP_DIMS': ('sweep', 'dims', lambda text: [int(d) for d in text.split(',') if d.strip()]),
    'SWEEP_WORKERS': ('sweep', 'workers', int),
    'TOL_REL': ('sweep', 'tol_rel', float),
    'GENERATOR_FILL': ('sweep', 'fill', float),
    'FAILURE_DIR': ('sweep', 'failure_dir', str),
    'OMEGA_EPS': ('numrad', 'eps', float),
}


class ConfigManager:
    """Manages sweep configuration from defaults, JSON file and environment variables."""

    def __init__(self, config_file: str = 'sweep_config.json'):
        """Initialize configuration manager.

        Args:
            config_file: Path to the JSON configuration file
        """
        self.config_file = config_file
        self._load_environment()
        self._load_config()

    def _load_environment(self):
        """Load environment variables from .env file."""
        load_dotenv()

        self.env_overrides: Dict[str, Dict[str, Any]] = {}
        for name, (section, key, parse) in ENVIRONMENT_KEYS.items():
            raw = os.getenv(name)
            if raw is None or raw == '':
                continue
            try:
                self.env_overrides.setdefault(section, {})[key] = parse(raw)
            except ValueError:
                click.echo(f"⚠️  Ignoring invalid {name}={raw!r}", err=True)

        self.debug_mode = os.getenv('DEBUG_MODE', 'false').lower() == 'true'

    def _load_config(self):
        """Load configuration from JSON file, then apply environment overrides."""
        self.settings = copy.deepcopy(DEFAULT_CONFIG)
        try:
            if os.path.exists(self.config_file):
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    config = json.load(f)

                for section, values in config.items():
                    if section not in self.settings:
                        click.echo(f"Warning: Unknown configuration section {section!r}", err=True)
                        continue
                    if isinstance(values, dict):
                        self.settings[section].update(values)
                    else:
                        click.echo(f"Warning: Invalid format for section {section!r}", err=True)

            else:
                self._save_config()
                click.echo(f"📁 Created new configuration file {self.config_file}", err=True)

        except Exception as e:
            click.echo(f"Error loading configuration: {e}", err=True)
            self.settings = copy.deepcopy(DEFAULT_CONFIG)

        for section, values in self.env_overrides.items():
            self.settings[section].update(values)

    def _save_config(self):
        """Save current configuration to JSON file."""
        try:
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(self.settings, f, indent=4, ensure_ascii=False)
        except Exception as e:
            click.echo(f"Error saving configuration: {e}", err=True)

    def get_sweep_settings(self) -> Dict[str, Any]:
        return copy.deepcopy(self.settings['sweep'])

    def get_numrad_settings(self) -> Dict[str, Any]:
        return copy.deepcopy(self.settings['numrad'])

    def get_window_settings(self) -> Dict[str, Any]:
        return copy.deepcopy(self.settings['window'])

    def update_sweep_settings(self, **kwargs) -> bool:
        """Update sweep settings and save them.

        Args:
            **kwargs: Keys of the sweep section

        Returns:
            True if successful, False otherwise
        """
        unknown = [key for key in kwargs if key not in DEFAULT_CONFIG['sweep']]
        if unknown:
            click.echo(f"Error updating sweep settings: unknown keys {', '.join(unknown)}", err=True)
            return False
        self.settings['sweep'].update(kwargs)
        self._save_config()
        click.echo("✅ Sweep settings saved", err=True)
        return True

    def validate_config(self) -> Dict[str, List[str]]:
        """Validate current configuration.

        Returns:
            Dictionary with validation errors by section
        """
        errors = {
            'sweep': [],
            'numrad': [],
            'window': [],
        }

        sweep = self.settings['sweep']
        try:
            if int(sweep['trials']) < 1:
                errors['sweep'].append('trials must be at least 1')
        except (TypeError, ValueError):
            errors['sweep'].append('trials must be an integer')
        dims = sweep.get('dims') or []
        if not dims:
            errors['sweep'].append('dims must not be empty')
        elif any(not isinstance(d, int) or not MIN_DIM <= d <= MAX_DIM for d in dims):
            errors['sweep'].append(f'dims must lie in [{MIN_DIM}, {MAX_DIM}]')
        if not _positive(sweep.get('tol_rel')):
            errors['sweep'].append('tol_rel must be positive')
        fill = sweep.get('fill')
        if not isinstance(fill, (int, float)) or not 0 < fill <= 1:
            errors['sweep'].append('fill must lie in (0, 1]')
        if not isinstance(sweep.get('workers'), int) or sweep['workers'] < 1:
            errors['sweep'].append('workers must be at least 1')

        numrad = self.settings['numrad']
        if not _positive(numrad.get('eps')):
            errors['numrad'].append('eps must be positive')
        if not isinstance(numrad.get('initial_intervals'), int) or numrad['initial_intervals'] < 2:
            errors['numrad'].append('initial_intervals must be at least 2')

        window = self.settings['window']
        if window.get('objective') not in (OBJECTIVE_KANTOROVICH, OBJECTIVE_WIDTH):
            errors['window'].append(f"Unknown objective {window.get('objective')!r}")
        if not isinstance(window.get('pad'), (int, float)) or window['pad'] < 0:
            errors['window'].append('pad must be non-negative')
        if str(window.get('variant', '')).lower() not in {v.value.lower() for v in Variant}:
            errors['window'].append(f"Unknown variant {window.get('variant')!r}")

        return errors

    def is_config_valid(self) -> bool:
        """Check if configuration is valid.

        Returns:
            True if configuration is valid, False otherwise
        """
        errors = self.validate_config()
        return all(len(error_list) == 0 for error_list in errors.values())

    def build_sweep_config(self, **overrides: Optional[Any]) -> SweepConfig:
        """SweepConfig from the settings, with command-line overrides on top.

        Args:
            **overrides: Sweep keys (plus 'eps'); None values are ignored

        Raises:
            InputError: If the merged settings are invalid
        """
        sweep = self.get_sweep_settings()
        eps = self.settings['numrad']['eps']
        for key, value in overrides.items():
            if value is None:
                continue
            if key == 'eps':
                eps = value
            else:
                sweep[key] = value
        return SweepConfig(
            master_seed=int(sweep['master_seed']),
            trials=int(sweep['trials']),
            dims=tuple(sweep['dims']),
            tol=Tolerance(float(sweep['tol_rel'])),
            eps=float(eps),
            case_filter=sweep.get('case_filter'),
            fill=float(sweep['fill']),
            workers=int(sweep['workers']),
            boundary=bool(sweep.get('boundary', False)),
            failure_dir=sweep.get('failure_dir'),
        )


def _positive(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and value > 0
