#!/usr/bin/env python3
"""
Main Entry Point for the Accretive Transform Toolkit

Runs the command line: check, sweep, window, radius, range and demo-paper.
"""

import os
import sys

import click

from modules.cli import main as run_cli


def main():
    """Main function to run the application."""
    debug = os.getenv('DEBUG_MODE', 'false').lower() == 'true'
    if debug:
        click.echo("🚀 Starting Accretive Transform Toolkit...", err=True)
        click.echo(f"📁 Config file: {os.getenv('CONFIG_FILE', 'sweep_config.json')}", err=True)
        click.echo("🐛 Debug mode: ON", err=True)

    try:
        code = run_cli(sys.argv[1:])
    except KeyboardInterrupt:
        click.echo("\n👋 Shutting down...", err=True)
        code = 130
    sys.exit(code)


if __name__ == '__main__':
    main()
