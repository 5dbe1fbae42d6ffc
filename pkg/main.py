"""
Main entry point for the freeprim CLI.
"""

from pathlib import Path

from freeprim.cli import cli
from freeprim.config import load_env_file

if __name__ == '__main__':
    load_env_file(Path('.env'))
    cli()
