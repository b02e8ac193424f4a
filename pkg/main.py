"""Main entry point for dillbench."""

from dillbench.cli import app

if __name__ == "__main__":
    app()
