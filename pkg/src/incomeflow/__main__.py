"""Entry point for running the package as a module."""

import sys

from incomeflow.cli.launch import main  # pragma: no cover

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
