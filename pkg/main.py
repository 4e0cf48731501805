"""Run the qkz-forge command line from a source checkout."""
import sys

sys.path.insert(0, "backend")

from qkz_forge.cli import main  # noqa: E402

if __name__ == "__main__":
    main()
