"""
Command-line entry point.
Purpose: Run one toolkit subcommand (index, retrieve, fuse, evaluate, split) and exit with its code.
"""
import sys

from src.cli import run


def main() -> int:
    result = run(sys.argv[1:])
    sys.stdout.write(result.stdout)
    sys.stderr.write(result.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
