"""python -m hqs forwards to the CLI."""

from .cli import entrypoint

if __name__ == "__main__":
    entrypoint()
