"""Wang-tile workbench: simulation, compilation, substitutions, checksums and error islands."""

__version__ = "0.1.0"
