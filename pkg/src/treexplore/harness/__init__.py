"""Command-line harness: parameter pickers, verification, sweeps."""
