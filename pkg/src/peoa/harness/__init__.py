"""Experiment harness: multi-run statistics, parameter sweeps, CSV and
figure reporting, the external-objective bridge, and the command line."""
