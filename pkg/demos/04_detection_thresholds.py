"""Detection-efficiency thresholds per dimension, as a CSV table.

Run with ``python demos/04_detection_thresholds.py > thresholds.csv``; the
same table comes from ``dimwit thresholds --d-min 2 --d-max 8``.
"""
from dimwit import OptimizerConfig, threshold_sweep
from dimwit.robustness import to_csv

reports = threshold_sweep(2, 8, OptimizerConfig(restarts=32))
print(to_csv(reports), end="")
