"""GP module: exact per-channel Gaussian-process regression of drift dynamics."""
