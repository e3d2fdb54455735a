"""System module: perturbed control-affine plants and reference signals."""
