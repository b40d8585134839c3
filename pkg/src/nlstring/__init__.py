"""Conservative finite-difference and modal schemes for whirling nonlinear strings."""
