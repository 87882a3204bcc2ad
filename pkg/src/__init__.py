"""Source package namespace for the SSARX predictive control tooling."""
