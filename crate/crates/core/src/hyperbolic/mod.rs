//! Hyperbolic structures (under construction).
