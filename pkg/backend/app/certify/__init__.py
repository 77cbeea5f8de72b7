"""Lower-bound certificates and closed-form machine bounds."""
