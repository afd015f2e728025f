"""Com-IC and One-Shot influence propagation with exact and Monte Carlo spread."""
