class ValidationError(ValueError):
    """Raised when an input parameter falls outside its admissible range."""
