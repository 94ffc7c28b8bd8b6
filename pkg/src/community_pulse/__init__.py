"""Community health analytics and recommendations for repository maintainers."""

__version__ = "0.1.0"
