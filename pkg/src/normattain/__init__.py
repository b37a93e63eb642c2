"""normattain - norm attainment for operators in the algebra of two projections."""

__version__ = "0.1.0"
