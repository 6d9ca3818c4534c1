"""Figure rendering for sevfdr study CSVs."""

from .render import SchemaError, plot_study1, plot_study2, read_table

__all__ = ["SchemaError", "plot_study1", "plot_study2", "read_table"]
