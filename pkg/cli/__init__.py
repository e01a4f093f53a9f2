"""Command-line surface: data loading, reports and the argparse driver."""

from .loaders import labels_to_result, load_data
from .reports import RunReport, describe_partition, export_histogram, write_membership, write_trace

__all__ = [
    "RunReport",
    "describe_partition",
    "export_histogram",
    "labels_to_result",
    "load_data",
    "write_membership",
    "write_trace",
]
