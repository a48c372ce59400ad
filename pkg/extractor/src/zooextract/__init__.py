"""Adapter between published checkpoints and the selection pipeline:
runs shared probing data through each checkpoint and writes the FMX1
feature files plus zoo manifest the pipeline consumes."""

from .errors import (
    AlignmentFailure,
    DownloadFailure,
    ExtractorError,
    JobError,
    PreprocessError,
)
from .fmx import write_fmx1, write_manifest
from .images import extract_image_features
from .job import CheckpointRef, ExtractionJob
from .text import extract_features

__version__ = "0.1.0"
