class ExtractorError(Exception):
    """Base class for extraction failures."""


class DownloadFailure(ExtractorError):
    """A checkpoint could not be fetched or loaded."""


class AlignmentFailure(ExtractorError):
    """Word-to-subword alignment is impossible for some checkpoint."""


class PreprocessError(ExtractorError):
    """Probing input does not match the checkpoint's expected format."""


class JobError(ExtractorError):
    """The extraction job specification is invalid."""
