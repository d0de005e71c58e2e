"""Exception types shared across the pipeline."""


class PipelineError(Exception):
    """Base class for every error the pipeline raises on bad input."""


class ImageFormatError(PipelineError, ValueError):
    pass


class DegenerateHistogramError(PipelineError, ValueError):
    pass


class DegenerateDataError(PipelineError, ValueError):
    pass


class TrainingDataError(PipelineError, ValueError):
    pass


class ModelFormatError(PipelineError, ValueError):
    pass


class DatasetLayoutError(PipelineError, ValueError):
    pass
