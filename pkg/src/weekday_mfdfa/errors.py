"""Exception hierarchy.

Three families map onto distinct CLI exit codes: ingestion problems with the
input file, failures inside the numerical pipeline, and invalid settings.
"""


class MFDFAError(Exception):
    """Base class for all package errors."""


class IngestionError(MFDFAError):
    pass


class AnalysisError(MFDFAError):
    pass


class ConfigError(MFDFAError, ValueError):
    pass


# ingestion
class MalformedHeader(IngestionError):
    pass


class UnparsableDate(IngestionError):
    pass


class NonPositiveClose(IngestionError):
    pass


class DuplicateDate(IngestionError):
    pass


class NonFiniteInput(IngestionError):
    pass


# analysis
class SeriesTooShort(AnalysisError):
    pass


class SegmentOutOfRange(AnalysisError):
    pass


class DegenerateFit(AnalysisError):
    pass


class ZeroVarianceSegment(AnalysisError):
    def __init__(self, scale, segment):
        super().__init__(f"zero detrended variance at scale {scale}, segment {segment}")
        self.scale = scale
        self.segment = segment


class InsufficientScales(AnalysisError):
    pass


class GridTooSmall(AnalysisError):
    pass


class DegenerateSpectrum(AnalysisError):
    pass


class NoQuarticMaximum(DegenerateSpectrum):
    """The fitted quartic has no local maximum to serve as alpha0."""


class NoRealRoot(AnalysisError):
    def __init__(self, message, fit=None):
        super().__init__(message)
        self.fit = fit


class NoRealRootLeft(NoRealRoot):
    pass


class NoRealRootRight(NoRealRoot):
    pass


class WindowLargerThanSeries(AnalysisError):
    pass


class NoCommonWindows(AnalysisError):
    pass


class SynthesisFailure(AnalysisError):
    pass
