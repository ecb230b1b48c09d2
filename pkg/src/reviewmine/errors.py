class ReviewMineError(Exception):
    """Base class for every error raised by the package."""


class CorpusFormatError(ReviewMineError):
    pass


class LexiconError(ReviewMineError):
    pass


class AnnotationFormatError(ReviewMineError):
    pass


class AgreementError(ReviewMineError):
    pass
