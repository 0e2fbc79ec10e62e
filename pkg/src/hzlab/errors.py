"""Exception hierarchy for hzlab."""


class HzlabError(Exception):
    """Base class for every error raised by this package."""


class PoleProximity(HzlabError):
    pass


class InvalidShift(HzlabError):
    pass


class PrecisionUnreachable(HzlabError):
    pass


class GammaOverflow(HzlabError):
    pass


class InvalidRange(HzlabError):
    pass


class NodesTooFew(HzlabError):
    pass


class CoefficientTooLarge(HzlabError):
    pass


class StepTooCoarse(HzlabError):
    pass


class TooFewPoints(HzlabError):
    pass


class DegenerateDesign(HzlabError):
    pass


class ConfigError(HzlabError):
    """Invalid or missing configuration key. ``key`` names the offender."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


class CacheCorrupt(HzlabError):
    pass
