"""Error types raised by the workbench.

Input and usage problems exit with status 2 from the command line; a failed
exact verification exits with status 1.
"""

USAGE = 2
VERIFICATION = 1


class WorkbenchError(Exception):
    code = 'workbench-error'
    exit_status = USAGE

    def __str__(self):
        message = super().__str__()
        return f"[{self.code}] {message}"


class ParseError(WorkbenchError):
    code = 'parse-error'

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


class AlphabetMismatch(WorkbenchError):
    code = 'rank-mismatch'


class ResourceCapExceeded(WorkbenchError):
    code = 'cap-exceeded'

    def __init__(self, cap_name, limit, needed=None):
        self.cap_name = cap_name
        self.limit = limit
        self.needed = needed
        detail = f"{cap_name} of {limit} exceeded"
        if needed is not None:
            detail += f" (needs {needed})"
        super().__init__(detail)


class NotInSubgroup(WorkbenchError):
    code = 'not-in-subgroup'


class SupportEscapesSubgroup(WorkbenchError):
    code = 'support-escapes-subgroup'


class AugmentationNonzero(WorkbenchError):
    code = 'augmentation-nonzero'


class CosetSumNonzero(WorkbenchError):
    code = 'coset-sum-nonzero'

    def __init__(self, coset_index, value):
        self.coset_index = coset_index
        self.value = value
        super().__init__(f"sum over coset {coset_index} is {value}, not 0")


class NotNormal(WorkbenchError):
    code = 'not-normal'


class NonGeodesicFactorization(WorkbenchError):
    code = 'non-geodesic'


class UncomputableInfimum(WorkbenchError):
    code = 'uncomputable-infimum'


class WeightError(WorkbenchError):
    code = 'weight-error'


class UnknownName(WorkbenchError):
    code = 'unknown-name'


class ZeroElement(WorkbenchError):
    code = 'zero-element'


class VerificationError(WorkbenchError):
    code = 'verification-failed'
    exit_status = VERIFICATION


class NoSeparatingQuotient(WorkbenchError):
    code = 'not-separated'
    exit_status = VERIFICATION

    def __init__(self, message, result=None):
        self.result = result
        super().__init__(message)
