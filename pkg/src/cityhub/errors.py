"""Exception hierarchy shared across the hub.

Every error carries a stable machine ``code`` that also appears in HTTP
error bodies, so clients can switch on it without parsing messages.
"""


class HubError(Exception):
    code = "internal-error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


# -- identity / lookup ------------------------------------------------------

class InvalidId(HubError):
    code = "invalid-id"


class DuplicateFeed(HubError):
    code = "duplicate-feed"


class DuplicateStream(HubError):
    code = "duplicate-stream"


class UnknownFeed(HubError):
    code = "unknown-feed"


class UnknownStream(HubError):
    code = "unknown-stream"


class UnknownKey(HubError):
    code = "unknown-key"


class UnknownProvider(HubError):
    code = "unknown-provider"


# -- auth -------------------------------------------------------------------

class Unauthorized(HubError):
    code = "unauthorized"


class Forbidden(HubError):
    code = "forbidden"


class InvalidScope(HubError):
    code = "invalid-scope"


# -- queries ----------------------------------------------------------------

class InvalidFilter(HubError):
    code = "invalid-filter"


class InvalidRange(HubError):
    code = "invalid-range"


class InvalidWindow(HubError):
    code = "invalid-window"


class InvalidDatapoint(HubError):
    code = "invalid-datapoint"


class EmptyFeed(HubError):
    code = "empty-feed"


# -- EEML codec -------------------------------------------------------------

class MalformedXml(HubError):
    code = "malformed-xml"


class WrongNamespace(HubError):
    code = "wrong-namespace"


class MissingRequired(HubError):
    code = "missing-required"


class NonNumericValue(HubError):
    code = "non-numeric-value"


class DuplicateDataId(HubError):
    code = "duplicate-data-id"


class InvalidDocument(HubError):
    code = "invalid-document"


class MalformedDocument(HubError):
    code = "malformed-document"


# -- catalogue --------------------------------------------------------------

class InvalidCatalogue(HubError):
    code = "invalid-catalogue"


# -- persistence ------------------------------------------------------------

class CorruptLog(HubError):
    code = "corrupt-log"


# -- edge adapter -----------------------------------------------------------

class MalformedMapping(HubError):
    code = "malformed-mapping"


class DuplicateStreamRule(HubError):
    code = "duplicate-stream-rule"


class UnsupportedTimestampFormat(HubError):
    code = "unsupported-timestamp-format"


class MissingHeader(HubError):
    code = "missing-header"


class MissingColumn(HubError):
    code = "missing-column"


class EmptyInput(HubError):
    code = "empty-input"


class SourceUnreadable(HubError):
    code = "source-unreadable"


class HubUnreachable(HubError):
    code = "hub-unreachable"


# -- service ----------------------------------------------------------------

class InvalidBody(HubError):
    code = "invalid-body"


class BindFailure(HubError):
    code = "bind-failure"


# HTTP status per error code. Anything not listed maps to 400.
STATUS_BY_CODE = {
    "unauthorized": 401,
    "forbidden": 403,
    "unknown-feed": 404,
    "unknown-stream": 404,
    "unknown-key": 404,
    "unknown-provider": 404,
    "duplicate-feed": 409,
    "duplicate-stream": 409,
    "empty-feed": 409,
}


def status_for(code: str) -> int:
    return STATUS_BY_CODE.get(code, 400)
