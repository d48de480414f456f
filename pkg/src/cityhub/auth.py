"""Keys, roles, and the permission matrix.

Every authenticated call presents X-Api-Key; authorize() is a pure
function of the key record, the subscription set, and the matrix. A deny
always carries a machine reason.
"""
from __future__ import annotations

import secrets as _secrets
import string
from dataclasses import dataclass
from datetime import datetime
from typing import Callable, Optional

from .errors import InvalidScope, UnknownKey

ROLE_OPERATOR = "PlatformOperator"
ROLE_PROVIDER = "DataProvider"
ROLE_DEVELOPER = "AppDeveloper"
ROLE_END_USER = "EndUser"
ROLES = (ROLE_OPERATOR, ROLE_PROVIDER, ROLE_DEVELOPER, ROLE_END_USER)

ACTIONS = (
    "create_feed", "create_stream", "ingest", "read_data", "read_latest",
    "subscribe", "issue_key", "revoke_key",
)

_BASE62 = string.ascii_letters + string.digits


def generate_secret(length: int = 32) -> str:
    return "".join(_secrets.choice(_BASE62) for _ in range(length))


@dataclass
class ApiKey:
    id: str
    secret: str
    role: str
    scope: Optional[str]  # None = all feeds, else a FeedId
    label: str
    created_at: datetime
    revoked: bool = False

    def __post_init__(self):
        if self.role not in ROLES:
            raise InvalidScope(f"unknown role {self.role!r}")
        if self.role == ROLE_PROVIDER and self.scope is None:
            raise InvalidScope("DataProvider keys must be feed-scoped")
        if self.role == ROLE_OPERATOR and self.scope is not None:
            raise InvalidScope("PlatformOperator keys cover all feeds")


@dataclass(frozen=True)
class Decision:
    allow: bool
    reason: str = ""


ALLOW = Decision(True, "")


class KeyStore:
    def __init__(self):
        self._by_id = {}
        self._by_secret = {}

    def add(self, key: ApiKey):
        assert key.secret not in self._by_secret, "secret collision"
        self._by_id[key.id] = key
        self._by_secret[key.secret] = key

    def revoke(self, key_id: str):
        try:
            self._by_id[key_id].revoked = True
        except KeyError:
            raise UnknownKey(key_id) from None

    def by_secret(self, secret: Optional[str]) -> Optional[ApiKey]:
        if not secret:
            return None
        key = self._by_secret.get(secret)
        if key is None or key.revoked:
            return None
        return key

    def by_id(self, key_id: str) -> ApiKey:
        try:
            return self._by_id[key_id]
        except KeyError:
            raise UnknownKey(key_id) from None

    def has(self, key_id: str) -> bool:
        return key_id in self._by_id

    def authorize(self, secret: Optional[str], action: str,
                  resource: Optional[str],
                  is_subscribed: Callable[[str, str], bool]) -> Decision:
        """Evaluate the permission matrix.

        is_subscribed(key_id, feed_id) supplies the developer subscription
        state; resource is the target FeedId where the action has one.
        """
        key = self.by_secret(secret)
        if key is None:
            return Decision(False, "unauthorized")

        if key.role == ROLE_OPERATOR:
            if action == "subscribe":
                return Decision(False, "wrong-role")
            return ALLOW

        if action in ("issue_key", "revoke_key", "create_feed"):
            return Decision(False, "forbidden")

        # feed-scoped keys act only on their own feed
        if key.scope is not None and resource is not None and key.scope != resource:
            reason = "not-owner" if key.role == ROLE_PROVIDER else "out-of-scope"
            return Decision(False, reason)

        if key.role == ROLE_PROVIDER:
            if action == "subscribe":
                return Decision(False, "wrong-role")
            return ALLOW  # create_stream, ingest, read_data, read_latest on own feed

        if key.role == ROLE_DEVELOPER:
            if action == "subscribe":
                return ALLOW
            if action in ("read_data", "read_latest"):
                if resource is not None and is_subscribed(key.id, resource):
                    return ALLOW
                return Decision(False, "not-subscribed")
            return Decision(False, "forbidden")

        # EndUser: portal-style consumption only
        if action == "read_latest":
            return ALLOW
        if action == "subscribe":
            return Decision(False, "wrong-role")
        return Decision(False, "forbidden")
