import pytest

from cityhub.auth import (
    ACTIONS,
    ROLE_DEVELOPER,
    ROLE_END_USER,
    ROLE_OPERATOR,
    ROLE_PROVIDER,
)
from cityhub.errors import Forbidden, InvalidScope, Unauthorized, UnknownKey
from cityhub.model import GeoPoint

from conftest import seed_emirates

# matrix of role/ownership state -> allowed actions, straight from the
# access policy contract
MATRIX = {
    ("Operator", "any"): {
        "create_feed", "create_stream", "ingest", "read_data",
        "read_latest", "issue_key", "revoke_key"},
    ("Provider", "own"): {
        "create_stream", "ingest", "read_data", "read_latest"},
    ("Provider", "other"): set(),
    ("Developer", "subscribed"): {"read_data", "read_latest", "subscribe"},
    ("Developer", "other"): {"subscribe"},
    ("EndUser", "any"): {"read_latest"},
}


@pytest.fixture
def world(hub, operator):
    """Two feeds, one provider key per feed, a developer subscribed to
    feed A only, and an end user."""
    feed_a, _, lat, lon = ("feed-a", "Feed A", 24.0, 54.0)
    hub.create_feed("feed-a", "Feed A", GeoPoint(24.0, 54.0), set(),
                    operator.id)
    hub.create_feed("feed-b", "Feed B", GeoPoint(25.0, 55.0), set(),
                    operator.id)
    provider_a = hub.issue_key(ROLE_PROVIDER, "feed-a", "prov a",
                               hub.bootstrap_secret)
    developer = hub.issue_key(ROLE_DEVELOPER, None, "dev",
                              hub.bootstrap_secret)
    end_user = hub.issue_key(ROLE_END_USER, None, "end user",
                             hub.bootstrap_secret)
    hub.subscribe(developer.id, "feed-a")
    return {
        "Operator": operator,
        "Provider": provider_a,
        "Developer": developer,
        "EndUser": end_user,
    }


def _cases(world):
    for (role, state), allowed in MATRIX.items():
        key = world[role]
        if role == "Provider":
            resource = "feed-a" if state == "own" else "feed-b"
        elif role == "Developer":
            resource = "feed-a" if state == "subscribed" else "feed-b"
        else:
            resource = "feed-a"
        for action in ACTIONS:
            yield key, action, resource, action in allowed


def test_full_matrix(hub, world):
    """Exhaustive (role, action, ownership/subscription) enumeration."""
    for key, action, resource, expected in _cases(world):
        decision = hub.authorize(key.secret, action, resource)
        assert decision.allow == expected, (key.role, action, resource)
        if not decision.allow:
            assert decision.reason  # deny always carries a reason


def test_authorize_is_pure(hub, world):
    seq_before = hub.log.seq
    for key, action, resource, _ in _cases(world):
        hub.authorize(key.secret, action, resource)
    assert hub.log.seq == seq_before


def test_unknown_secret_denied(hub):
    decision = hub.authorize("not-a-secret", "read_latest", None)
    assert not decision.allow
    assert decision.reason == "unauthorized"
    assert not hub.authorize(None, "read_latest", None).allow


def test_developer_unsubscribed_reason(hub, world):
    decision = hub.authorize(world["Developer"].secret, "read_data", "feed-b")
    assert decision == decision.__class__(False, "not-subscribed")


def test_issue_key_requires_operator(hub, world):
    with pytest.raises(Forbidden):
        hub.issue_key(ROLE_DEVELOPER, None, "x", world["Developer"].secret)
    with pytest.raises(Unauthorized):
        hub.issue_key(ROLE_DEVELOPER, None, "x", "bogus")


def test_provider_key_must_be_scoped(hub, world):
    with pytest.raises(InvalidScope):
        hub.issue_key(ROLE_PROVIDER, None, "x", hub.bootstrap_secret)


def test_operator_key_must_be_global(hub, world):
    with pytest.raises(InvalidScope):
        hub.issue_key(ROLE_OPERATOR, "feed-a", "x", hub.bootstrap_secret)


def test_secret_format(hub, world):
    for key in world.values():
        assert len(key.secret) >= 32
        assert key.secret.isalnum()


def test_auto_feed_key_scope(hub, operator):
    keys = seed_emirates(hub, operator, with_streams=False)
    secrets = {k.secret for k in keys.values()}
    assert len(secrets) == len(keys)  # distinct per feed
    auto = keys["abu-dhabi-weather"]
    assert hub.authorize(auto.secret, "ingest", "abu-dhabi-weather").allow
    for fid in keys:
        if fid == "abu-dhabi-weather":
            continue
        assert not hub.authorize(auto.secret, "ingest", fid).allow
    assert not hub.authorize(auto.secret, "create_feed", None).allow
    assert not hub.authorize(auto.secret, "issue_key", None).allow


def test_revoke_then_deny(hub, world):
    developer = world["Developer"]
    hub.revoke_key(developer.id, hub.bootstrap_secret)
    decision = hub.authorize(developer.secret, "subscribe", "feed-a")
    assert not decision.allow
    assert decision.reason == "unauthorized"


def test_revoke_unknown_key(hub):
    with pytest.raises(UnknownKey):
        hub.revoke_key("key-nope", hub.bootstrap_secret)


def test_revoke_requires_operator(hub, world):
    with pytest.raises(Forbidden):
        hub.revoke_key(world["Developer"].id, world["Developer"].secret)
