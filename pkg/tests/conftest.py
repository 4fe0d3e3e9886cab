"""Shared fixtures: scripted gateways and temp workspaces."""

from __future__ import annotations

import pytest

from editkit.gateway import BackendConfig, Gateway, MockBackend


def scripted_gateway(responses: list, max_reprompts: int = 2) -> tuple[Gateway, MockBackend]:
    """Gateway wired to a MockBackend that replays `responses` in order."""
    backend = MockBackend(responses)
    config = BackendConfig(
        endpoint_url="mock://", model_id="mock-model", retry_backoff=0.0, max_retries=3
    )
    return Gateway(config=config, backend=backend, max_reprompts=max_reprompts), backend


@pytest.fixture
def make_gateway():
    return scripted_gateway


@pytest.fixture
def workspace(tmp_path):
    root = tmp_path / "ws"
    root.mkdir()
    return root
