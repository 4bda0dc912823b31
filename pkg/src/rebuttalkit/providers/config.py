"""Provider endpoint configuration and per-attempt call traces."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import urlparse

CALL_OUTCOMES: tuple[str, ...] = ("ok", "retried", "failed")


@dataclass(frozen=True)
class ProviderConfig:
    """Where and how to call one model endpoint.

    ``auth`` names a secret source, never a secret value: ``env:VAR`` reads
    an environment variable, ``file:/path`` reads a file. Run configs and
    logs therefore never contain credentials.
    """

    endpoint: str
    model_id: str
    auth: str | None = None
    temperature: float = 0.0
    seed: int | None = None
    max_retries: int = 2
    timeout_s: float = 30.0
    rate_limit_per_s: float | None = None
    embed_batch_size: int = 64
    backoff_base_s: float = 0.25

    def __post_init__(self) -> None:
        parsed = urlparse(self.endpoint)
        if parsed.scheme not in ("http", "https", "mock") or (parsed.scheme != "mock" and not parsed.netloc):
            raise ValueError(f"endpoint must be an http(s) or mock URL, got {self.endpoint!r}")
        if not self.model_id:
            raise ValueError("model_id must be non-empty")
        if self.auth is not None and not (self.auth.startswith("env:") or self.auth.startswith("file:")):
            raise ValueError("auth must be 'env:VAR' or 'file:/path'; literal secrets are not accepted")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be > 0")
        if self.rate_limit_per_s is not None and self.rate_limit_per_s <= 0:
            raise ValueError("rate_limit_per_s must be > 0 when set")
        if self.embed_batch_size < 1:
            raise ValueError("embed_batch_size must be >= 1")

    @property
    def deterministic(self) -> bool:
        """True when a reply is a pure function of (model, prompt, seed)."""
        return self.temperature == 0 or self.seed is not None


def resolve_auth(config: ProviderConfig, env: dict[str, str] | None = None) -> str | None:
    """Materialize the secret named by ``config.auth``; None when unset."""
    if config.auth is None:
        return None
    source = env if env is not None else os.environ
    if config.auth.startswith("env:"):
        name = config.auth[4:]
        value = source.get(name)
        if not value:
            raise ValueError(f"auth environment variable {name!r} is not set")
        return value
    path = Path(config.auth[5:])
    try:
        return path.read_text(encoding="utf-8").strip()
    except OSError as exc:
        raise ValueError(f"auth secrets file {path} unreadable: {exc}") from exc


@dataclass(frozen=True)
class CallTrace:
    """One provider attempt: stage label, target model, prompt digest,
    wall latency and outcome (ok / retried / failed)."""

    stage: str
    model_id: str
    prompt_digest: str
    latency_s: float
    outcome: str

    def __post_init__(self) -> None:
        if self.outcome not in CALL_OUTCOMES:
            raise ValueError(f"outcome must be one of {CALL_OUTCOMES}, got {self.outcome!r}")
