"""Runtime configuration: defaults, config file, environment, flag overrides.

Sources merge with fixed precedence: explicit overrides (CLI flags) beat
environment variables, which beat the config file, which beats defaults.
Config files are plain KEY=VALUE lines; environment variables use the same
keys uppercased with a REBUTTAL_ prefix (REBUTTAL_ENDPOINT, REBUTTAL_K, ...).

Credentials never live in config values directly: the `auth` key holds an
indirection ("env:VAR_NAME" or "file:/path/to/secret") resolved at call time.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Mapping

from .errors import SchemaMismatch
from .providers import (
    EmbeddingProvider,
    ChatProvider,
    HashEmbeddingBackend,
    HttpChatBackend,
    HttpEmbeddingBackend,
    MockRebuttalModel,
    ProviderConfig,
    ProviderGateway,
)
from .rewards import RewardWeights

ENV_PREFIX = "REBUTTAL_"


@dataclass(frozen=True)
class AppConfig:
    endpoint: str = "mock://local"
    model: str = "teacher-chat"
    embed_endpoint: str = "mock://local"
    embed_model: str = "hash-embed-32"
    auth: str | None = "env:REBUTTAL_API_KEY"
    temperature: float = 0.0
    seed: int | None = None
    k: int = 3
    group_size: int = 5
    weights: str | None = None
    timeout_s: float = 30.0
    max_retries: int = 2
    rate_limit_per_s: float | None = None
    data_dir: str = "runs"
    cache_dir: str | None = None
    host: str = "127.0.0.1"
    port: int = 8054
    mock: bool = False

    def __post_init__(self) -> None:
        if self.k < 1:
            raise SchemaMismatch("k must be >= 1")
        if self.group_size < 1:
            raise SchemaMismatch("group_size must be >= 1")
        if not 1 <= self.port <= 65535:
            raise SchemaMismatch(f"port out of range: {self.port}")
        if self.temperature < 0:
            raise SchemaMismatch("temperature must be >= 0")
        if self.weights is not None:
            self.reward_weights()  # validate eagerly

    def reward_weights(self) -> RewardWeights:
        if self.weights is None:
            return RewardWeights()
        parts = [p.strip() for p in self.weights.split(",")]
        if len(parts) != 4:
            raise SchemaMismatch(
                "weights must be four comma-separated numbers: format,think,resp,div"
            )
        try:
            f, t, r, d = (float(p) for p in parts)
        except ValueError as exc:
            raise SchemaMismatch(f"weights must be numeric: {self.weights!r}") from exc
        return RewardWeights(format=f, think=t, resp=r, div=d)

    @property
    def use_mock(self) -> bool:
        return self.mock or self.endpoint.startswith("mock:")


_FIELD_TYPES = {f.name: f.type for f in fields(AppConfig)}

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _coerce(key: str, raw: str) -> object:
    raw = raw.strip()
    kind = _FIELD_TYPES[key]
    if kind == "bool":
        low = raw.lower()
        if low in _TRUE:
            return True
        if low in _FALSE:
            return False
        raise SchemaMismatch(f"{key}: expected a boolean, got {raw!r}")
    if raw.lower() in {"", "none", "null"}:
        if "None" in kind:
            return None
        raise SchemaMismatch(f"{key}: value required")
    try:
        if kind.startswith("int"):
            return int(raw)
        if kind.startswith("float"):
            return float(raw)
    except ValueError as exc:
        raise SchemaMismatch(f"{key}: {exc}") from exc
    return raw


def read_config_file(path: str | Path) -> dict[str, object]:
    """Parse KEY=VALUE lines; '#' starts a comment; unknown keys are errors."""
    values: dict[str, object] = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SchemaMismatch(f"{path}:{line_no}: expected KEY=VALUE")
        key, raw = line.split("=", 1)
        key = key.strip().lower()
        if key not in _FIELD_TYPES:
            raise SchemaMismatch(f"{path}:{line_no}: unknown key {key!r}")
        values[key] = _coerce(key, raw)
    return values


def _env_values(env: Mapping[str, str]) -> dict[str, object]:
    values: dict[str, object] = {}
    for key in _FIELD_TYPES:
        var = ENV_PREFIX + key.upper()
        if var in env:
            values[key] = _coerce(key, env[var])
    return values


def load_config(
    path: str | Path | None = None,
    *,
    env: Mapping[str, str] | None = None,
    overrides: Mapping[str, object] | None = None,
) -> AppConfig:
    env = os.environ if env is None else env
    merged: dict[str, object] = {}
    if path is not None:
        merged.update(read_config_file(path))
    merged.update(_env_values(env))
    if overrides:
        for key, value in overrides.items():
            if key not in _FIELD_TYPES:
                raise SchemaMismatch(f"unknown config key {key!r}")
            if value is not None:
                merged[key] = value
    return AppConfig(**merged)


@dataclass(frozen=True)
class Runtime:
    """Wired providers ready for pipeline use."""

    config: AppConfig
    gateway: ProviderGateway
    chat: ChatProvider
    embedder: EmbeddingProvider

    def chat_with(self, *, seed: int | None = None) -> ChatProvider:
        if seed is None:
            return self.chat
        return ChatProvider(self.gateway, replace(self.chat.config, seed=seed))


def build_runtime(config: AppConfig) -> Runtime:
    """Pick backends (offline mock vs HTTP) and wire the shared gateway."""
    if config.use_mock:
        chat_backend = MockRebuttalModel()
        embed_backend = HashEmbeddingBackend()
        endpoint = "mock://local"
        embed_endpoint = "mock://local"
        auth = None
    else:
        chat_backend = HttpChatBackend()
        embed_backend = HttpEmbeddingBackend()
        endpoint = config.endpoint
        embed_endpoint = config.embed_endpoint
        auth = config.auth
    gateway = ProviderGateway(
        chat_backend=chat_backend,
        embedding_backend=embed_backend,
        cache_dir=config.cache_dir,
    )
    chat_cfg = ProviderConfig(
        endpoint=endpoint,
        model_id=config.model,
        auth=auth,
        temperature=config.temperature,
        seed=config.seed,
        max_retries=config.max_retries,
        timeout_s=config.timeout_s,
        rate_limit_per_s=config.rate_limit_per_s,
    )
    embed_cfg = ProviderConfig(
        endpoint=embed_endpoint,
        model_id=config.embed_model,
        auth=auth,
        temperature=0.0,
        max_retries=config.max_retries,
        timeout_s=config.timeout_s,
        rate_limit_per_s=config.rate_limit_per_s,
    )
    return Runtime(
        config=config,
        gateway=gateway,
        chat=ChatProvider(gateway, chat_cfg),
        embedder=EmbeddingProvider(gateway, embed_cfg),
    )
