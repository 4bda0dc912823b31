"""Single chokepoint for all model traffic.

Every chat or embedding call flows through :class:`ProviderGateway`, which
owns retries with exponential backoff, a process-wide rate limit, the
deterministic-response cache and per-attempt call traces. Backends only
translate one request into one reply.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import replace
from typing import Callable, Protocol, Sequence

from ..errors import DimensionMismatch, PreconditionError, ProviderError
from ..util import sha256_hex
from .cache import ResponseCache
from .config import CallTrace, ProviderConfig

logger = logging.getLogger(__name__)


class ChatBackend(Protocol):
    def complete(self, prompt: str, config: ProviderConfig) -> str: ...


class EmbeddingBackend(Protocol):
    def embed(self, texts: Sequence[str], config: ProviderConfig) -> list[list[float]]: ...


class ProviderGateway:
    def __init__(
        self,
        chat_backend: ChatBackend | None = None,
        embedding_backend: EmbeddingBackend | None = None,
        cache_dir: str | None = None,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        self._chat = chat_backend
        self._embed = embedding_backend
        self._cache = ResponseCache(cache_dir) if cache_dir else None
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._next_slot = 0.0
        self.traces: list[CallTrace] = []

    # -- plumbing ---------------------------------------------------------

    def _respect_rate_limit(self, config: ProviderConfig) -> None:
        if config.rate_limit_per_s is None:
            return
        interval = 1.0 / config.rate_limit_per_s
        with self._lock:
            now = self._clock()
            wait = self._next_slot - now
            self._next_slot = max(now, self._next_slot) + interval
        if wait > 0:
            self._sleep(wait)

    def _record(self, stage: str, config: ProviderConfig, digest: str, started: float, outcome: str) -> None:
        trace = CallTrace(
            stage=stage,
            model_id=config.model_id,
            prompt_digest=digest,
            latency_s=max(self._clock() - started, 0.0),
            outcome=outcome,
        )
        with self._lock:
            self.traces.append(trace)

    def _attempt_loop(self, fn: Callable[[], object], *, stage: str, config: ProviderConfig, digest: str) -> object:
        last_error: ProviderError | None = None
        for attempt in range(config.max_retries + 1):
            self._respect_rate_limit(config)
            started = self._clock()
            try:
                result = fn()
            except ProviderError as exc:
                final = attempt == config.max_retries or not exc.transient
                self._record(stage, config, digest, started, "failed" if final else "retried")
                if final:
                    raise
                last_error = exc
                delay = config.backoff_base_s * (2**attempt)
                logger.info("stage %s attempt %d failed (%s); retrying in %.2fs", stage, attempt + 1, exc, delay)
                self._sleep(delay)
                continue
            # attempts that trigger a retry are traced "retried", a terminal
            # failure "failed", and the attempt that produced a reply "ok"
            self._record(stage, config, digest, started, "ok")
            return result
        raise last_error if last_error else ProviderError("retry loop exited without result")

    # -- public calls -----------------------------------------------------

    def chat_complete(self, prompt: str, config: ProviderConfig, *, stage: str = "chat") -> str:
        if self._chat is None:
            raise ProviderError("no chat backend configured")
        if not prompt:
            raise PreconditionError("prompt must be non-empty")
        digest = sha256_hex(prompt)
        key = ResponseCache.key(config.model_id, digest, config.temperature, config.seed)
        if self._cache is not None and config.deterministic:
            hit = self._cache.get(key)
            if hit is not None:
                return hit
        reply = self._attempt_loop(
            lambda: self._chat.complete(prompt, config), stage=stage, config=config, digest=digest
        )
        assert isinstance(reply, str)
        if self._cache is not None and config.deterministic:
            self._cache.put(key, reply)
        return reply

    def embed(self, texts: Sequence[str], config: ProviderConfig, *, stage: str = "embed") -> list[list[float]]:
        if self._embed is None:
            raise ProviderError("no embedding backend configured")
        if not texts:
            raise PreconditionError("texts must be non-empty")
        if any(not t for t in texts):
            raise PreconditionError("texts must not contain empty strings")
        vectors: list[list[float]] = []
        for start in range(0, len(texts), config.embed_batch_size):
            batch = list(texts[start : start + config.embed_batch_size])
            digest = sha256_hex("\x00".join(batch))
            got = self._attempt_loop(
                lambda b=batch: self._embed.embed(b, config), stage=stage, config=config, digest=digest
            )
            assert isinstance(got, list)
            if len(got) != len(batch):
                raise ProviderError(f"embedding batch returned {len(got)} vectors for {len(batch)} texts")
            vectors.extend([float(x) for x in vec] for vec in got)
        dims = {len(v) for v in vectors}
        if len(dims) != 1:
            raise DimensionMismatch(f"inconsistent embedding dimensions in one call: {sorted(dims)}")
        return vectors


class ChatProvider:
    """A gateway bound to one chat model config; stages pass through."""

    def __init__(self, gateway: ProviderGateway, config: ProviderConfig) -> None:
        self.gateway = gateway
        self.config = config

    @property
    def model_id(self) -> str:
        return self.config.model_id

    def complete(self, prompt: str, *, stage: str = "chat", seed: int | None = None) -> str:
        config = self.config if seed is None else replace(self.config, seed=seed)
        return self.gateway.chat_complete(prompt, config, stage=stage)


class EmbeddingProvider:
    """A gateway bound to one embedding model config."""

    def __init__(self, gateway: ProviderGateway, config: ProviderConfig) -> None:
        self.gateway = gateway
        self.config = config

    @property
    def model_id(self) -> str:
        return self.config.model_id

    def embed(self, texts: Sequence[str], *, stage: str = "embed") -> list[list[float]]:
        return self.gateway.embed(texts, self.config, stage=stage)
