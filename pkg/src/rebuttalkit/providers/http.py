"""OpenAI-compatible HTTP backends (chat completions + embeddings)."""

from __future__ import annotations

import json
from typing import Any, Sequence

import httpx

from ..errors import ProviderError, ProviderTimeout
from .config import ProviderConfig, resolve_auth

_TRANSIENT_STATUS = {408, 409, 429, 500, 502, 503, 504}


def _headers(config: ProviderConfig) -> dict[str, str]:
    headers = {"Content-Type": "application/json"}
    secret = resolve_auth(config)
    if secret:
        headers["Authorization"] = f"Bearer {secret}"
    return headers


def _post(client: httpx.Client, url: str, payload: dict[str, Any], config: ProviderConfig) -> dict[str, Any]:
    try:
        response = client.post(url, json=payload, headers=_headers(config), timeout=config.timeout_s)
    except httpx.TimeoutException as exc:
        raise ProviderTimeout(f"request to {url} timed out after {config.timeout_s}s") from exc
    except httpx.HTTPError as exc:
        raise ProviderError(f"transport failure calling {url}: {exc}", transient=True) from exc
    if response.status_code != 200:
        raise ProviderError(
            f"{url} returned HTTP {response.status_code}",
            transient=response.status_code in _TRANSIENT_STATUS,
            status_code=response.status_code,
        )
    try:
        body = response.json()
    except json.JSONDecodeError as exc:
        raise ProviderError(f"{url} returned non-JSON body", transient=True) from exc
    if not isinstance(body, dict):
        raise ProviderError(f"{url} returned a non-object body", transient=True)
    return body


class HttpChatBackend:
    def __init__(self, client: httpx.Client | None = None) -> None:
        self._client = client or httpx.Client()

    def complete(self, prompt: str, config: ProviderConfig) -> str:
        url = config.endpoint.rstrip("/") + "/chat/completions"
        payload: dict[str, Any] = {
            "model": config.model_id,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": config.temperature,
        }
        if config.seed is not None:
            payload["seed"] = config.seed
        body = _post(self._client, url, payload, config)
        try:
            content = body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"unexpected chat completion shape from {url}") from exc
        if not isinstance(content, str):
            raise ProviderError(f"chat completion content is not text ({type(content).__name__})")
        return content


class HttpEmbeddingBackend:
    def __init__(self, client: httpx.Client | None = None) -> None:
        self._client = client or httpx.Client()

    def embed(self, texts: Sequence[str], config: ProviderConfig) -> list[list[float]]:
        url = config.endpoint.rstrip("/") + "/embeddings"
        body = _post(self._client, url, {"model": config.model_id, "input": list(texts)}, config)
        data = body.get("data")
        if not isinstance(data, list) or len(data) != len(texts):
            raise ProviderError(f"unexpected embeddings shape from {url}")
        try:
            ordered = sorted(data, key=lambda d: d["index"])
            return [[float(x) for x in d["embedding"]] for d in ordered]
        except (KeyError, TypeError, ValueError) as exc:
            raise ProviderError(f"unexpected embeddings shape from {url}") from exc
