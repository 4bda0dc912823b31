"""Model endpoint access: config, gateway, HTTP and offline backends."""

from .cache import ResponseCache
from .config import CALL_OUTCOMES, CallTrace, ProviderConfig, resolve_auth
from .gateway import ChatProvider, EmbeddingProvider, ProviderGateway
from .http import HttpChatBackend, HttpEmbeddingBackend
from .mock import HashEmbeddingBackend, MockRebuttalModel, ScriptedChatBackend

__all__ = [
    "CALL_OUTCOMES",
    "CallTrace",
    "ChatProvider",
    "EmbeddingProvider",
    "HashEmbeddingBackend",
    "HttpChatBackend",
    "HttpEmbeddingBackend",
    "MockRebuttalModel",
    "ProviderConfig",
    "ProviderGateway",
    "ResponseCache",
    "ScriptedChatBackend",
    "resolve_auth",
]
