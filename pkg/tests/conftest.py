"""Shared fixtures: a four-comment review with its gold profile, a small
manuscript, and providers wired to the offline backends."""

from __future__ import annotations

import json

import pytest

from rebuttalkit.model import ReviewDocument
from rebuttalkit.providers import (
    ChatProvider,
    EmbeddingProvider,
    HashEmbeddingBackend,
    MockRebuttalModel,
    ProviderConfig,
    ProviderGateway,
    ScriptedChatBackend,
)
from rebuttalkit.retrieval import build_manuscript
from rebuttalkit.tsr import TsrEngine

# A reviewer pass with one comment per major category: incremental novelty,
# missing baselines, a figure complaint, and an out-of-scope demand.
FOUR_COMMENT_REVIEW = (
    "Summary of the paper:\n"
    "The paper proposes a contrastive pretraining method built around a momentum "
    "queue of negatives and evaluates it on image classification benchmarks.\n"
    "\n"
    "Strengths:\n"
    "- The writing is generally easy to follow.\n"
    "\n"
    "Weaknesses:\n"
    "1. The proposed method, while having some merit, feels like an incremental "
    "improvement over recent works like DINO and MoCo. The novelty is not strongly "
    "articulated.\n"
    "2. Crucially, the authors did not compare their method's performance when using "
    "a standard ResNet-101 backbone, which makes it hard to fairly judge the results "
    "against other publications.\n"
    "3. Figure 3 is hard to interpret. The axes are not clearly labeled, and the "
    "color choice is poor.\n"
    "4. The paper would be much stronger if the method was also shown to work on "
    "video data, not just static images."
)

FOUR_COMMENT_GOLD = {
    "global_profile": {
        "overall_stance": "Probably Reject",
        "overall_attitude": "Skeptical",
        "dominant_concern": "Experimental Rigor",
        "reviewer_expertise": "Domain Expert",
        "confidence": 10,
    },
    "comment_analysis": [
        {
            "comment_id": 1,
            "comment_text": (
                "The proposed method, while having some merit, feels like an incremental "
                "improvement over recent works like DINO and MoCo. The novelty is not "
                "strongly articulated."
            ),
            "category": "Novelty & Significance",
            "sub_category": "Incremental Contribution",
            "severity": "Major",
            "confidence": 10,
        },
        {
            "comment_id": 2,
            "comment_text": (
                "Crucially, the authors did not compare their method's performance when "
                "using a standard ResNet-101 backbone, which makes it hard to fairly "
                "judge the results against other publications."
            ),
            "category": "Experimental Rigor",
            "sub_category": "Baselines Missing/Weak",
            "severity": "Major",
            "confidence": 10,
        },
        {
            "comment_id": 3,
            "comment_text": (
                "Figure 3 is hard to interpret. The axes are not clearly labeled, and "
                "the color choice is poor."
            ),
            "category": "Presentation & Clarity",
            "sub_category": "Figure/Table Quality",
            "severity": "Minor",
            "confidence": 10,
        },
        {
            "comment_id": 4,
            "comment_text": (
                "The paper would be much stronger if the method was also shown to work "
                "on video data, not just static images."
            ),
            "category": "Meta-Critique & Reviewer Behavior",
            "sub_category": "Unrealistic/Unconstructive Comment",
            "severity": "Minor",
            "confidence": 6,
        },
    ],
}

MANUSCRIPT_BODY = (
    "Momentum Queues for Contrastive Pretraining\n"
    "\n"
    "We introduce a contrastive pretraining method built around a momentum-updated "
    "queue of negatives, which stabilizes training at small batch sizes while matching "
    "large-batch systems on the standard benchmarks we evaluate.\n"
    "\n"
    "Our evaluation covers linear probing and full fine-tuning on three image "
    "classification datasets, and every number is the mean over five seeds with the "
    "standard deviation reported alongside it in the tables.\n"
    "\n"
    "Ablations isolate the contribution of queue size, momentum coefficient, and "
    "augmentation strength, and the queue dominates the other two factors by a wide "
    "margin on every dataset we tried in this study.\n"
    "\n"
    "Figure 3 plots accuracy against pretraining epochs for all datasets; the axes "
    "show epochs and top-1 accuracy, and each curve is one dataset with its own color "
    "from a colorblind-safe palette described in the caption."
)


def mock_config(model_id: str = "mock-chat", **overrides) -> ProviderConfig:
    overrides.setdefault("auth", None)
    return ProviderConfig(endpoint="mock://local", model_id=model_id, **overrides)


def make_mock_chat() -> tuple[ChatProvider, MockRebuttalModel]:
    backend = MockRebuttalModel()
    gateway = ProviderGateway(chat_backend=backend)
    return ChatProvider(gateway, mock_config()), backend


def make_scripted_chat(
    script=None, rules=None, *, max_retries: int = 2
) -> tuple[ChatProvider, ScriptedChatBackend]:
    backend = ScriptedChatBackend(script=script, rules=rules)
    gateway = ProviderGateway(chat_backend=backend, sleep=lambda _: None)
    return ChatProvider(gateway, mock_config("scripted-chat", max_retries=max_retries)), backend


def make_mock_embedder(dim: int = 32) -> tuple[EmbeddingProvider, HashEmbeddingBackend]:
    backend = HashEmbeddingBackend(dim=dim)
    gateway = ProviderGateway(embedding_backend=backend)
    return EmbeddingProvider(gateway, mock_config("hash-embed")), backend


@pytest.fixture()
def gold_payload() -> dict:
    return json.loads(json.dumps(FOUR_COMMENT_GOLD))


@pytest.fixture()
def gold_json() -> str:
    return json.dumps(FOUR_COMMENT_GOLD)


@pytest.fixture()
def manuscript():
    return build_manuscript("m1", "Momentum Queues", MANUSCRIPT_BODY)


@pytest.fixture()
def review(manuscript) -> ReviewDocument:
    return ReviewDocument(id="rev1", manuscript_id=manuscript.id, raw_text=FOUR_COMMENT_REVIEW)


@pytest.fixture()
def mock_chat() -> ChatProvider:
    provider, _ = make_mock_chat()
    return provider


@pytest.fixture()
def mock_embedder() -> EmbeddingProvider:
    provider, _ = make_mock_embedder()
    return provider


@pytest.fixture()
def engine(mock_chat, mock_embedder) -> TsrEngine:
    return TsrEngine(mock_chat, mock_embedder)
