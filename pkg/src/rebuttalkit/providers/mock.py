"""Deterministic offline backends.

``MockRebuttalModel`` recognizes each prompt template by its leading role
sentence and fabricates schema-valid output as a pure function of
(prompt, seed), so cached and uncached runs agree byte for byte.
"""

from __future__ import annotations

import json
import random
import re
from typing import Sequence

import numpy as np

from ..model import taxonomy
from ..util import sha256_hex, stable_seed
from .config import ProviderConfig


def _tokens(text: str) -> set[str]:
    return set(re.findall(r"[a-z0-9]+", text.lower()))


def _overlap(candidate: str, reference: str) -> float:
    ref = _tokens(reference)
    if not ref:
        return 0.0
    return len(_tokens(candidate) & ref) / len(ref)


def _section(prompt: str, label: str, all_labels: Sequence[str]) -> str:
    """Slice the last occurrence of a labeled slot section out of a prompt."""
    marker = f"\n{label}\n"
    start = prompt.rfind(marker)
    if start == -1:
        return ""
    start += len(marker)
    end = len(prompt)
    for other in all_labels:
        if other == label:
            continue
        pos = prompt.find(f"\n{other}\n", start)
        if pos != -1:
            end = min(end, pos)
    return prompt[start:end].strip()


_DEMAND_HINTS = (
    "compare",
    "comparison",
    "baseline",
    "ablation",
    "additional experiment",
    "new experiment",
    "more experiments",
    "further experiments",
    "evaluate on",
    "test on",
    "benchmark",
    "shown to work on",
    "report results",
    "retrain",
    "re-run",
)

_ITEM_RE = re.compile(r"^\s*(?:\d+[.)]|[-*\u2022])\s+(.*)$")
_HEADER_RE = re.compile(r"^\s*([A-Za-z][A-Za-z /&']{0,60}):?\s*$")


def _split_review_items(review: str) -> list[str]:
    """Numbered/bulleted items outside strengths-like sections; falls back to
    non-leading paragraphs for free-prose reviews."""
    items: list[str] = []
    skipping = False
    current: list[str] = []

    def flush() -> None:
        if current:
            items.append(" ".join(part.strip() for part in current).strip())
            current.clear()

    for line in review.splitlines():
        header = _HEADER_RE.match(line)
        if header and not _ITEM_RE.match(line):
            flush()
            title = header.group(1).lower()
            skipping = "strength" in title or "summary of the paper" in title
            continue
        item = _ITEM_RE.match(line)
        if item:
            flush()
            if not skipping:
                current.append(item.group(1))
            continue
        if current and line.strip():
            current.append(line)
        elif not line.strip():
            flush()
    flush()
    if items:
        return items
    paragraphs = [p.strip().replace("\n", " ") for p in re.split(r"\n\s*\n", review) if p.strip()]
    return paragraphs[1:5] if len(paragraphs) > 1 else []


def _classify(text: str) -> tuple[str, str, str]:
    lowered = text.lower()
    if any(w in lowered for w in ("figure", "table", "axes", "label", "plot")):
        return "Presentation & Clarity", "Figure/Table Quality", "Minor"
    if any(w in lowered for w in ("typo", "writing", "grammar", "organiz", "readab")):
        return "Presentation & Clarity", "Writing Issues/Typos", "Minor"
    if "related work" in lowered or "citation" in lowered:
        return "Presentation & Clarity", "Related Work Incomplete", "Minor"
    if "baseline" in lowered or "compare" in lowered or "comparison" in lowered:
        return "Experimental Rigor", "Baselines Missing/Weak", "Major"
    if "ablation" in lowered:
        return "Experimental Rigor", "Ablation/Analysis Missing", "Major"
    if "evaluat" in lowered and "flaw" in lowered:
        return "Experimental Rigor", "Flawed Evaluation", "Major"
    if "experiment" in lowered or "benchmark" in lowered or "dataset" in lowered:
        return "Experimental Rigor", "Insufficient Experiments", "Major"
    if "novel" in lowered or "incremental" in lowered or "contribution" in lowered:
        return "Novelty & Significance", "Incremental Contribution", "Major"
    if "motivat" in lowered:
        return "Novelty & Significance", "Motivation Weak", "Major"
    if "assum" in lowered:
        return "Methodological Soundness", "Unjustified Assumption", "Major"
    if any(w in lowered for w in ("unclear", "detail", "clarif", "explain", "why")):
        return "Methodological Soundness", "Lack of Detail", "Minor"
    if "unrealistic" in lowered or "out of scope" in lowered:
        return "Meta-Critique & Reviewer Behavior", "Unrealistic/Unconstructive Comment", "Minor"
    return "Methodological Soundness", "Lack of Detail", "Minor"


class MockRebuttalModel:
    """Offline chat backend covering every prompt template in the package."""

    def __init__(self) -> None:
        self.requests: list[str] = []

    # one handler per template, dispatched on the opening role sentence
    def complete(self, prompt: str, config: ProviderConfig) -> str:
        self.requests.append(prompt)
        rng = random.Random(stable_seed(prompt, config.seed))
        if "meta-analysis of academic peer reviews" in prompt:
            return self._stance(prompt, rng)
        if "crafting persuasive and respectful rebuttals" in prompt:
            return self._single_pass(prompt, rng)
        if "planning a rebuttal" in prompt:
            return self._strategy(prompt, rng)
        if "writing the final rebuttal response" in prompt:
            return self._response(prompt, rng)
        if "triage assistant for author rebuttals" in prompt:
            return self._experiment_demand(prompt)
        if "matching reviewer comments to the author reply" in prompt:
            return self._alignment(prompt)
        if "Compare the candidate's analysis and strategy with the gold references" in prompt:
            return self._reasoning_gold(prompt)
        if "Assess the candidate's analysis and strategy on their own merits" in prompt:
            return self._reasoning_rubric(prompt, rng)
        if "meticulous area chair" in prompt:
            return self._response_quality(prompt, rng)
        if "experienced academic reviewer and AI linguist" in prompt:
            return self._diversity(prompt)
        if "seasoned academic reviewer and response optimization expert" in prompt:
            return self._scorecard(prompt, rng)
        return json.dumps({"echo": sha256_hex(prompt)[:12]})

    # -- template handlers --------------------------------------------------

    def _stance(self, prompt: str, rng: random.Random) -> str:
        review = _section(prompt, "Review Text:", ["Review Text:", "JSON Output:"])
        items = _split_review_items(review)
        analysis = []
        categories: list[str] = []
        for idx, text in enumerate(items, start=1):
            category, sub, severity = _classify(text)
            categories.append(category)
            analysis.append(
                {
                    "comment_id": idx,
                    "comment_text": text,
                    "category": category,
                    "sub_category": sub,
                    "severity": severity,
                    "confidence": 6 + stable_seed("conf", text) % 5,
                }
            )
        main = [c for c in categories if c in taxonomy.DOMINANT_CONCERNS]
        # ties must break identically across processes, so no set iteration
        dominant = max(sorted(set(main)), key=main.count) if main else "Methodological Soundness"
        h = stable_seed("macro", review)
        payload = {
            "global_profile": {
                "overall_stance": taxonomy.OVERALL_STANCES[h % 5],
                "overall_attitude": taxonomy.OVERALL_ATTITUDES[(h // 5) % 5],
                "dominant_concern": dominant,
                "reviewer_expertise": taxonomy.REVIEWER_EXPERTISE[(h // 25) % 3],
                "confidence": 6 + (h // 75) % 5,
            },
            "comment_analysis": analysis,
        }
        return json.dumps(payload, indent=2, ensure_ascii=False)

    def _draft_response(self, comment: str, evidence: str, rng: random.Random, refined: str | None = None) -> str:
        topic = " ".join(comment.split()[:6]) or "this point"
        fact = " ".join(evidence.split()[:12]) if evidence.strip() else "the manuscript as submitted"
        opener = rng.choice(
            [
                f"The reviewer raises a fair question about {topic}.",
                f"We welcome the chance to clarify {topic}.",
                f"On the concern regarding {topic}, our position is straightforward.",
                f"We read this remark on {topic} carefully.",
                f"This point about {topic} deserves a direct answer.",
            ]
        )
        middle = rng.choice(
            [
                f"The relevant material already appears in the manuscript, namely: {fact}.",
                f"Our submission addresses this where it states: {fact}.",
                f"The evidence at hand ({fact}) speaks to exactly this concern.",
            ]
        )
        closer = rng.choice(
            [
                "We will sharpen the wording there so the point is impossible to miss.",
                "The revision spells this out explicitly in the same section.",
                "We now foreground this detail rather than leaving it implicit.",
            ]
        )
        refinement = ""
        if refined:
            echo = " ".join(refined.split()[:8])
            refinement = f" Building on our earlier reply ({echo}...), we keep its substance while tightening the argument."
        token = sha256_hex(f"{comment}|{evidence}|{rng.random()}")[:8]
        return f"{opener} {middle} {closer}{refinement} [draft {token}]"

    def _single_pass(self, prompt: str, rng: random.Random) -> str:
        labels = ["Full_Review_Content:", "Target_Comment:", "Relevant_Paper_Fragment:"]
        review = _section(prompt, labels[0], labels)
        comment = _section(prompt, labels[1], labels)
        evidence = _section(prompt, labels[2], labels)
        category, sub, severity = _classify(comment)
        h = stable_seed("macro", review)
        analysis = {
            "global_profile": {
                "overall_stance": taxonomy.OVERALL_STANCES[h % 5],
                "overall_attitude": taxonomy.OVERALL_ATTITUDES[(h // 5) % 5],
                "dominant_concern": category if category in taxonomy.DOMINANT_CONCERNS else "Methodological Soundness",
                "reviewer_expertise": taxonomy.REVIEWER_EXPERTISE[(h // 25) % 3],
                "confidence": 6 + (h // 75) % 5,
            },
            "comment_analysis": [
                {
                    "comment_id": 1,
                    "comment_text": comment,
                    "category": category,
                    "sub_category": sub,
                    "severity": severity,
                    "confidence": 6 + stable_seed("conf", comment) % 5,
                }
            ],
        }
        steps = self._steps(comment, evidence, rng)
        strategy = "\n".join(f"{i}. {s}" for i, s in enumerate(steps, start=1))
        response = self._draft_response(comment, evidence, rng)
        return (
            "I need to analysis the review's overall instance and the target comment:\n"
            f"<analysis>{json.dumps(analysis, ensure_ascii=False)}</analysis>."
            "Based on current overall analysis, to address the target comment, "
            "I need to adopt the following strategies:\n"
            f"<strategy>{strategy}</strategy>.\n\n"
            "Based on the above analysis and strategies, for the target comment:\n"
            f"<response>{response}</response>."
        )

    def _steps(self, comment: str, evidence: str, rng: random.Random) -> list[str]:
        topic = " ".join(comment.split()[:5]) or "the concern"
        anchor = " ".join(evidence.split()[:8]) if evidence.strip() else "the submitted text"
        first = rng.choice(
            [
                f"Acknowledge the concern about {topic} without conceding an error.",
                f"Restate the concern about {topic} to show it was understood.",
            ]
        )
        second = rng.choice(
            [
                f"Point to the manuscript evidence ({anchor}) that answers it.",
                f"Quote the passage ({anchor}) and connect it to the concern.",
            ]
        )
        third = rng.choice(
            [
                "Commit to one concrete clarification in the revision.",
                "Name the exact revision that will make the point explicit.",
            ]
        )
        return [first, second, third]

    def _strategy(self, prompt: str, rng: random.Random) -> str:
        labels = ["Reviewer profile (JSON):", "Target comment:", "Manuscript evidence:"]
        comment = _section(prompt, labels[1], labels)
        evidence = _section(prompt, labels[2], labels)
        steps = self._steps(comment, evidence, rng)
        body = "\n".join(f"{i}. {s}" for i, s in enumerate(steps, start=1))
        return f"<strategy>{body}</strategy>"

    def _response(self, prompt: str, rng: random.Random) -> str:
        labels = [
            "Full review for context:",
            "Target comment:",
            "Reviewer profile (JSON):",
            "Agreed strategy:",
            "Manuscript evidence:",
            "Original author response (reference for refinement):",
        ]
        comment = _section(prompt, labels[1], labels)
        evidence = _section(prompt, labels[4], labels)
        refined = _section(prompt, labels[5], labels) or None
        return f"<response>{self._draft_response(comment, evidence, rng, refined)}</response>"

    def _experiment_demand(self, prompt: str) -> str:
        comment = _section(prompt, "Reviewer comment:", ["Reviewer comment:"])
        lowered = comment.lower()
        demand = any(hint in lowered for hint in _DEMAND_HINTS)
        return json.dumps({"requires_new_experiments": demand})

    def _alignment(self, prompt: str) -> str:
        labels = ["Reviewer comments:", "Author reply paragraphs:"]
        comments = re.findall(r"^\d+\. (.*)$", _section(prompt, labels[0], labels), re.MULTILINE)
        replies = re.findall(r"^\d+\. (.*)$", _section(prompt, labels[1], labels), re.MULTILINE)
        alignments = []
        for i, comment in enumerate(comments, start=1):
            best, best_score = -1, 0.0
            for j, reply in enumerate(replies, start=1):
                score = _overlap(reply, comment)
                if score > best_score:
                    best, best_score = j, score
            alignments.append({"comment": i, "reply": best if best_score > 0.05 else -1})
        return json.dumps({"alignments": alignments})

    def _reasoning_gold(self, prompt: str) -> str:
        labels = ["Gold analysis:", "Gold strategy:", "Candidate analysis:", "Candidate strategy:"]
        gold_a = _section(prompt, labels[0], labels)
        gold_s = _section(prompt, labels[1], labels)
        cand_a = _section(prompt, labels[2], labels)
        cand_s = _section(prompt, labels[3], labels)
        a_score = max(1, min(10, round(4 + 6 * _overlap(cand_a, gold_a))))
        s_score = max(1, min(10, round(4 + 6 * _overlap(cand_s, gold_s))))
        return json.dumps({"analysis_score": a_score, "strategy_score": s_score})

    def _reasoning_rubric(self, prompt: str, rng: random.Random) -> str:
        return json.dumps(
            {"analysis_score": 5 + rng.randrange(5), "strategy_score": 5 + rng.randrange(5)}
        )

    def _response_quality(self, prompt: str, rng: random.Random) -> str:
        labels = [
            "Reviewer comment:",
            "Full review for context:",
            "Manuscript evidence:",
            "Response to evaluate:",
        ]
        evidence = _section(prompt, labels[2], labels)
        response = _section(prompt, labels[3], labels)
        grounded = _overlap(response, evidence)
        score = max(1, min(10, round(5 + 4 * grounded) + rng.randrange(2)))
        return json.dumps({"response_score": score})

    def _diversity(self, prompt: str) -> str:
        response = _section(prompt, "Response to evaluate:", ["Response to evaluate:"])
        lowered = response.lower()
        cliches = (
            "we thank the reviewer",
            "in the revised manuscript, we have taken",
            "fully address the reviewer's concern",
            "in direct response to this comment",
        )
        hits = sum(1 for c in cliches if c in lowered)
        bullets = len(re.findall(r"^\s*\d+\.", response, re.MULTILINE))
        score = max(1, min(10, 9 - 2 * hits - (1 if bullets >= 3 else 0)))
        return json.dumps({"diversity_score": score})

    def _scorecard(self, prompt: str, rng: random.Random) -> str:
        response = _section(
            prompt,
            "Original_response:",
            ["Full_Review_Content:", "Relevant_Paper_Fragment:", "Target_Comment:", "Original_response:"],
        )
        dims = {name: 5 + rng.randrange(5) for name in ("Attitude", "Clarity", "Persuasiveness", "Constructiveness")}
        explanation = (
            f"The response opens with '{' '.join(response.split()[:6])}...', keeps a professional tone "
            f"(Attitude {dims['Attitude']}), argues from the cited fragment (Persuasiveness "
            f"{dims['Persuasiveness']}), and names concrete revisions (Constructiveness {dims['Constructiveness']})."
        )
        return json.dumps({"score": dims, "score_explanation": explanation}, ensure_ascii=False)


class HashEmbeddingBackend:
    """Unit vectors seeded by text content; equal text, equal vector."""

    def __init__(self, dim: int = 32) -> None:
        if dim < 2:
            raise ValueError("dim must be >= 2")
        self.dim = dim
        self.batch_sizes: list[int] = []

    def embed(self, texts: Sequence[str], config: ProviderConfig) -> list[list[float]]:
        self.batch_sizes.append(len(texts))
        return [self._vector(t) for t in texts]

    def _vector(self, text: str) -> list[float]:
        rng = np.random.default_rng(stable_seed("embed", text))
        vec = rng.standard_normal(self.dim)
        vec /= np.linalg.norm(vec)
        return [float(x) for x in vec]


class ScriptedChatBackend:
    """Test double: replies come from an ordered script and/or substring rules.

    Script entries may be exceptions, which are raised (for retry paths).
    """

    def __init__(
        self,
        script: Sequence[str | Exception] | None = None,
        rules: Sequence[tuple[str, str]] | None = None,
    ) -> None:
        self._script = list(script or [])
        self._rules = list(rules or [])
        self.requests: list[str] = []

    def complete(self, prompt: str, config: ProviderConfig) -> str:
        self.requests.append(prompt)
        if self._script:
            entry = self._script.pop(0)
            if isinstance(entry, Exception):
                raise entry
            return entry
        for needle, reply in self._rules:
            if needle in prompt:
                return reply
        raise AssertionError("scripted backend has no reply for this prompt")
