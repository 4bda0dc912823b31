"""Command-line client for the drafting pipeline.

Runs the core package in process (no server needed); `serve` starts the
HTTP service. With --mock everything runs offline against the built-in
deterministic model, which makes reruns reproducible.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .appconfig import Runtime, build_runtime, load_config
from .errors import PreconditionError, RebuttalError
from .extraction import analyze_review
from .judging import evaluate_agreement, judge_scorecard, read_eval_samples, render_report_table
from .model import Comment, ReviewDocument
from .model.profile import profile_to_payload
from .retrieval import build_manuscript, retrieve_top_k
from .rewards import ScoringContext, negative_samples, sample_candidate_group
from .synthesis import (
    SynthesisJob,
    balance_rows,
    build_sft_row,
    export_jsonl,
    pair_comments_with_responses,
    synthesize_record,
)
from .tsr import NO_EVIDENCE_MARKER, TsrEngine, render_tsr_prompt
from .util import sha256_hex


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _title_of(body: str, override: str | None) -> str:
    if override:
        return override
    for line in body.splitlines():
        if line.strip():
            return line.strip()[:120]
    return "untitled"


def _load_manuscript(args: argparse.Namespace):
    body = _read_text(args.manuscript)
    m_id = f"m-{sha256_hex(body)[:12]}"
    return build_manuscript(m_id, _title_of(body, getattr(args, "title", None)), body)


def _load_review(args: argparse.Namespace, manuscript_id: str) -> ReviewDocument:
    text = _read_text(args.review)
    return ReviewDocument(
        id=f"r-{sha256_hex(text)[:12]}", manuscript_id=manuscript_id, raw_text=text
    )


def _resolve_comment_id(raw: str, review_id: str) -> str:
    """Accept either a full comment id or a 1-based number from `extract`."""
    if raw.isdigit():
        return f"{review_id}:c{int(raw)}"
    return raw


def _runtime(args: argparse.Namespace) -> Runtime:
    overrides: dict[str, object] = {
        "mock": True if getattr(args, "mock", False) else None,
        "seed": getattr(args, "seed", None),
    }
    config = load_config(getattr(args, "config", None), overrides=overrides)
    return build_runtime(config)


def _emit(args: argparse.Namespace, payload: dict, human: str) -> None:
    text = json.dumps(payload, indent=2, ensure_ascii=False) if args.json else human
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _extract_payload(review: ReviewDocument, analysis) -> dict:
    texts = {c.id: c.text for c in analysis.comments}
    return {
        "review_id": review.id,
        "profile": profile_to_payload(analysis.profile, comment_texts=texts),
        "comments": [
            {"id": c.id, "ordinal": c.ordinal, "text": c.text, "distilled": c.distilled}
            for c in analysis.comments
        ],
    }


# ---- subcommand handlers ---------------------------------------------------


def cmd_extract(args: argparse.Namespace) -> int:
    rt = _runtime(args)
    review = _load_review(args, manuscript_id="unbound")
    analysis = analyze_review(review, rt.chat)
    macro = analysis.profile.macro
    lines = [
        f"review {review.id}: {len(analysis.comments)} comment(s)",
        f"stance={macro.overall_stance}  attitude={macro.overall_attitude}  "
        f"concern={macro.dominant_concern}  expertise={macro.reviewer_expertise}  "
        f"confidence={macro.confidence}",
        "",
    ]
    for comment, micro in analysis.items():
        flag = " [distilled]" if comment.distilled else ""
        lines.append(
            f"[{comment.ordinal + 1}] {comment.id}{flag}\n"
            f"    {micro.category} / {micro.sub_category} "
            f"(severity={micro.severity}, confidence={micro.confidence})\n"
            f"    {comment.text}"
        )
    _emit(args, _extract_payload(review, analysis), "\n".join(lines))
    return 0


def cmd_retrieve(args: argparse.Namespace) -> int:
    rt = _runtime(args)
    manuscript = _load_manuscript(args)
    query = Comment(id="query:c1", review_id="query", ordinal=0, text=args.query)
    result = retrieve_top_k(query, manuscript.chunks, args.k, rt.embedder)
    chunk_map = manuscript.chunk_map()
    payload = {
        "manuscript_id": manuscript.id,
        "query": args.query,
        "ranked": [
            {"chunk_id": cid, "score": score, "text": chunk_map[cid].text}
            for cid, score in result.ranked
        ],
    }
    lines = [f"top {len(result.ranked)} of {len(manuscript.chunks)} chunk(s) for: {args.query}"]
    for cid, score in result.ranked:
        lines.append(f"  {score:+.4f}  {cid}\n          {chunk_map[cid].text[:100]}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_tsr(args: argparse.Namespace) -> int:
    rt = _runtime(args)
    manuscript = _load_manuscript(args)
    review = _load_review(args, manuscript.id)
    engine = TsrEngine(rt.chat, rt.embedder, k=rt.config.k)
    comment_id = _resolve_comment_id(args.comment, review.id)
    original = _read_text(args.original) if args.original else None
    record = engine.run_tsr(manuscript, review, comment_id, original_response=original)
    micro = record.profile.analysis_for(record.comment_id)
    lines = [
        f"comment {record.comment_id}: {micro.category} / {micro.sub_category} "
        f"(severity={micro.severity})",
        "",
        "strategy:",
        record.strategy.numbered(),
        "",
        "response:",
        record.response.text,
        "",
        f"evidence chunks: {list(record.retrieved_chunk_ids) or 'none'}",
        f"stages: {' -> '.join(t.stage for t in record.provider_trace)}",
    ]
    _emit(args, record.to_payload(), "\n".join(lines))
    return 0


def cmd_candidates(args: argparse.Namespace) -> int:
    rt = _runtime(args)
    manuscript = _load_manuscript(args)
    review = _load_review(args, manuscript.id)
    engine = TsrEngine(rt.chat, rt.embedder, k=rt.config.k)
    comment_id = _resolve_comment_id(args.comment, review.id)
    comment, evidence = engine.evidence_for(manuscript, review, comment_id)
    prompt = render_tsr_prompt(review.raw_text, comment.text, evidence)
    context = ScoringContext(
        review_text=review.raw_text,
        comment_text=comment.text,
        evidence=evidence,
        negatives=negative_samples(),
        weights=rt.config.reward_weights(),
    )
    group = sample_candidate_group(
        prompt,
        rt.chat,
        context,
        group_size=args.group_size,
        judge_provider=rt.chat,
        base_seed=args.base_seed,
    )
    payload = group.to_payload()
    payload["comment_id"] = comment.id
    best = payload["best_index"]
    lines = [f"sampled {group.size} candidate(s) for {comment.id}"]
    for i, cand in enumerate(payload["candidates"]):
        marker = " <- best" if i == best else ""
        lines.append(
            f"  [{i}] total={cand['reward']['total']:.3f} "
            f"advantage={cand['advantage']:+.3f}{marker}"
        )
    lines += ["", "best candidate:", payload["candidates"][best]["text"]]
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_judge(args: argparse.Namespace) -> int:
    rt = _runtime(args)
    evidence = _read_text(args.evidence) if args.evidence else NO_EVIDENCE_MARKER
    card = judge_scorecard(
        _read_text(args.review),
        args.comment_text,
        evidence,
        _read_text(args.response),
        rt.chat,
    )
    payload = card.to_payload()
    lines = [
        "  ".join(f"{dim}={score}" for dim, score in card.dimension_scores().items()),
        f"overall={card.overall}" if card.overall is not None else "overall=n/a",
        card.explanation,
    ]
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_eval_agreement(args: argparse.Namespace) -> int:
    rt = _runtime(args)
    samples = read_eval_samples(args.samples)
    report = evaluate_agreement(samples, rt.chat)
    _emit(args, report.to_payload(), render_report_table(report))
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    rt = _runtime(args)
    manuscript = _load_manuscript(args)
    engine = TsrEngine(rt.chat, rt.embedder, k=rt.config.k)
    review, analysis, pairs = pair_comments_with_responses(
        _read_text(args.thread),
        rt.chat,
        rt.embedder,
        manuscript_id=manuscript.id,
        engine=engine,
    )
    rows = []
    skipped: list[dict] = []
    for comment, pair in pairs:
        try:
            record, sequence = synthesize_record(pair, analysis, manuscript, review, engine)
        except PreconditionError as exc:
            skipped.append({"comment_id": comment.id, "reason": str(exc)})
            continue
        rows.append(build_sft_row(record, sequence, review, manuscript, rt.chat.model_id))

    report_payload: dict = {}
    if args.quota:
        quotas: dict[str, int] = {}
        for spec in args.quota:
            if "=" not in spec:
                raise PreconditionError(f"--quota expects CATEGORY=N, got {spec!r}")
            cat, n = spec.rsplit("=", 1)
            quotas[cat] = int(n)
        job = SynthesisJob(category_quotas=quotas, random_extra=args.extra, seed=args.seed or 0)
        rows, report = balance_rows(rows, job)
        report_payload = report.to_payload()
    count = export_jsonl(rows, args.out_corpus)
    payload = {
        "rows": count,
        "aligned_pairs": len(pairs),
        "comments": len(analysis.comments),
        "skipped": skipped,
        "balance": report_payload,
        "path": str(args.out_corpus),
    }
    lines = [
        f"wrote {count} row(s) to {args.out_corpus} "
        f"({len(pairs)} aligned of {len(analysis.comments)} comment(s))"
    ]
    for item in skipped:
        lines.append(f"  skipped {item['comment_id']}: {item['reason']}")
    if report_payload:
        lines.append(f"  balance: kept={report_payload['kept']} shortfalls={report_payload['shortfalls']}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    overrides: dict[str, object] = {
        "mock": True if args.mock else None,
        "seed": args.seed,
        "host": args.host,
        "port": args.port,
    }
    config = load_config(args.config, overrides=overrides)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


# ---- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mock", action="store_true", help="run offline against the built-in model")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--config", metavar="FILE", help="KEY=VALUE config file")
    common.add_argument("--seed", type=int, help="sampling seed override")
    common.add_argument("--out", metavar="FILE", help="write output to a file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="rebuttalkit",
        description="Draft and evaluate point-by-point replies to peer review comments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", parents=[common], help="profile a review and list its comments")
    p.add_argument("--review", required=True, metavar="FILE")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("retrieve", parents=[common], help="rank manuscript chunks against a query")
    p.add_argument("--manuscript", required=True, metavar="FILE")
    p.add_argument("--title", help="manuscript title (default: first line)")
    p.add_argument("--query", required=True)
    p.add_argument("-k", type=int, default=3)
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("tsr", parents=[common], help="draft a reply to one comment, staged")
    p.add_argument("--manuscript", required=True, metavar="FILE")
    p.add_argument("--title")
    p.add_argument("--review", required=True, metavar="FILE")
    p.add_argument("--comment", required=True, help="comment number from `extract`, or full id")
    p.add_argument("--original", metavar="FILE", help="existing reply to refine")
    p.set_defaults(func=cmd_tsr)

    p = sub.add_parser("candidates", parents=[common], help="sample and score a draft group")
    p.add_argument("--manuscript", required=True, metavar="FILE")
    p.add_argument("--title")
    p.add_argument("--review", required=True, metavar="FILE")
    p.add_argument("--comment", required=True)
    p.add_argument("--group-size", type=int, default=5)
    p.add_argument("--base-seed", type=int, default=0)
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("judge", parents=[common], help="score one reply on the four dimensions")
    p.add_argument("--review", required=True, metavar="FILE")
    p.add_argument("--comment-text", required=True)
    p.add_argument("--response", required=True, metavar="FILE")
    p.add_argument("--evidence", metavar="FILE")
    p.set_defaults(func=cmd_judge)

    p = sub.add_parser(
        "eval-agreement", parents=[common], help="compare judge scores with human scores"
    )
    p.add_argument("--samples", required=True, metavar="FILE", help="JSONL of scored samples")
    p.set_defaults(func=cmd_eval_agreement)

    p = sub.add_parser("synth", parents=[common], help="build training rows from a review thread")
    p.add_argument("--manuscript", required=True, metavar="FILE")
    p.add_argument("--title")
    p.add_argument("--thread", required=True, metavar="FILE", help="review followed by author reply")
    p.add_argument("--out-corpus", required=True, metavar="FILE", help="JSONL destination")
    p.add_argument("--quota", action="append", metavar="CATEGORY=N", help="per-category cap")
    p.add_argument("--extra", type=int, default=0, help="uniform draw on top of quotas")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("serve", parents=[common], help="start the HTTP service")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RebuttalError as exc:
        body = {
            "error": type(exc).__name__,
            "message": str(exc),
            "stage": getattr(exc, "stage", None),
        }
        print(json.dumps(body, ensure_ascii=False), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
