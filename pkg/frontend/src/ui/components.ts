// HTML-string renderers for every workspace panel. They are pure functions
// of state, DOM-free (testable in node), and carry machine-checkable values
// in data attributes: each reward bar segment holds its full-precision
// weighted value so displayed bars can be audited against the card total.

import type { RewardBreakdown, RewardWeights, RunEvent } from "../api/types";
import {
  strategyEdited,
  type CandidateGroupView,
  type CandidateView,
  type CommentView,
  type InlineError,
  type LogEntry,
  type ProfileView,
  type RunView,
  type WorkspaceState,
} from "../state/workspace";
import { clockTime, escapeHtml, fmt, slug } from "./format";

export interface BarSegment {
  label: string;
  weight: number;
  raw: number;
  weighted: number;
}

/** The display arithmetic for reward bars: weight x component per segment. */
export function weightedSegments(reward: RewardBreakdown, weights: RewardWeights): BarSegment[] {
  const [wFormat, wThink, wResp, wDiv] = weights;
  return [
    { label: "format", weight: wFormat, raw: reward.format, weighted: wFormat * reward.format },
    { label: "think", weight: wThink, raw: reward.think, weighted: wThink * reward.think },
    { label: "resp", weight: wResp, raw: reward.resp, weighted: wResp * reward.resp },
    { label: "div", weight: wDiv, raw: reward.div, weighted: wDiv * reward.div },
  ];
}

export function renderProfilePanel(profile: ProfileView | null): string {
  if (!profile) {
    return `<section class="profile-panel empty" data-panel="profile">No reviewer profile yet -- ingest a review.</section>`;
  }
  const field = (label: string, value: string | number) =>
    `<div class="profile-field"><dt>${escapeHtml(label)}</dt><dd data-field="${slug(label)}">${escapeHtml(String(value))}</dd></div>`;
  return `<section class="profile-panel" data-panel="profile"><dl>
${field("stance", profile.stance)}
${field("attitude", profile.attitude)}
${field("concern", profile.concern)}
${field("expertise", profile.expertise)}
${field("confidence", profile.confidence)}
</dl></section>`;
}

export function renderCommentCard(comment: CommentView, selected: boolean): string {
  const badges = [
    `<span class="badge badge-category cat-${slug(comment.category)}">${escapeHtml(comment.category)}</span>`,
    comment.subCategory
      ? `<span class="badge badge-subcategory">${escapeHtml(comment.subCategory)}</span>`
      : "",
    comment.severity
      ? `<span class="badge badge-severity sev-${slug(comment.severity)}">${escapeHtml(comment.severity)}</span>`
      : "",
    `<span class="badge badge-confidence">confidence ${comment.confidence}</span>`,
    comment.distilled ? `<span class="badge badge-distilled">distilled</span>` : "",
  ]
    .filter(Boolean)
    .join(" ");
  return `<article class="comment-card${selected ? " selected" : ""}" data-comment="${escapeHtml(comment.id)}">
<header>${badges}</header>
<p class="comment-text">${escapeHtml(comment.text)}</p>
<button type="button" data-action="draft" data-comment="${escapeHtml(comment.id)}">Draft rebuttal</button>
</article>`;
}

export function renderCommentList(comments: CommentView[], selectedId: string | null): string {
  if (comments.length === 0) {
    return `<section class="comment-list empty" data-panel="comments">No comments extracted yet.</section>`;
  }
  const cards = comments.map((c) => renderCommentCard(c, c.id === selectedId)).join("\n");
  return `<section class="comment-list" data-panel="comments">${cards}</section>`;
}

export function renderStrategyEditor(
  draft: readonly string[],
  edited: boolean,
  defaultGroupSize: number,
): string {
  if (draft.length === 0) {
    return `<section class="strategy-editor empty" data-panel="strategy">Draft a comment to get an editable plan.</section>`;
  }
  const steps = draft
    .map(
      (step, i) => `<li class="strategy-step">
<textarea data-action="edit-step" data-step="${i}" rows="2">${escapeHtml(step)}</textarea>
<button type="button" data-action="remove-step" data-step="${i}" title="remove step">&#215;</button>
</li>`,
    )
    .join("\n");
  return `<section class="strategy-editor" data-panel="strategy">
<ol class="strategy-steps">${steps}</ol>
<button type="button" data-action="add-step">Add step</button>
<div class="regenerate-row">
<label>G <input type="number" data-field="group-size" value="${defaultGroupSize}" min="1" max="64"></label>
<button type="button" data-action="regenerate">Regenerate candidates</button>
${edited ? `<span class="edited-flag" data-flag="edited">edited plan will be sent as the override</span>` : ""}
</div>
</section>`;
}

function renderSegment(segment: BarSegment, total: number): string {
  const width = total > 0 ? (segment.weighted / total) * 100 : 0;
  const tip = `${segment.label} ${fmt(segment.raw)} x ${segment.weight} = ${fmt(segment.weighted)}`;
  return `<span class="bar-segment bar-${segment.label}" data-component="${segment.label}" data-value="${segment.weighted}" style="width:${width.toFixed(2)}%" title="${escapeHtml(tip)}"></span>`;
}

export function renderCandidateCard(
  candidate: CandidateView,
  weights: RewardWeights,
  index: number,
  bestIndex: number,
  pickedIndex: number | null,
  runId: string,
): string {
  const segments = weightedSegments(candidate.reward, weights);
  const classes = ["candidate-card"];
  if (index === bestIndex) classes.push("best");
  if (index === pickedIndex) classes.push("picked");
  const badges = [
    index === bestIndex ? `<span class="badge badge-best">best</span>` : "",
    index === pickedIndex ? `<span class="badge badge-picked">picked</span>` : "",
  ]
    .filter(Boolean)
    .join(" ");
  const parts = segments
    .map(
      (s) =>
        `<div class="reward-part"><dt>${s.label}</dt><dd>${fmt(s.raw)} &#215; ${s.weight} = ${fmt(s.weighted)}</dd></div>`,
    )
    .join("");
  return `<article class="${classes.join(" ")}" data-candidate="${index}" data-total="${candidate.reward.total}">
<header>#${index + 1} ${badges} <span class="total">total <strong>${fmt(candidate.reward.total)}</strong></span> <span class="advantage">advantage ${fmt(candidate.advantage, 2)}</span></header>
<div class="reward-bar" role="img" aria-label="weighted reward components">${segments.map((s) => renderSegment(s, candidate.reward.total)).join("")}</div>
<dl class="reward-parts">${parts}</dl>
<blockquote class="candidate-response">${escapeHtml(candidate.responseText)}</blockquote>
<button type="button" data-action="pick" data-run="${escapeHtml(runId)}" data-index="${index}">Use this draft</button>
</article>`;
}

export function renderCandidateGroup(group: CandidateGroupView): string {
  const cards = group.candidates
    .map((candidate, i) =>
      renderCandidateCard(candidate, group.weights, i, group.bestIndex, group.pickedIndex, group.runId),
    )
    .join("\n");
  const note = group.overrideUsed
    ? `<span class="badge badge-override">sampled with the edited plan</span>`
    : "";
  return `<section class="candidate-group" data-group="${escapeHtml(group.runId)}">
<header>run ${escapeHtml(group.runId)} &middot; ${group.candidates.length} candidate(s) for ${escapeHtml(group.commentId)} ${note}</header>
<div class="candidate-grid">${cards}</div>
</section>`;
}

export function renderCandidateGroups(groups: CandidateGroupView[]): string {
  if (groups.length === 0) {
    return `<section class="candidate-groups empty" data-panel="candidates">No candidate groups sampled yet.</section>`;
  }
  return `<section class="candidate-groups" data-panel="candidates">${groups
    .map(renderCandidateGroup)
    .join("\n")}</section>`;
}

interface StageChip {
  stage: string;
  done: boolean;
}

export function renderProgressTimeline(run: RunView | null): string {
  if (!run) {
    return `<section class="progress-timeline empty" data-panel="progress">No run in flight.</section>`;
  }
  const chips: string[] = [];
  const stages: StageChip[] = [];
  for (const event of run.events) {
    if (event.event === "stage" && event.stage) {
      const open = stages.find((s) => s.stage === event.stage);
      if (!open) stages.push({ stage: event.stage, done: event.status === "finished" });
      else if (event.status === "finished") open.done = true;
    }
  }
  chips.push(`<span class="chip chip-kind">${escapeHtml(run.kind)} ${escapeHtml(run.runId)}</span>`);
  for (const s of stages) {
    chips.push(
      `<span class="chip chip-stage ${s.done ? "done" : "active"}" data-stage="${escapeHtml(s.stage)}">${escapeHtml(s.stage)}${s.done ? " &#10003;" : "&#8230;"}</span>`,
    );
  }
  if (run.status === "completed") {
    chips.push(`<span class="chip chip-terminal done">completed</span>`);
  } else if (run.status === "failed") {
    chips.push(
      `<span class="chip chip-terminal failed" data-error="1">failed: ${escapeHtml(run.error ?? "")}</span>`,
    );
  }
  return `<section class="progress-timeline" data-panel="progress" data-run="${escapeHtml(run.runId)}">${chips.join(" ")}</section>`;
}

export function renderResponsePane(responseText: string | null): string {
  if (responseText === null) {
    return `<section class="response-pane empty" data-panel="response">No response drafted yet.</section>`;
  }
  return `<section class="response-pane" data-panel="response">
<pre class="response-text">${escapeHtml(responseText)}</pre>
<button type="button" data-action="copy-response">Copy response</button>
</section>`;
}

export function renderRunLog(entries: LogEntry[]): string {
  if (entries.length === 0) {
    return `<section class="run-log empty" data-panel="log">No service calls yet.</section>`;
  }
  const rows = [...entries]
    .reverse()
    .map(
      (entry) =>
        `<li><time>${escapeHtml(clockTime(entry.at))}</time> <span class="log-label">${escapeHtml(entry.label)}</span> <span class="log-detail">${escapeHtml(entry.detail)}</span></li>`,
    )
    .join("\n");
  return `<section class="run-log" data-panel="log"><ul>${rows}</ul></section>`;
}

export function renderErrorBanner(error: InlineError | null): string {
  if (!error) return "";
  const retry = error.retry
    ? `<button type="button" data-action="retry">Retry</button>`
    : "";
  return `<div class="error-banner" role="alert" data-panel="error">${escapeHtml(error.message)} ${retry}</div>`;
}

export function renderHealthBadge(state: WorkspaceState): string {
  if (!state.health) return `<span class="health-badge offline">service: connecting&#8230;</span>`;
  const mock = state.health.mock ? " (mock provider)" : "";
  return `<span class="health-badge online">service: ${escapeHtml(state.health.status)}${mock} &middot; ${escapeHtml(state.health.model)}</span>`;
}

/** The newest run that has produced any event, for the progress panel. */
export function latestActiveRun(state: WorkspaceState): RunView | null {
  let latest: RunView | null = null;
  for (const run of state.runs.values()) latest = run;
  return latest;
}

export function renderWorkbench(state: WorkspaceState): string {
  return `${renderErrorBanner(state.error)}
<header class="workbench-header"><h1>Rebuttal workbench</h1>${renderHealthBadge(state)}</header>
<main class="workbench">
<div class="column">
<h2>Reviewer profile</h2>
${renderProfilePanel(state.profile)}
<h2>Extracted comments</h2>
${renderCommentList(state.comments, state.selectedCommentId)}
</div>
<div class="column">
<h2>Strategy (editable)</h2>
${renderStrategyEditor(state.strategyDraft, strategyEdited(state), 5)}
<h2>Progress</h2>
${renderProgressTimeline(latestActiveRun(state))}
<h2>Response (read-only)</h2>
${renderResponsePane(state.responseText)}
</div>
<div class="column wide">
<h2>Candidates</h2>
${renderCandidateGroups(state.groups)}
<h2>Run log</h2>
${renderRunLog(state.log)}
</div>
</main>`;
}
