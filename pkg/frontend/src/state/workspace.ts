// Single-user workspace state. Strategy drafts are editable copies -- the
// stored run artifacts they came from are never mutated -- and every number
// on display is carried verbatim from a service payload.

import type {
  CandidatesResult,
  ExtractResult,
  Health,
  IngestResponse,
  RewardBreakdown,
  RewardWeights,
  RunEvent,
  RunStatus,
  TsrResult,
} from "../api/types";

export interface CommentView {
  id: string;
  ordinal: number;
  text: string;
  distilled: boolean;
  category: string;
  subCategory: string;
  severity: string;
  confidence: number;
}

export interface ProfileView {
  stance: string;
  attitude: string;
  concern: string;
  expertise: string;
  confidence: number;
}

export interface StrategySource {
  runId: string;
  steps: readonly string[];
}

export interface LogEntry {
  at: string;
  label: string;
  detail: string;
}

export interface RunView {
  runId: string;
  kind: string;
  status: RunStatus;
  events: RunEvent[];
  error: string | null;
}

export interface CandidateView {
  text: string;
  responseText: string;
  reward: RewardBreakdown;
  advantage: number;
}

export interface CandidateGroupView {
  runId: string;
  promptId: string;
  commentId: string;
  weights: RewardWeights;
  candidates: CandidateView[];
  bestIndex: number;
  pickedIndex: number | null;
  overrideUsed: boolean;
}

export interface InlineError {
  message: string;
  retry: (() => unknown) | null;
}

export interface WorkspaceState {
  health: Health | null;
  handles: IngestResponse | null;
  reviewText: string | null;
  profile: ProfileView | null;
  comments: CommentView[];
  selectedCommentId: string | null;
  strategySource: StrategySource | null;
  strategyDraft: string[];
  responseText: string | null;
  runs: Map<string, RunView>;
  groups: CandidateGroupView[];
  log: LogEntry[];
  error: InlineError | null;
}

const RESPONSE_BLOCK_RE = /<response>([\s\S]*?)<\/response>/i;

/** Pull the reader-facing reply out of a tagged candidate sequence. */
export function extractResponseBlock(text: string): string {
  const match = RESPONSE_BLOCK_RE.exec(text);
  return (match ? match[1]! : text).trim();
}

/** True when the editable draft no longer matches the stored plan. */
export function strategyEdited(state: WorkspaceState): boolean {
  const source = state.strategySource;
  if (source === null) return state.strategyDraft.length > 0;
  if (source.steps.length !== state.strategyDraft.length) return true;
  return source.steps.some((step, i) => step !== state.strategyDraft[i]);
}

function emptyState(): WorkspaceState {
  return {
    health: null,
    handles: null,
    reviewText: null,
    profile: null,
    comments: [],
    selectedCommentId: null,
    strategySource: null,
    strategyDraft: [],
    responseText: null,
    runs: new Map(),
    groups: [],
    log: [],
    error: null,
  };
}

export class Workspace {
  readonly state: WorkspaceState = emptyState();
  private listeners: Array<() => void> = [];

  constructor(private readonly now: () => string = () => new Date().toISOString()) {}

  subscribe(listener: () => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((fn) => fn !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  log(label: string, detail = ""): void {
    this.state.log.push({ at: this.now(), label, detail });
    this.emit();
  }

  setHealth(health: Health): void {
    this.state.health = health;
    this.emit();
  }

  setHandles(handles: IngestResponse, reviewText: string): void {
    this.state.handles = handles;
    this.state.reviewText = reviewText;
    this.emit();
  }

  setError(message: string, retry: (() => unknown) | null = null): void {
    this.state.error = { message, retry };
    this.emit();
  }

  clearError(): void {
    this.state.error = null;
    this.emit();
  }

  loadExtract(result: ExtractResult): void {
    const analysis = new Map(result.profile.comment_analysis.map((row) => [row.comment_id, row]));
    this.state.profile = {
      stance: result.profile.global_profile.overall_stance,
      attitude: result.profile.global_profile.overall_attitude,
      concern: result.profile.global_profile.dominant_concern,
      expertise: result.profile.global_profile.reviewer_expertise,
      confidence: result.profile.global_profile.confidence,
    };
    this.state.comments = result.comments.map((comment) => {
      const row = analysis.get(comment.id);
      return {
        id: comment.id,
        ordinal: comment.ordinal,
        text: comment.text,
        distilled: comment.distilled,
        category: row?.category ?? "Uncategorized",
        subCategory: row?.sub_category ?? "",
        severity: row?.severity ?? "",
        confidence: row?.confidence ?? 0,
      };
    });
    this.emit();
  }

  selectComment(commentId: string): void {
    if (this.state.selectedCommentId === commentId) return;
    this.state.selectedCommentId = commentId;
    this.state.strategySource = null;
    this.state.strategyDraft = [];
    this.state.responseText = null;
    this.emit();
  }

  selectedComment(): CommentView | null {
    return this.state.comments.find((c) => c.id === this.state.selectedCommentId) ?? null;
  }

  loadTsr(runId: string, result: TsrResult): void {
    this.state.selectedCommentId = result.comment_id;
    // freeze the stored steps; the draft is an independent editable copy
    this.state.strategySource = { runId, steps: Object.freeze([...result.strategy]) };
    this.state.strategyDraft = [...result.strategy];
    this.state.responseText = result.response;
    this.emit();
  }

  editStrategyStep(index: number, text: string, notify = true): void {
    if (index < 0 || index >= this.state.strategyDraft.length) return;
    this.state.strategyDraft[index] = text;
    if (notify) this.emit();
  }

  addStrategyStep(text = ""): void {
    this.state.strategyDraft.push(text);
    this.emit();
  }

  removeStrategyStep(index: number): void {
    if (index < 0 || index >= this.state.strategyDraft.length) return;
    this.state.strategyDraft.splice(index, 1);
    this.emit();
  }

  strategyEdited(): boolean {
    return strategyEdited(this.state);
  }

  trackRun(runId: string, kind: string): void {
    if (!this.state.runs.has(runId)) {
      this.state.runs.set(runId, { runId, kind, status: "queued", events: [], error: null });
      this.emit();
    }
  }

  applyRunEvent(runId: string, event: RunEvent): void {
    const run = this.state.runs.get(runId);
    if (!run) return;
    if (run.events.some((seen) => seen.seq === event.seq)) return;
    run.events.push(event);
    run.events.sort((a, b) => a.seq - b.seq);
    // derive status from the ordered history so a late-arriving event can
    // never roll the run backwards
    for (const seen of run.events) {
      if (seen.event === "queued" || seen.event === "running") {
        run.status = seen.event;
      } else if (seen.event === "completed" || seen.event === "failed") {
        run.status = seen.event;
        if (seen.event === "failed") run.error = seen.error ?? "run failed";
      }
    }
    this.emit();
  }

  finishRun(runId: string, status: RunStatus, error: string | null): void {
    const run = this.state.runs.get(runId);
    if (!run) return;
    run.status = status;
    run.error = error;
    this.emit();
  }

  loadCandidates(runId: string, result: CandidatesResult, overrideUsed: boolean): void {
    this.state.groups.unshift({
      runId,
      promptId: result.prompt_id,
      commentId: result.comment_id,
      weights: result.weights,
      candidates: result.candidates.map((candidate) => ({
        text: candidate.text,
        responseText: extractResponseBlock(candidate.text),
        reward: candidate.reward,
        advantage: candidate.advantage,
      })),
      bestIndex: result.best_index,
      pickedIndex: null,
      overrideUsed,
    });
    this.emit();
  }

  pickCandidate(runId: string, index: number): CandidateView | null {
    const group = this.state.groups.find((g) => g.runId === runId);
    if (!group || index < 0 || index >= group.candidates.length) return null;
    group.pickedIndex = index;
    const candidate = group.candidates[index]!;
    this.state.responseText = candidate.responseText;
    this.emit();
    return candidate;
  }
}
