// Orchestrates the workspace against the service: every state-changing user
// action becomes an HTTP call (logged in the workspace run log) and async
// runs are followed over SSE -- the UI never polls.

import { ServiceError, type ServiceClient } from "../api/client";
import { followRunEvents, type StreamOpener } from "../api/sse";
import {
  candidatesResultSchema,
  extractResultSchema,
  tsrResultSchema,
  type RunDetail,
} from "../api/types";
import type { Workspace } from "./workspace";

export const DEFAULT_GROUP_SIZE = 5;

export interface ControllerDeps {
  client: ServiceClient;
  openEvents: StreamOpener;
  workspace: Workspace;
}

function describe(err: unknown): string {
  if (err instanceof ServiceError) {
    return err.stage ? `${err.message} (stage: ${err.stage})` : err.message;
  }
  return err instanceof Error ? err.message : String(err);
}

export class WorkbenchController {
  constructor(private readonly deps: ControllerDeps) {}

  async connect(): Promise<void> {
    const { client, workspace } = this.deps;
    try {
      workspace.setHealth(await client.health());
    } catch (err) {
      workspace.setError(describe(err), () => this.connect());
    }
  }

  /** Run one async job end to end: track, follow SSE, fetch the record. */
  private async followRun(runId: string, kind: string): Promise<RunDetail> {
    const { client, openEvents, workspace } = this.deps;
    workspace.trackRun(runId, kind);
    await followRunEvents(openEvents, runId, (event) => workspace.applyRunEvent(runId, event));
    const detail = await client.getRun(runId);
    workspace.finishRun(runId, detail.status, detail.error);
    return detail;
  }

  async intake(manuscript: { title: string; body: string }, reviewText: string): Promise<void> {
    const { client, workspace } = this.deps;
    if (!manuscript.title.trim() || !manuscript.body.trim() || !reviewText.trim()) {
      workspace.setError("manuscript title, manuscript body, and review text are all required");
      return;
    }
    workspace.clearError();
    try {
      const handles = await client.ingest(
        { title: manuscript.title, body: manuscript.body },
        { text: reviewText },
      );
      workspace.setHandles(handles, reviewText);
      workspace.log(
        "POST /api/reviews",
        `review ${handles.review_id}, ${handles.chunk_count} chunk(s)`,
      );

      const accepted = await client.startExtract(handles.review_id);
      workspace.log("POST /api/extract", accepted.run_id);
      const detail = await this.followRun(accepted.run_id, "extract");
      if (detail.status === "completed") {
        workspace.loadExtract(extractResultSchema.parse(detail.result));
        workspace.log(`run ${accepted.run_id}`, "completed");
      } else {
        workspace.setError(detail.error ?? "extraction failed", () => this.intake(manuscript, reviewText));
      }
    } catch (err) {
      workspace.setError(describe(err), () => this.intake(manuscript, reviewText));
    }
  }

  async draft(commentId: string): Promise<void> {
    const { client, workspace } = this.deps;
    const handles = workspace.state.handles;
    if (!handles) {
      workspace.setError("ingest a review before drafting");
      return;
    }
    workspace.selectComment(commentId);
    workspace.clearError();
    try {
      const accepted = await client.startTsr({
        manuscriptId: handles.manuscript_id,
        reviewId: handles.review_id,
        commentId,
      });
      workspace.log("POST /api/tsr", `${accepted.run_id} for ${commentId}`);
      const detail = await this.followRun(accepted.run_id, "tsr");
      if (detail.status === "completed") {
        workspace.loadTsr(accepted.run_id, tsrResultSchema.parse(detail.result));
        workspace.log(`run ${accepted.run_id}`, "completed");
      }
      // a failed run stays visible on its progress timeline
    } catch (err) {
      workspace.setError(describe(err), () => this.draft(commentId));
    }
  }

  async regenerate(groupSize: number = DEFAULT_GROUP_SIZE, baseSeed = 0): Promise<void> {
    const { client, workspace } = this.deps;
    const handles = workspace.state.handles;
    const commentId = workspace.state.selectedCommentId;
    if (!handles || !commentId) {
      workspace.setError("select a comment before sampling candidates");
      return;
    }
    workspace.clearError();
    const overrideUsed = workspace.strategyEdited() && workspace.state.strategyDraft.length > 0;
    try {
      const accepted = await client.startCandidates({
        manuscriptId: handles.manuscript_id,
        reviewId: handles.review_id,
        commentId,
        groupSize,
        baseSeed,
        ...(overrideUsed ? { strategyOverride: [...workspace.state.strategyDraft] } : {}),
      });
      workspace.log(
        "POST /api/candidates",
        `${accepted.run_id}, G=${groupSize}${overrideUsed ? ", edited plan sent as override" : ""}`,
      );
      const detail = await this.followRun(accepted.run_id, "candidates");
      if (detail.status === "completed") {
        workspace.loadCandidates(
          accepted.run_id,
          candidatesResultSchema.parse(detail.result),
          overrideUsed,
        );
        workspace.log(`run ${accepted.run_id}`, "completed");
      }
    } catch (err) {
      workspace.setError(describe(err), () => this.regenerate(groupSize, baseSeed));
    }
  }

  async pick(runId: string, index: number): Promise<void> {
    const { client, workspace } = this.deps;
    const group = workspace.state.groups.find((g) => g.runId === runId);
    const comment = workspace.state.comments.find((c) => c.id === group?.commentId);
    const reviewText = workspace.state.reviewText;
    if (!group || !comment || reviewText === null) {
      workspace.setError("the picked candidate's source review is not loaded; re-ingest first");
      return;
    }
    const candidate = group.candidates[index];
    if (!candidate) return;
    workspace.clearError();
    try {
      const scored = await client.score({
        text: candidate.text,
        reviewText,
        commentText: comment.text,
      });
      workspace.pickCandidate(runId, index);
      workspace.log(
        `pick candidate #${index + 1} of ${runId}`,
        `service re-score total=${scored.total}`,
      );
    } catch (err) {
      workspace.setError(describe(err), () => this.pick(runId, index));
    }
  }

  /** Rebuild the workspace from the service's run history after a reload. */
  async restore(): Promise<void> {
    const { client, openEvents, workspace } = this.deps;
    workspace.clearError();
    try {
      const runs = await client.listRuns();
      workspace.log("GET /api/runs", `${runs.length} run(s)`);
      for (const info of runs) {
        workspace.trackRun(info.run_id, info.kind);
        workspace.finishRun(info.run_id, info.status, info.error);
        if (info.status === "completed" || info.status === "failed") {
          // replay the persisted event history onto the timeline
          await followRunEvents(openEvents, info.run_id, (event) =>
            workspace.applyRunEvent(info.run_id, event),
          );
        }
      }
      for (const info of runs) {
        if (info.status !== "completed") continue;
        const detail = await client.getRun(info.run_id);
        if (info.kind === "extract") {
          workspace.loadExtract(extractResultSchema.parse(detail.result));
        } else if (info.kind === "tsr") {
          workspace.loadTsr(info.run_id, tsrResultSchema.parse(detail.result));
        } else if (info.kind === "candidates") {
          workspace.loadCandidates(
            info.run_id,
            candidatesResultSchema.parse(detail.result),
            false,
          );
        }
      }
    } catch (err) {
      workspace.setError(describe(err), () => this.restore());
    }
  }
}
