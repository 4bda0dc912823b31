// The workspace store: joining service artifacts into view models, the
// copy-on-load discipline for strategy edits, run event bookkeeping, and
// candidate picking. All inputs are intercepted fixtures.

import { describe, expect, it } from "vitest";
import {
  candidatesResultSchema,
  extractResultSchema,
  runDetailSchema,
  tsrResultSchema,
  type RunEvent,
} from "../src/api/types";
import { Workspace, extractResponseBlock, strategyEdited } from "../src/state/workspace";
import { fixtureJson } from "./helpers";

function extractResult() {
  return extractResultSchema.parse(runDetailSchema.parse(fixtureJson("extract_run.json")).result);
}

function tsrResult() {
  return tsrResultSchema.parse(runDetailSchema.parse(fixtureJson("tsr_run.json")).result);
}

function candidatesResult(name = "candidates_run.json") {
  return candidatesResultSchema.parse(runDetailSchema.parse(fixtureJson(name)).result);
}

describe("extractResponseBlock", () => {
  it("pulls the tagged reply out of a full candidate sequence", () => {
    const text = "<analysis>notes</analysis><strategy>plan</strategy><response>\nDear reviewer.\n</response>";
    expect(extractResponseBlock(text)).toBe("Dear reviewer.");
  });

  it("falls back to the whole text when untagged", () => {
    expect(extractResponseBlock("  plain reply  ")).toBe("plain reply");
  });
});

describe("loading extraction results", () => {
  it("joins comments with their analysis rows into badge-ready views", () => {
    const ws = new Workspace();
    ws.loadExtract(extractResult());
    expect(ws.state.comments.length).toBe(4);
    const figure = ws.state.comments[2]!;
    expect(figure.category).toBe("Presentation & Clarity");
    expect(figure.subCategory).toBe("Figure/Table Quality");
    expect(figure.severity).toBe("Minor");
    expect(figure.confidence).toBe(9);
    expect(figure.text).toContain("Figure 3");
    expect(ws.state.profile).toEqual({
      stance: "Probably Reject",
      attitude: "Neutral",
      concern: "Experimental Rigor",
      expertise: "Unfamiliar",
      confidence: 7,
    });
  });
});

describe("strategy draft copy semantics", () => {
  it("editing the draft never mutates the stored plan", () => {
    const ws = new Workspace();
    const result = tsrResult();
    ws.loadTsr("tsr-1", result);
    expect(ws.state.strategyDraft).toEqual([...result.strategy]);
    expect(ws.strategyEdited()).toBe(false);
    expect(Object.isFrozen(ws.state.strategySource!.steps)).toBe(true);

    const original = result.strategy[0]!;
    ws.editStrategyStep(0, "Acknowledge the labeling concern directly");
    expect(ws.state.strategyDraft[0]).toBe("Acknowledge the labeling concern directly");
    expect(ws.state.strategySource!.steps[0]).toBe(original);
    expect(ws.strategyEdited()).toBe(true);

    ws.editStrategyStep(0, original);
    expect(ws.strategyEdited()).toBe(false);
  });

  it("adding or removing steps marks the draft edited", () => {
    const ws = new Workspace();
    ws.loadTsr("tsr-1", tsrResult());
    ws.addStrategyStep("Close with the revision plan");
    expect(ws.strategyEdited()).toBe(true);
    ws.removeStrategyStep(ws.state.strategyDraft.length - 1);
    expect(ws.strategyEdited()).toBe(false);
    ws.removeStrategyStep(0);
    expect(ws.strategyEdited()).toBe(true);
  });

  it("a draft with no stored plan counts as edited once it has steps", () => {
    const ws = new Workspace();
    expect(strategyEdited(ws.state)).toBe(false);
    ws.addStrategyStep("Improvise");
    expect(strategyEdited(ws.state)).toBe(true);
  });

  it("selecting a different comment clears the plan and response", () => {
    const ws = new Workspace();
    ws.loadExtract(extractResult());
    ws.loadTsr("tsr-1", tsrResult());
    expect(ws.state.selectedCommentId).toBe(tsrResult().comment_id);
    ws.editStrategyStep(0, "custom");
    ws.selectComment(ws.state.selectedCommentId!); // same comment: keep edits
    expect(ws.state.strategyDraft[0]).toBe("custom");
    ws.selectComment(ws.state.comments[0]!.id); // different comment: reset
    expect(ws.state.strategySource).toBeNull();
    expect(ws.state.strategyDraft).toEqual([]);
    expect(ws.state.responseText).toBeNull();
  });
});

describe("run event bookkeeping", () => {
  const event = (partial: Partial<RunEvent> & { event: RunEvent["event"]; seq: number }): RunEvent =>
    partial as RunEvent;

  it("deduplicates by seq and keeps events ordered", () => {
    const ws = new Workspace();
    ws.trackRun("run-1", "tsr");
    ws.applyRunEvent("run-1", event({ event: "running", seq: 1 }));
    ws.applyRunEvent("run-1", event({ event: "queued", seq: 0 }));
    ws.applyRunEvent("run-1", event({ event: "running", seq: 1 }));
    const run = ws.state.runs.get("run-1")!;
    expect(run.events.map((e) => e.seq)).toEqual([0, 1]);
    expect(run.status).toBe("running");
  });

  it("a failed event records the error on the run", () => {
    const ws = new Workspace();
    ws.trackRun("run-2", "tsr");
    ws.applyRunEvent("run-2", event({ event: "failed", seq: 3, error: "PreconditionError: boom" }));
    const run = ws.state.runs.get("run-2")!;
    expect(run.status).toBe("failed");
    expect(run.error).toBe("PreconditionError: boom");
  });

  it("tracking a run twice keeps the first record", () => {
    const ws = new Workspace();
    ws.trackRun("run-3", "extract");
    ws.applyRunEvent("run-3", event({ event: "queued", seq: 0 }));
    ws.trackRun("run-3", "extract");
    expect(ws.state.runs.get("run-3")!.events.length).toBe(1);
  });
});

describe("candidate groups", () => {
  it("keeps service numbers verbatim and extracts the response block", () => {
    const ws = new Workspace();
    const result = candidatesResult();
    ws.loadCandidates("cand-1", result, false);
    const group = ws.state.groups[0]!;
    expect(group.candidates.length).toBe(5);
    expect(group.bestIndex).toBe(result.best_index);
    expect(group.weights).toEqual(result.weights);
    for (const [i, view] of group.candidates.entries()) {
      expect(view.reward).toEqual(result.candidates[i]!.reward);
      expect(view.text).toBe(result.candidates[i]!.text);
      expect(view.responseText).not.toContain("<response>");
      expect(result.candidates[i]!.text).toContain(view.responseText.slice(0, 40));
    }
  });

  it("newer groups go first and older groups stay untouched", () => {
    const ws = new Workspace();
    const plain = candidatesResult();
    ws.loadCandidates("cand-1", plain, false);
    const firstTotalsBefore = ws.state.groups[0]!.candidates.map((c) => c.reward.total);
    ws.loadCandidates("cand-2", candidatesResult("candidates_override_run.json"), true);
    expect(ws.state.groups.map((g) => g.runId)).toEqual(["cand-2", "cand-1"]);
    expect(ws.state.groups[0]!.overrideUsed).toBe(true);
    expect(ws.state.groups[1]!.candidates.map((c) => c.reward.total)).toEqual(firstTotalsBefore);
  });

  it("picking a candidate records the index and promotes its response", () => {
    const ws = new Workspace();
    ws.loadCandidates("cand-1", candidatesResult(), false);
    const picked = ws.pickCandidate("cand-1", 1);
    expect(picked).not.toBeNull();
    expect(ws.state.groups[0]!.pickedIndex).toBe(1);
    expect(ws.state.responseText).toBe(picked!.responseText);
    expect(ws.pickCandidate("cand-1", 99)).toBeNull();
    expect(ws.pickCandidate("missing", 0)).toBeNull();
  });
});

describe("log and notifications", () => {
  it("stamps log entries with the injected clock and notifies subscribers", () => {
    let ticks = 0;
    const ws = new Workspace(() => `2026-08-15T12:00:0${ticks++}.000Z`);
    let renders = 0;
    const unsubscribe = ws.subscribe(() => {
      renders += 1;
    });
    ws.log("POST /api/reviews", "review r-1");
    ws.log("POST /api/extract");
    expect(ws.state.log.map((e) => e.at)).toEqual([
      "2026-08-15T12:00:00.000Z",
      "2026-08-15T12:00:01.000Z",
    ]);
    expect(renders).toBe(2);
    unsubscribe();
    ws.log("after unsubscribe");
    expect(renders).toBe(2);
  });
});
