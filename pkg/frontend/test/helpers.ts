// Shared test plumbing: fixture loading and a fake transport that replays
// the intercepted service bodies from test/fixtures/.

import { readFileSync } from "node:fs";
import type { HttpCall, HttpReply } from "../src/api/client";
import type { StreamOpener } from "../src/api/sse";

export const BASE = "http://svc.test";

export function fixture(name: string): string {
  return readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf8");
}

export function fixtureJson<T = any>(name: string): T {
  return JSON.parse(fixture(name)) as T;
}

export interface RecordedCall {
  method: string;
  path: string;
  body: any;
}

type Responder = (call: RecordedCall) => HttpReply | null;

export class FakeService {
  calls: RecordedCall[] = [];
  openedStreams: string[] = [];
  private onceResponders: Responder[] = [];
  private responders: Responder[] = [];
  private sseByRun = new Map<string, string>();

  route(method: string, path: string, handler: (call: RecordedCall) => HttpReply): void {
    this.responders.push((call) =>
      call.method === method && call.path === path ? handler(call) : null,
    );
  }

  routeJson(method: string, path: string, status: number, bodyText: string): void {
    this.route(method, path, () => ({ status, body: bodyText }));
  }

  /** One-shot override consumed by the first matching call. */
  failOnce(method: string, path: string, status: number, bodyText: string): void {
    const responder: Responder = (call) => {
      if (call.method !== method || call.path !== path) return null;
      this.onceResponders = this.onceResponders.filter((r) => r !== responder);
      return { status, body: bodyText };
    };
    this.onceResponders.push(responder);
  }

  sseFor(runId: string, text: string): void {
    this.sseByRun.set(runId, text);
  }

  http(): HttpCall {
    return async (url, init) => {
      const path = url.startsWith(BASE) ? url.slice(BASE.length) : url;
      const call: RecordedCall = {
        method: init.method,
        path,
        body: init.body !== undefined ? JSON.parse(init.body) : undefined,
      };
      this.calls.push(call);
      for (const responder of [...this.onceResponders, ...this.responders]) {
        const reply = responder(call);
        if (reply) return reply;
      }
      return {
        status: 500,
        body: JSON.stringify({ error: `no fake route for ${init.method} ${path}`, stage: null }),
      };
    };
  }

  /** Streams each capture in two chunks split mid-frame. */
  stream(): StreamOpener {
    const self = this;
    return async function* (runId: string) {
      self.openedStreams.push(runId);
      const text = self.sseByRun.get(runId);
      if (text === undefined) {
        throw new Error(`no fake event stream for ${runId}`);
      }
      const mid = Math.floor(text.length / 2);
      yield text.slice(0, mid);
      yield text.slice(mid);
    };
  }
}

export interface FixtureIds {
  manuscriptId: string;
  reviewId: string;
  extractRunId: string;
  tsrRunId: string;
  candidatesRunId: string;
  candidatesOverrideRunId: string;
  failedTsrRunId: string;
  figureCommentId: string;
}

export interface StandardFake {
  fake: FakeService;
  ids: FixtureIds;
}

function accepted(runId: string, kind: string): string {
  return JSON.stringify({ run_id: runId, kind, status: "queued" });
}

/** A fake service wired with every intercepted fixture. */
export function standardFake(): StandardFake {
  const fake = new FakeService();
  const ingest = fixtureJson("ingest.json");
  const extractRun = fixtureJson("extract_run.json");
  const tsrRun = fixtureJson("tsr_run.json");
  const candidatesRun = fixtureJson("candidates_run.json");
  const overrideRun = fixtureJson("candidates_override_run.json");
  const failedRun = fixtureJson("failed_tsr_run.json");

  const ids: FixtureIds = {
    manuscriptId: ingest.manuscript_id,
    reviewId: ingest.review_id,
    extractRunId: extractRun.run_id,
    tsrRunId: tsrRun.run_id,
    candidatesRunId: candidatesRun.run_id,
    candidatesOverrideRunId: overrideRun.run_id,
    failedTsrRunId: failedRun.run_id,
    figureCommentId: tsrRun.result.comment_id,
  };

  fake.routeJson("GET", "/api/health", 200, fixture("health.json"));
  fake.routeJson("POST", "/api/reviews", 200, fixture("ingest.json"));
  fake.routeJson("POST", "/api/extract", 202, accepted(ids.extractRunId, "extract"));
  fake.route("POST", "/api/tsr", (call) => ({
    status: 202,
    body: accepted(
      call.body.comment_id === ids.figureCommentId ? ids.tsrRunId : ids.failedTsrRunId,
      "tsr",
    ),
  }));
  fake.route("POST", "/api/candidates", (call) => ({
    status: 202,
    body: accepted(
      call.body.strategy_override !== undefined ? ids.candidatesOverrideRunId : ids.candidatesRunId,
      "candidates",
    ),
  }));
  fake.routeJson("POST", "/api/score", 200, fixture("score.json"));
  fake.routeJson("GET", "/api/runs", 200, fixture("runs_list.json"));
  fake.routeJson("GET", `/api/runs/${ids.extractRunId}`, 200, fixture("extract_run.json"));
  fake.routeJson("GET", `/api/runs/${ids.tsrRunId}`, 200, fixture("tsr_run.json"));
  fake.routeJson("GET", `/api/runs/${ids.candidatesRunId}`, 200, fixture("candidates_run.json"));
  fake.routeJson(
    "GET",
    `/api/runs/${ids.candidatesOverrideRunId}`,
    200,
    fixture("candidates_override_run.json"),
  );
  fake.routeJson("GET", `/api/runs/${ids.failedTsrRunId}`, 200, fixture("failed_tsr_run.json"));
  fake.sseFor(ids.extractRunId, fixture("extract_events.sse"));
  fake.sseFor(ids.tsrRunId, fixture("tsr_events.sse"));
  fake.sseFor(ids.candidatesRunId, fixture("candidates_events.sse"));
  fake.sseFor(ids.candidatesOverrideRunId, fixture("candidates_override_events.sse"));
  fake.sseFor(ids.failedTsrRunId, fixture("failed_tsr_events.sse"));
  return { fake, ids };
}

/** Every data-value / data-total pair parsed from rendered candidate cards. */
export function cardNumbers(html: string): Array<{ total: number; segments: number[] }> {
  const cards: Array<{ total: number; segments: number[] }> = [];
  const cardRe = /<article class="candidate-card[^"]*"[^>]*data-total="([^"]+)"[\s\S]*?<\/article>/g;
  let match: RegExpExecArray | null;
  while ((match = cardRe.exec(html)) !== null) {
    const segRe = /data-value="([^"]+)"/g;
    const segments: number[] = [];
    let seg: RegExpExecArray | null;
    while ((seg = segRe.exec(match[0])) !== null) {
      segments.push(Number(seg[1]));
    }
    cards.push({ total: Number(match[1]), segments });
  }
  return cards;
}
