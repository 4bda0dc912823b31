// The event-stream machinery, exercised against intercepted captures: frame
// parsing across arbitrary chunk boundaries, typed decoding, and following a
// run to its terminal event.

import { describe, expect, it } from "vitest";
import {
  SseParser,
  decodeRunEvent,
  followRunEvents,
  isTerminal,
  parseSseText,
  type SseFrame,
} from "../src/api/sse";
import type { RunEvent } from "../src/api/types";
import { fixture } from "./helpers";

describe("SSE frame parsing", () => {
  it("splits an intercepted extract stream into named frames", () => {
    const frames = parseSseText(fixture("extract_events.sse"));
    expect(frames.map((f) => f.event)).toEqual([
      "queued",
      "running",
      "stage",
      "stage",
      "completed",
    ]);
  });

  it("is chunk-boundary safe: 7-byte chunks give the same frames as one shot", () => {
    const text = fixture("tsr_events.sse");
    const oneShot = parseSseText(text);
    const parser = new SseParser();
    const chunked: SseFrame[] = [];
    for (let i = 0; i < text.length; i += 7) {
      chunked.push(...parser.push(text.slice(i, i + 7)));
    }
    expect(chunked).toEqual(oneShot);
    expect(chunked.length).toBe(11);
  });

  it("tolerates CRLF line endings", () => {
    const text = fixture("extract_events.sse").replace(/\n/g, "\r\n");
    const frames = parseSseText(text);
    expect(frames.length).toBe(5);
    expect(frames[0]!.event).toBe("queued");
  });

  it("ignores comment keep-alive lines", () => {
    const frames = parseSseText(': keepalive\n\nevent: running\ndata: {"event": "running", "seq": 1}\n\n');
    expect(frames.length).toBe(1);
    expect(frames[0]!.event).toBe("running");
  });
});

describe("run event decoding", () => {
  it("decodes every frame of every captured stream with gapless seq", () => {
    const captures = [
      "extract_events.sse",
      "tsr_events.sse",
      "candidates_events.sse",
      "candidates_override_events.sse",
      "failed_tsr_events.sse",
    ];
    for (const name of captures) {
      const frames = parseSseText(fixture(name));
      const events = frames.map(decodeRunEvent);
      events.forEach((event, i) => {
        expect(event.seq, `${name} frame ${i}`).toBe(i);
        expect(event.event).toBe(frames[i]!.event);
      });
      expect(isTerminal(events[events.length - 1]!)).toBe(true);
    }
  });

  it("sees each pipeline stage start and finish in the drafting stream", () => {
    const events = parseSseText(fixture("tsr_events.sse")).map(decodeRunEvent);
    const finished = events
      .filter((e) => e.event === "stage" && e.status === "finished")
      .map((e) => e.stage);
    expect(finished).toEqual(["analysis", "retrieval", "strategy", "response"]);
  });

  it("rejects a frame whose name disagrees with its payload", () => {
    const frame: SseFrame = { event: "running", data: '{"event": "queued", "seq": 0}' };
    expect(() => decodeRunEvent(frame)).toThrow(/named running carries event queued/);
  });
});

describe("followRunEvents", () => {
  const streamOf = (text: string, chunkSize: number) =>
    async function* (_runId: string) {
      for (let i = 0; i < text.length; i += chunkSize) {
        yield text.slice(i, i + chunkSize);
      }
    };

  it("hands every event to the callback in order and returns the terminal one", async () => {
    const text = fixture("extract_events.sse");
    const seen: RunEvent[] = [];
    const terminal = await followRunEvents(streamOf(text, 13), "run-x", (e) => seen.push(e));
    expect(seen.map((e) => e.seq)).toEqual([0, 1, 2, 3, 4]);
    expect(terminal.event).toBe("completed");
  });

  it("returns a failed terminal event as-is", async () => {
    const text = fixture("failed_tsr_events.sse");
    const terminal = await followRunEvents(streamOf(text, 40), "run-f", () => {});
    expect(terminal.event).toBe("failed");
    expect(terminal.error).toContain("PreconditionError");
  });

  it("rejects when the stream ends before a terminal event", async () => {
    const text = fixture("extract_events.sse");
    const truncated = text.slice(0, text.indexOf("event: completed"));
    await expect(
      followRunEvents(streamOf(truncated, 16), "run-t", () => {}),
    ).rejects.toThrow(/ended before a terminal event/);
  });
});
