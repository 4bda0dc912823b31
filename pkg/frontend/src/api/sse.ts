// Server-sent-events consumption: an incremental frame parser plus a
// follower that feeds decoded run events to a callback until the terminal
// frame arrives. The chunk source is injected, so tests replay intercepted
// streams and the browser app wraps a streaming fetch body.

import { runEventSchema, type RunEvent } from "./types";

export interface SseFrame {
  event: string;
  data: string;
}

function parseRawFrame(raw: string): SseFrame | null {
  let event = "message";
  const data: string[] = [];
  for (const line of raw.split("\n")) {
    if (line.startsWith("event:")) {
      event = line.slice("event:".length).trim();
    } else if (line.startsWith("data:")) {
      data.push(line.slice("data:".length).replace(/^ /, ""));
    }
    // comment lines (":") and unknown fields are ignored, as event-stream
    // consumers are expected to do
  }
  if (data.length === 0) return null;
  return { event, data: data.join("\n") };
}

/** Incremental SSE parser; safe across arbitrary chunk boundaries. */
export class SseParser {
  private buffer = "";

  push(chunk: string): SseFrame[] {
    this.buffer += chunk.replace(/\r\n/g, "\n");
    const frames: SseFrame[] = [];
    let split: number;
    while ((split = this.buffer.indexOf("\n\n")) !== -1) {
      const raw = this.buffer.slice(0, split);
      this.buffer = this.buffer.slice(split + 2);
      const frame = parseRawFrame(raw);
      if (frame) frames.push(frame);
    }
    return frames;
  }
}

/** Parse a complete stream capture into frames. */
export function parseSseText(text: string): SseFrame[] {
  return new SseParser().push(text);
}

/** Decode one frame into a typed run event; the frame name must match. */
export function decodeRunEvent(frame: SseFrame): RunEvent {
  const event = runEventSchema.parse(JSON.parse(frame.data));
  if (event.event !== frame.event) {
    throw new Error(`SSE frame named ${frame.event} carries event ${event.event}`);
  }
  return event;
}

export function isTerminal(event: RunEvent): boolean {
  return event.event === "completed" || event.event === "failed";
}

export type StreamOpener = (runId: string) => AsyncIterable<string>;

/**
 * Follow one run's event stream to its terminal event. Every decoded event
 * is handed to `onEvent` in order; returns the terminal event.
 */
export async function followRunEvents(
  open: StreamOpener,
  runId: string,
  onEvent: (event: RunEvent) => void,
): Promise<RunEvent> {
  const parser = new SseParser();
  for await (const chunk of open(runId)) {
    for (const frame of parser.push(chunk)) {
      const event = decodeRunEvent(frame);
      onEvent(event);
      if (isTerminal(event)) return event;
    }
  }
  throw new Error(`event stream for ${runId} ended before a terminal event`);
}
