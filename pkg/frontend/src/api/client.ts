// Thin typed client over the service's HTTP+JSON API. The transport is
// injected so tests drive the client with intercepted fixtures and the
// browser app passes a fetch adapter.

import type { z } from "zod";
import {
  errorBodySchema,
  healthSchema,
  ingestResponseSchema,
  rewardBreakdownSchema,
  runAcceptedSchema,
  runDetailSchema,
  runListSchema,
  type Health,
  type IngestResponse,
  type RewardBreakdown,
  type RewardWeights,
  type RunAccepted,
  type RunDetail,
  type RunInfo,
} from "./types";

export interface HttpReply {
  status: number;
  body: string;
}

export interface HttpRequestInit {
  method: string;
  headers?: Record<string, string>;
  body?: string;
}

export type HttpCall = (url: string, init: HttpRequestInit) => Promise<HttpReply>;

export class ServiceError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly stage: string | null = null,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

export interface ManuscriptInput {
  title: string;
  body: string;
  id?: string;
}

export interface ReviewInput {
  text: string;
  venue?: string;
  id?: string;
}

export interface TsrRequest {
  manuscriptId: string;
  reviewId: string;
  commentId: string;
}

export interface CandidatesRequest extends TsrRequest {
  groupSize?: number;
  baseSeed?: number;
  weights?: RewardWeights;
  strategyOverride?: string[];
}

export interface ScoreRequest {
  text: string;
  reviewText: string;
  commentText: string;
  evidenceText?: string;
}

function errorFromReply(reply: HttpReply): ServiceError {
  try {
    const body = errorBodySchema.parse(JSON.parse(reply.body));
    return new ServiceError(body.error, reply.status, body.stage);
  } catch {
    return new ServiceError(
      `service returned HTTP ${reply.status}: ${reply.body.slice(0, 200)}`,
      reply.status,
    );
  }
}

export class ServiceClient {
  constructor(
    readonly baseUrl: string,
    private readonly call: HttpCall,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    schema: z.ZodType<T>,
    body?: unknown,
  ): Promise<T> {
    const init: HttpRequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const reply = await this.call(this.baseUrl + path, init);
    if (reply.status >= 400) {
      throw errorFromReply(reply);
    }
    return schema.parse(JSON.parse(reply.body));
  }

  health(): Promise<Health> {
    return this.request("GET", "/api/health", healthSchema);
  }

  ingest(manuscript: ManuscriptInput, review: ReviewInput): Promise<IngestResponse> {
    return this.request("POST", "/api/reviews", ingestResponseSchema, {
      manuscript,
      review,
    });
  }

  startExtract(reviewId: string): Promise<RunAccepted> {
    return this.request("POST", "/api/extract", runAcceptedSchema, {
      review_id: reviewId,
    });
  }

  startTsr(req: TsrRequest): Promise<RunAccepted> {
    return this.request("POST", "/api/tsr", runAcceptedSchema, {
      manuscript_id: req.manuscriptId,
      review_id: req.reviewId,
      comment_id: req.commentId,
    });
  }

  startCandidates(req: CandidatesRequest): Promise<RunAccepted> {
    const body: Record<string, unknown> = {
      manuscript_id: req.manuscriptId,
      review_id: req.reviewId,
      comment_id: req.commentId,
    };
    if (req.groupSize !== undefined) body["group_size"] = req.groupSize;
    if (req.baseSeed !== undefined) body["base_seed"] = req.baseSeed;
    if (req.weights !== undefined) body["weights"] = req.weights;
    if (req.strategyOverride !== undefined) body["strategy_override"] = req.strategyOverride;
    return this.request("POST", "/api/candidates", runAcceptedSchema, body);
  }

  getRun(runId: string): Promise<RunDetail> {
    return this.request("GET", `/api/runs/${runId}`, runDetailSchema);
  }

  async listRuns(): Promise<RunInfo[]> {
    const parsed = await this.request("GET", "/api/runs", runListSchema);
    return parsed.runs;
  }

  score(req: ScoreRequest): Promise<RewardBreakdown> {
    const body: Record<string, unknown> = {
      text: req.text,
      review_text: req.reviewText,
      comment_text: req.commentText,
    };
    if (req.evidenceText !== undefined) body["evidence_text"] = req.evidenceText;
    return this.request("POST", "/api/score", rewardBreakdownSchema, body);
  }
}
