// Wire contract for the drafting service. Every schema here mirrors one
// response payload; test/fixtures/ holds intercepted bodies that each schema
// must accept, so a contract drift fails the suite before it reaches the UI.

import { z } from "zod";

export const healthSchema = z.object({
  status: z.string(),
  mock: z.boolean(),
  model: z.string(),
});
export type Health = z.infer<typeof healthSchema>;

export const ingestResponseSchema = z.object({
  manuscript_id: z.string(),
  review_id: z.string(),
  chunk_count: z.number().int(),
});
export type IngestResponse = z.infer<typeof ingestResponseSchema>;

export const runAcceptedSchema = z.object({
  run_id: z.string(),
  kind: z.string(),
  status: z.string(),
});
export type RunAccepted = z.infer<typeof runAcceptedSchema>;

export const runStatusSchema = z.enum(["queued", "running", "completed", "failed"]);
export type RunStatus = z.infer<typeof runStatusSchema>;

export const runInfoSchema = z.object({
  run_id: z.string(),
  kind: z.string(),
  status: runStatusSchema,
  created_at: z.string(),
  finished_at: z.string().nullable(),
  error: z.string().nullable(),
});
export type RunInfo = z.infer<typeof runInfoSchema>;

export const runDetailSchema = runInfoSchema.extend({
  result: z.unknown().nullable(),
});
export type RunDetail = z.infer<typeof runDetailSchema>;

export const runListSchema = z.object({ runs: z.array(runInfoSchema) });

export const globalProfileSchema = z.object({
  overall_stance: z.string(),
  overall_attitude: z.string(),
  dominant_concern: z.string(),
  reviewer_expertise: z.string(),
  confidence: z.number().int(),
});
export type GlobalProfile = z.infer<typeof globalProfileSchema>;

export const commentAnalysisSchema = z.object({
  comment_id: z.string(),
  comment_text: z.string().optional(),
  category: z.string(),
  sub_category: z.string(),
  severity: z.string(),
  confidence: z.number().int(),
});
export type CommentAnalysis = z.infer<typeof commentAnalysisSchema>;

export const profileSchema = z.object({
  global_profile: globalProfileSchema,
  comment_analysis: z.array(commentAnalysisSchema),
});
export type Profile = z.infer<typeof profileSchema>;

export const extractedCommentSchema = z.object({
  id: z.string(),
  ordinal: z.number().int(),
  text: z.string(),
  distilled: z.boolean(),
});

export const extractResultSchema = z.object({
  review_id: z.string(),
  profile: profileSchema,
  comments: z.array(extractedCommentSchema),
});
export type ExtractResult = z.infer<typeof extractResultSchema>;

export const traceEventSchema = z.object({
  stage: z.string(),
  model_id: z.string(),
  timestamp: z.string(),
  detail: z.string().optional(),
});

export const tsrResultSchema = z.object({
  manuscript_id: z.string(),
  review_id: z.string(),
  comment_id: z.string(),
  profile: profileSchema,
  strategy: z.array(z.string()),
  response: z.string(),
  retrieved_chunk_ids: z.array(z.string()),
  provider_trace: z.array(traceEventSchema),
});
export type TsrResult = z.infer<typeof tsrResultSchema>;

export const rewardBreakdownSchema = z.object({
  format: z.number(),
  think: z.number(),
  resp: z.number(),
  div: z.number(),
  total: z.number(),
  raw_judge_scores: z.record(z.string(), z.number().int()),
});
export type RewardBreakdown = z.infer<typeof rewardBreakdownSchema>;

export const candidateSchema = z.object({
  text: z.string(),
  reward: rewardBreakdownSchema,
  advantage: z.number(),
});
export type CandidatePayload = z.infer<typeof candidateSchema>;

export const rewardWeightsSchema = z.tuple([z.number(), z.number(), z.number(), z.number()]);
export type RewardWeights = z.infer<typeof rewardWeightsSchema>;

export const candidatesResultSchema = z.object({
  prompt_id: z.string(),
  size: z.number().int(),
  candidates: z.array(candidateSchema),
  best_index: z.number().int(),
  comment_id: z.string(),
  weights: rewardWeightsSchema,
});
export type CandidatesResult = z.infer<typeof candidatesResultSchema>;

export const errorBodySchema = z.object({
  error: z.string(),
  stage: z.string().nullable(),
});
export type ErrorBody = z.infer<typeof errorBodySchema>;

// One JSON object per SSE frame; `event` always duplicates the frame name.
export const runEventSchema = z.object({
  event: z.enum(["queued", "running", "stage", "completed", "failed"]),
  seq: z.number().int(),
  ts: z.string().optional(),
  kind: z.string().optional(),
  stage: z.string().optional(),
  status: z.string().optional(),
  detail: z.string().nullable().optional(),
  error: z.string().optional(),
  synthetic: z.boolean().optional(),
});
export type RunEvent = z.infer<typeof runEventSchema>;
