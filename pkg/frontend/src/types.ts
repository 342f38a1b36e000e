import { z } from "zod";

// Wire form of a problem as served by the /v1 API.
export const ProblemSchema = z.object({
  delta: z.number().int().positive(),
  labels: z.array(z.string()),
  node: z.array(z.array(z.string())),
  edge: z.array(z.array(z.string())),
  renames: z.record(z.string(), z.string()).optional(),
});
export type Problem = z.infer<typeof ProblemSchema>;

export const AnnotationSchema = z.object({
  op: z.record(z.string(), z.unknown()),
  result: z.record(z.string(), z.unknown()),
  note: z.string().optional(),
});
export type Annotation = z.infer<typeof AnnotationSchema>;

export const SessionNodeSchema = z.object({
  id: z.number().int(),
  parent: z.number().int().nullable(),
  op: z.record(z.string(), z.unknown()),
  problem: ProblemSchema,
  note: z.string().optional(),
  children: z.array(z.number().int()),
  annotations: z.array(AnnotationSchema),
});
export type SessionNode = z.infer<typeof SessionNodeSchema>;

export const SessionSchema = z.object({
  id: z.string(),
  created: z.number(),
  updated: z.number(),
  nodes: z.array(SessionNodeSchema),
});
export type Session = z.infer<typeof SessionSchema>;

export const JobSchema = z.object({
  id: z.string(),
  status: z.enum(["running", "done", "error", "cancelled"]),
  progress: z.object({ elapsed: z.number() }),
  result: z.unknown().optional(),
  error: z.record(z.string(), z.unknown()).optional(),
});
export type Job = z.infer<typeof JobSchema>;

export const ApiErrorSchema = z.object({
  kind: z.string(),
  error: z.string(),
  partial_index: z.number().int().optional(),
});
export type ApiError = z.infer<typeof ApiErrorSchema>;
