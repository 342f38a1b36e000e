import { Annotation, Problem, Session, SessionNode } from "./types.js";

/** A configuration displayed exactly as served: sorted label names. */
export type Config = string[];

function configKey(config: Config): string {
  return [...config].sort().join(" ");
}

export function labelCount(problem: Problem): number {
  return problem.labels.length;
}

export function constraintSizes(problem: Problem): {
  node: number;
  edge: number;
} {
  return { node: problem.node.length, edge: problem.edge.length };
}

/** Exact set difference between two configuration lists. */
export function diffConfigs(
  before: Config[],
  after: Config[],
): { added: Config[]; removed: Config[] } {
  const beforeKeys = new Set(before.map(configKey));
  const afterKeys = new Set(after.map(configKey));
  const added = after
    .filter((c) => !beforeKeys.has(configKey(c)))
    .map((c) => [...c].sort());
  const removed = before
    .filter((c) => !afterKeys.has(configKey(c)))
    .map((c) => [...c].sort());
  added.sort((a, b) => configKey(a).localeCompare(configKey(b)));
  removed.sort((a, b) => configKey(a).localeCompare(configKey(b)));
  return { added, removed };
}

export interface ProblemDiff {
  labelsAdded: string[];
  labelsRemoved: string[];
  node: { added: Config[]; removed: Config[] };
  edge: { added: Config[]; removed: Config[] };
  renames: Record<string, string> | null;
}

export function diffProblems(parent: Problem, child: Problem): ProblemDiff {
  const parentLabels = new Set(parent.labels);
  const childLabels = new Set(child.labels);
  return {
    labelsAdded: child.labels.filter((l) => !parentLabels.has(l)).sort(),
    labelsRemoved: parent.labels.filter((l) => !childLabels.has(l)).sort(),
    node: diffConfigs(parent.node, child.node),
    edge: diffConfigs(parent.edge, child.edge),
    renames: child.renames ?? null,
  };
}

/** Display-only grouping of expanded configurations into positional
 * set-notation lines; the underlying configuration set is exactly the
 * server payload. */
export function condense(configs: Config[]): string[] {
  let groups: string[][][] = configs
    .map((c) => [...c].sort().map((label) => [label]))
    .sort((a, b) => groupKey(a).localeCompare(groupKey(b)));
  let merged = true;
  while (merged) {
    merged = false;
    outer: for (let i = 0; i < groups.length; i++) {
      for (let j = i + 1; j < groups.length; j++) {
        const combined = tryMerge(groups[i]!, groups[j]!);
        if (combined !== null) {
          groups.splice(j, 1);
          groups.splice(i, 1, combined);
          merged = true;
          break outer;
        }
      }
    }
  }
  groups = groups.sort((a, b) => groupKey(a).localeCompare(groupKey(b)));
  return groups.map((g) =>
    g.map((position) => `[${[...position].sort().join(" ")}]`).join(" "),
  );
}

function groupKey(group: string[][]): string {
  return group.map((position) => [...position].sort().join(",")).join("|");
}

function tryMerge(a: string[][], b: string[][]): string[][] | null {
  if (a.length !== b.length) return null;
  let differing = -1;
  for (let i = 0; i < a.length; i++) {
    const sameSet =
      [...a[i]!].sort().join(",") === [...b[i]!].sort().join(",");
    if (!sameSet) {
      if (differing >= 0) return null;
      differing = i;
    }
  }
  if (differing < 0) return a;
  const combined = a.map((position, i) =>
    i === differing
      ? [...new Set([...position, ...b[differing]!])]
      : [...position],
  );
  return combined;
}

export function renderConstraints(
  problem: Problem,
  mode: "condensed" | "expanded",
): { node: string[]; edge: string[] } {
  if (mode === "expanded") {
    return {
      node: problem.node.map((c) => [...c].sort().join(" ")).sort(),
      edge: problem.edge.map((c) => [...c].sort().join(" ")).sort(),
    };
  }
  return { node: condense(problem.node), edge: condense(problem.edge) };
}

// -- badges ------------------------------------------------------------------

export interface Badge {
  kind: string;
  text: string;
}

function badgeFor(annotation: Annotation): Badge | null {
  const op = annotation.op["op"];
  const result = annotation.result;
  if (op === "fixedpoint") {
    const yes = result["fixed_point"] === true;
    return { kind: "fixedpoint", text: yes ? "fixed point" : "not a fixed point" };
  }
  if (op === "zeroround") {
    const yes = result["solvable"] === true;
    return { kind: "zeroround", text: yes ? "zero-round solvable" : "no zero-round rule" };
  }
  if (op === "relaxation") {
    if ("verified" in result) {
      return {
        kind: "relaxation",
        text: result["verified"] === true ? "mapping verified" : "mapping rejected",
      };
    }
    return {
      kind: "relaxation",
      text: result["found"] === true ? "relaxation found" : "no relaxation",
    };
  }
  if (op === "refute-sso") {
    return { kind: "refute-sso", text: "refuted: zero-round rule emitted" };
  }
  return null;
}

export function badges(node: SessionNode): Badge[] {
  const out: Badge[] = [];
  for (const annotation of node.annotations) {
    const badge = badgeFor(annotation);
    if (badge !== null) out.push(badge);
  }
  return out;
}

// -- session tree ------------------------------------------------------------

export interface TreeNodeView {
  id: number;
  operation: string;
  note: string;
  labelCount: number;
  nodeConfigs: number;
  edgeConfigs: number;
  badges: Badge[];
  children: TreeNodeView[];
}

export function sessionTree(session: Session): TreeNodeView {
  const byId = new Map(session.nodes.map((n) => [n.id, n]));
  const build = (node: SessionNode): TreeNodeView => ({
    id: node.id,
    operation: String(node.op["op"] ?? "?"),
    note: node.note ?? "",
    labelCount: labelCount(node.problem),
    nodeConfigs: node.problem.node.length,
    edgeConfigs: node.problem.edge.length,
    badges: badges(node),
    children: node.children
      .map((id) => byId.get(id))
      .filter((child): child is SessionNode => child !== undefined)
      .map(build),
  });
  const root = session.nodes.find((n) => n.parent === null);
  if (root === undefined) throw new Error("session has no root node");
  return build(root);
}

export function renderTreeLines(view: TreeNodeView, indent = 0): string[] {
  const pad = "  ".repeat(indent);
  const badgeText = view.badges.length
    ? "  [" + view.badges.map((b) => b.text).join("; ") + "]"
    : "";
  const note = view.note ? `  (${view.note})` : "";
  const lines = [
    `${pad}#${view.id} ${view.operation}: ${view.labelCount} labels, ` +
      `${view.nodeConfigs} node / ${view.edgeConfigs} edge configs` +
      badgeText +
      note,
  ];
  for (const child of view.children) {
    lines.push(...renderTreeLines(child, indent + 1));
  }
  return lines;
}

// -- operation panel ---------------------------------------------------------

/** Input choices for the zero-round check, mirroring the server catalog. */
export const ZERO_ROUND_INPUTS: { label: string; value: string | null }[] = [
  { label: "no input", value: null },
  { label: "sinkless orientation", value: "so" },
  { label: "edge coloring", value: "ec" },
];

export interface StepRequest {
  op: string;
  params: Record<string, unknown>;
}

export function buildStepRequest(
  op: string,
  options: {
    k?: number;
    inputProblem?: Problem | null;
    targetProblem?: Problem;
    mapping?: Record<string, string>;
    kind?: string;
  } = {},
): StepRequest {
  const params: Record<string, unknown> = {};
  if (op === "qpow") params.k = options.k ?? 1;
  if (op === "zeroround" && options.inputProblem) {
    params.input = options.inputProblem;
  }
  if (op === "relaxation") {
    params.to = options.targetProblem;
    if (options.kind !== undefined) params.kind = options.kind;
    if (options.mapping !== undefined) params.mapping = options.mapping;
  }
  if (op === "tau") params.target = options.targetProblem;
  if (op === "product") params.other = options.targetProblem;
  return { op, params };
}
