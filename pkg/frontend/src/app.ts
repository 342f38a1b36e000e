import { ApiClient, ApiRequestError } from "./api.js";
import { Problem, Session, SessionNode } from "./types.js";
import {
  ZERO_ROUND_INPUTS,
  buildStepRequest,
  diffProblems,
  renderConstraints,
  renderTreeLines,
  sessionTree,
} from "./view.js";

interface ExplorerState {
  sessionId: string | null;
  selectedNode: number;
  renderMode: "condensed" | "expanded";
}

const state: ExplorerState = {
  sessionId: null,
  selectedNode: 0,
  renderMode: "condensed",
};

const api = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (found === null) throw new Error(`missing element #${id}`);
  return found as T;
}

async function refresh(): Promise<void> {
  if (state.sessionId === null) return;
  const session = await api.session(state.sessionId);
  renderTree(session);
  const node = session.nodes.find((n) => n.id === state.selectedNode);
  if (node !== undefined) renderNode(session, node);
}

function renderTree(session: Session): void {
  const tree = sessionTree(session);
  const box = el<HTMLDivElement>("tree");
  box.textContent = "";
  for (const line of renderTreeLines(tree)) {
    const row = document.createElement("div");
    row.className = "tree-row";
    row.textContent = line;
    const id = Number(/#(\d+)/.exec(line)?.[1] ?? "0");
    row.addEventListener("click", () => {
      state.selectedNode = id;
      void refresh();
    });
    if (id === state.selectedNode) row.classList.add("selected");
    box.appendChild(row);
  }
}

function renderNode(session: Session, node: SessionNode): void {
  const constraints = renderConstraints(node.problem, state.renderMode);
  el<HTMLDivElement>("node-title").textContent =
    `node #${node.id} — ${node.problem.labels.length} labels ` +
    `(${node.problem.labels.join(", ")})`;
  el<HTMLPreElement>("node-constraints").textContent =
    "node:\n  " + constraints.node.join("\n  ") +
    "\nedge:\n  " + constraints.edge.join("\n  ");

  const parent = session.nodes.find((n) => n.id === node.parent);
  const diffBox = el<HTMLPreElement>("node-diff");
  if (parent === undefined) {
    diffBox.textContent = "(root node)";
  } else {
    const diff = diffProblems(parent.problem, node.problem);
    const lines: string[] = [];
    if (diff.labelsAdded.length)
      lines.push("labels added: " + diff.labelsAdded.join(" "));
    if (diff.labelsRemoved.length)
      lines.push("labels removed: " + diff.labelsRemoved.join(" "));
    for (const [which, part] of [
      ["node", diff.node],
      ["edge", diff.edge],
    ] as const) {
      for (const c of part.added) lines.push(`+ ${which}: ${c.join(" ")}`);
      for (const c of part.removed) lines.push(`- ${which}: ${c.join(" ")}`);
    }
    if (diff.renames !== null) {
      for (const [fresh, group] of Object.entries(diff.renames)) {
        lines.push(`rename ${fresh} = ${group}`);
      }
    }
    diffBox.textContent = lines.length ? lines.join("\n") : "(no changes)";
  }
}

function showError(err: unknown): void {
  const box = el<HTMLDivElement>("error");
  if (err instanceof ApiRequestError) {
    box.textContent =
      `${err.payload.kind}: ${err.payload.error}` +
      (err.payload.partial_index !== undefined
        ? ` (completed ${err.payload.partial_index} steps)`
        : "");
  } else {
    box.textContent = String(err);
  }
}

async function startSession(): Promise<void> {
  const name = el<HTMLSelectElement>("catalog-pick").value;
  const session = await api.createSession({ op: "catalog", name });
  state.sessionId = session.id;
  state.selectedNode = 0;
  await refresh();
}

async function applyOperation(): Promise<void> {
  if (state.sessionId === null) return;
  const op = el<HTMLSelectElement>("op-pick").value;
  const options: Parameters<typeof buildStepRequest>[1] = {};
  if (op === "qpow") {
    options.k = Number(el<HTMLInputElement>("op-k").value || "1");
  }
  if (op === "zeroround") {
    const pick = el<HTMLSelectElement>("zeroround-input").value;
    options.inputProblem =
      pick === "" ? null : await api.catalogProblem(pick);
  }
  if (op === "relaxation") {
    const text = el<HTMLTextAreaElement>("target-problem").value.trim();
    options.targetProblem = await api.parseProblem(text);
  }
  const request = buildStepRequest(op, options);
  const result = await api.addStep(
    state.sessionId,
    state.selectedNode,
    request.op,
    request.params,
  );
  if ("id" in result && typeof result.id === "number") {
    state.selectedNode = result.id;
  }
  await refresh();
}

export function main(): void {
  const picker = el<HTMLSelectElement>("zeroround-input");
  for (const choice of ZERO_ROUND_INPUTS) {
    const option = document.createElement("option");
    option.value = choice.value ?? "";
    option.textContent = choice.label;
    picker.appendChild(option);
  }
  el<HTMLButtonElement>("start").addEventListener("click", () => {
    startSession().catch(showError);
  });
  el<HTMLButtonElement>("apply").addEventListener("click", () => {
    applyOperation().catch(showError);
  });
  el<HTMLSelectElement>("render-mode").addEventListener("change", (event) => {
    state.renderMode = (event.target as HTMLSelectElement)
      .value as ExplorerState["renderMode"];
    void refresh();
  });
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", main);
}
