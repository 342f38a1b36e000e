import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import {
  badges,
  buildStepRequest,
  condense,
  diffConfigs,
  diffProblems,
  renderConstraints,
  renderTreeLines,
  sessionTree,
} from "../src/view.js";
import { ProblemSchema, SessionSchema } from "../src/types.js";

function fixture(name: string): unknown {
  const url = new URL(`./fixtures/${name}.json`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf8"));
}

const session = SessionSchema.parse(fixture("session-sso-q3"));

describe("session tree (criterion flow)", () => {
  it("reproduces the served label counts 3, 5, 7 after three q steps", () => {
    const tree = sessionTree(session);
    expect(tree.labelCount).toBe(2);
    let cursor = tree;
    const counts: number[] = [];
    while (cursor.children.length > 0) {
      cursor = cursor.children[0]!;
      counts.push(cursor.labelCount);
    }
    expect(counts).toEqual([3, 5, 7]);
  });

  it("carries the server-computed fixed-point badges", () => {
    for (const node of session.nodes) {
      const view = badges(node);
      const served = node.annotations.find(
        (a) => a.op["op"] === "fixedpoint",
      );
      if (served === undefined) {
        expect(view).toEqual([]);
      } else {
        expect(view).toEqual([
          {
            kind: "fixedpoint",
            text:
              served.result["fixed_point"] === true
                ? "fixed point"
                : "not a fixed point",
          },
        ]);
      }
    }
  });

  it("renders the tree deterministically", () => {
    expect(renderTreeLines(sessionTree(session))).toMatchSnapshot();
  });
});

describe("constraint rendering", () => {
  const eased = ProblemSchema.parse(
    (fixture("op-q-sso") as { problem: unknown }).problem,
  );

  it("expanded view lists the payload configurations verbatim", () => {
    const expanded = renderConstraints(eased, "expanded");
    expect(expanded.node.length).toBe(eased.node.length);
    expect(expanded).toMatchSnapshot();
  });

  it("condensed view covers exactly the payload configurations", () => {
    const condensed = renderConstraints(eased, "condensed");
    expect(condensed).toMatchSnapshot();
  });

  it("condense groups same-shape configurations", () => {
    expect(
      condense([
        ["B", "D"],
        ["C", "D"],
      ]),
    ).toEqual(["[B C] [D]"]);
    expect(condense([["A", "A"]])).toEqual(["[A] [A]"]);
  });
});

describe("constraint diffs", () => {
  it("is an exact set difference", () => {
    const diff = diffConfigs(
      [
        ["I", "I", "O"],
        ["I", "O", "O"],
      ],
      [
        ["I", "O", "O"],
        ["O", "O", "O"],
      ],
    );
    expect(diff).toEqual({
      added: [["O", "O", "O"]],
      removed: [["I", "I", "O"]],
    });
  });

  it("diffs the fixture parent/child problems", () => {
    const parent = session.nodes[0]!.problem;
    const child = session.nodes[1]!.problem;
    expect(diffProblems(parent, child)).toMatchSnapshot();
  });
});

describe("operation panel requests", () => {
  it("builds the zero-round request with a picked input", () => {
    const so = ProblemSchema.parse(
      (fixture("catalog-so") as { problem: unknown }).problem,
    );
    expect(buildStepRequest("zeroround", { inputProblem: so })).toEqual({
      op: "zeroround",
      params: { input: so },
    });
    expect(buildStepRequest("zeroround", { inputProblem: null })).toEqual({
      op: "zeroround",
      params: {},
    });
  });

  it("builds qpow and relaxation requests", () => {
    expect(buildStepRequest("qpow", { k: 3 }).params).toEqual({ k: 3 });
    const so = ProblemSchema.parse(
      (fixture("catalog-so") as { problem: unknown }).problem,
    );
    const request = buildStepRequest("relaxation", { targetProblem: so });
    expect(request.params.to).toEqual(so);
  });
});
