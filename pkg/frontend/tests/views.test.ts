import { describe, expect, it } from "vitest";
import type { SolveResponse } from "../src/api.js";
import {
  constraintList, diagnosticBlock, modelTable, outcomeBadge, statsLine,
} from "../src/views.js";
import checkGolden from "./fixtures/check-golden-error.json";
import diagnoseMus from "./fixtures/diagnose-mus.json";
import solveMary from "./fixtures/solve-mary.json";
import solveUnique from "./fixtures/solve-unique.json";

describe("modelTable", () => {
  it("lists names, function entries and true tuples from a real model", () => {
    const table = modelTable(solveMary.models[0], 0);
    const text = table.textContent!;
    expect(text).toContain("model 1");
    expect(text).toContain("Mary");
    expect(text).toContain("hue(animal@1)");
    expect(text).toContain("lamb(animal@1)");
    const rows = table.querySelectorAll("tr");
    expect(rows.length).toBeGreaterThanOrEqual(4);
  });

  it("escapes markup in labels", () => {
    const table = modelTable({
      sizes: { t: 1 }, names: { "<x>": "a" }, functions: {}, predicates: {},
    }, 0);
    expect(table.innerHTML).not.toContain("<x>");
    expect(table.textContent).toContain("<x>");
  });
});

describe("outcomeBadge", () => {
  it("flags the 21 model search as not unique", () => {
    const badge = outcomeBadge(solveMary as SolveResponse);
    expect(badge.className).toContain("badge-multiple");
    expect(badge.textContent).toContain("not unique");
    expect(badge.textContent).toContain("21");
  });

  it("flags a single exhausted model as unique", () => {
    const badge = outcomeBadge(solveUnique as SolveResponse);
    expect(badge.className).toContain("badge-unique");
    expect(badge.textContent).toBe("unique");
  });
});

describe("statsLine", () => {
  it("shows wall time and the searched bounds", () => {
    const p = statsLine(solveMary.stats, solveMary.searched);
    expect(p.textContent).toContain(`${solveMary.stats.wallMs} ms`);
    expect(p.textContent).toContain("person 1..1");
  });
});

describe("diagnosticBlock", () => {
  it("keeps the full rendered text inside the collapsed detail", () => {
    const d = checkGolden.diagnostics[0];
    const block = diagnosticBlock(d, { box: "constraints", boxLine: 1 });
    expect(block.tagName).toBe("DETAILS");
    expect(block.querySelector("pre")!.textContent)
      .toContain("which is of type bool.");
    expect(block.querySelector("pre")!.textContent)
      .toContain("SOME x lamb(x)");
  });
});

describe("constraintList", () => {
  it("prints core lines with their box line numbers", () => {
    const list = constraintList(diagnoseMus.constraints);
    const items = list.querySelectorAll("li");
    expect(items.length).toBe(2);
    expect(items[0].textContent).toBe("line 1: ALL x p(x).");
    expect(list.querySelector("s")).toBeNull();
  });

  it("strikes through violated constraints", () => {
    const list = constraintList(diagnoseMus.constraints, true);
    expect(list.querySelectorAll("s").length).toBe(2);
  });
});
