import { beforeEach, describe, expect, it } from "vitest";
import { ProblemEditor } from "../src/editor.js";
import checkGolden from "./fixtures/check-golden-error.json";
import mary from "./fixtures/mary-submission.json";

let editor: ProblemEditor;

beforeEach(() => {
  document.body.innerHTML = "";
  editor = new ProblemEditor();
  document.body.appendChild(editor.element);
});

describe("content round trip", () => {
  it("hands box content back byte for byte", () => {
    const gnarly = {
      sorts: mary.sorts + "\n\n   ",
      vocabulary: "\t" + mary.vocabulary,
      constraints: mary.constraints + "\n-- note\n",
    };
    editor.setSubmission(gnarly);
    expect(editor.submission()).toEqual(gnarly);
  });

  it("keeps content unchanged across mark and diagnostic churn", () => {
    editor.setSubmission(mary);
    editor.markLines("constraints", [1, 3], "mus-line");
    editor.setDiagnostics(checkGolden.diagnostics);
    editor.clearDiagnostics();
    expect(editor.submission()).toEqual(mary);
  });
});

describe("gutter", () => {
  it("numbers every line of the box", () => {
    editor.setValue("constraints", "a.\nb.\nc.");
    const cells = editor.element.querySelectorAll(
      '[data-box="constraints"] .gutter .ln');
    expect([...cells].map((c) => c.textContent)).toEqual(["1", "2", "3"]);
  });

  it("marks and clears requested lines", () => {
    editor.setValue("constraints", "a.\nb.\nc.");
    editor.markLines("constraints", [1, 2], "mus-line");
    expect(editor.markedLines("constraints")).toEqual([1, 2]);
    const marked = editor.element.querySelectorAll(
      '[data-box="constraints"] .gutter .mus-line');
    expect(marked.length).toBe(2);
    editor.clearMarks();
    expect(editor.element.querySelectorAll(".mus-line").length).toBe(0);
  });
});

describe("inline diagnostics", () => {
  it("files the captured type error under the constraints box, collapsed", () => {
    editor.setSubmission({ ...mary, constraints: "had(Mary, SOME x lamb(x)).\n" });
    editor.setDiagnostics(checkGolden.diagnostics);
    const host = editor.element.querySelector('[data-testid=diags-constraints]')!;
    const block = host.querySelector("details")!;
    expect(block.hasAttribute("open")).toBe(false);
    expect(block.querySelector("summary")!.textContent)
      .toContain("Type mismatch with argument of had");
    expect(block.querySelector("summary")!.textContent)
      .toContain("constraints line 1");
    expect(block.querySelector("pre")!.textContent)
      .toContain("expects argument 2 to be of type animal");
    const gutterMark = editor.element.querySelector(
      '[data-box="constraints"] .gutter .line-error');
    expect(gutterMark?.textContent).toBe("1");
  });
});
