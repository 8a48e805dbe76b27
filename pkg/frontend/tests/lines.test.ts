// The box offset mirror must agree with the offset the service reports,
// so the captured check payloads act as the oracle here.

import { describe, expect, it } from "vitest";
import { boxOffsets, locateLine } from "../src/lines.js";
import checkOk from "./fixtures/check-ok.json";
import checkEmpty from "./fixtures/check-empty.json";
import checkGolden from "./fixtures/check-golden-error.json";
import mary from "./fixtures/mary-submission.json";

const empty = { sorts: "", vocabulary: "", constraints: "" };

describe("boxOffsets", () => {
  it("matches the service offset for the reference submission", () => {
    expect(boxOffsets(mary).constraints).toBe(checkOk.constraintsLineOffset);
  });

  it("matches the service offset for an empty submission", () => {
    expect(boxOffsets(empty).constraints).toBe(checkEmpty.constraintsLineOffset);
  });

  it("ignores trailing newlines the way the service joins boxes", () => {
    const padded = {
      sorts: mary.sorts + "\n\n\n",
      vocabulary: mary.vocabulary,
      constraints: mary.constraints,
    };
    expect(boxOffsets(padded).constraints).toBe(checkOk.constraintsLineOffset);
  });
});

describe("locateLine", () => {
  it("maps the captured type error into the constraints box", () => {
    const sub = { ...mary, constraints: "had(Mary, SOME x lamb(x)).\n" };
    const d = checkGolden.diagnostics[0];
    expect(locateLine(d.line, sub)).toEqual({ box: "constraints", boxLine: 1 });
  });

  it("maps lines in the other two boxes", () => {
    expect(locateLine(2, mary)).toEqual({ box: "sorts", boxLine: 1 });
    const vocabStart = boxOffsets(mary).vocabulary;
    expect(locateLine(vocabStart + 3, mary))
      .toEqual({ box: "vocabulary", boxLine: 3 });
  });

  it("returns null on a section header line", () => {
    expect(locateLine(1, mary)).toBeNull();
    expect(locateLine(boxOffsets(mary).vocabulary, mary)).toBeNull();
  });
});
