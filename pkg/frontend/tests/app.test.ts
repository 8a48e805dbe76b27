// Whole-workbench flows against a stubbed API surface.  Every payload a
// stub returns was captured verbatim from the live service, so these are
// the same bytes the real UI would render.

import { beforeEach, describe, expect, it, vi } from "vitest";
import type {
  CheckResponse, DiagnoseResponse, PuzzleDetail, SaveRecord, SolveResponse,
} from "../src/api.js";
import { ApiError } from "../src/api.js";
import type { ApiSurface } from "../src/app.js";
import { parseBounds, Workbench } from "../src/app.js";
import checkEmpty from "./fixtures/check-empty.json";
import checkGolden from "./fixtures/check-golden-error.json";
import checkOk from "./fixtures/check-ok.json";
import contra from "./fixtures/contradiction-submission.json";
import diagnoseApprox from "./fixtures/diagnose-approx.json";
import diagnoseMus from "./fixtures/diagnose-mus.json";
import mary from "./fixtures/mary-submission.json";
import logicGames from "./fixtures/puzzle-logic-games.json";
import puzzleMary from "./fixtures/puzzle-mary.json";
import puzzles from "./fixtures/puzzles.json";
import puzzlesBeginner from "./fixtures/puzzles-beginner.json";
import save from "./fixtures/save.json";
import solveContradiction from "./fixtures/solve-contradiction.json";
import solveMary from "./fixtures/solve-mary.json";

function stubBackend(overrides: Partial<ApiSurface> = {}): ApiSurface {
  return {
    check: vi.fn(async () => checkOk as CheckResponse),
    solve: vi.fn(async () => solveMary as unknown as SolveResponse),
    diagnose: vi.fn(async () => diagnoseMus as unknown as DiagnoseResponse),
    listPuzzles: vi.fn(async (level?: string) =>
      level === "Beginner" ? puzzlesBeginner : puzzles),
    getPuzzle: vi.fn(async () => logicGames as unknown as PuzzleDetail),
    listSaves: vi.fn(async () => ({ saves: [] as SaveRecord[] })),
    getSave: vi.fn(async () => save as SaveRecord),
    createSave: vi.fn(async () => save as SaveRecord),
    updateSave: vi.fn(async () => save as SaveRecord),
    deleteSave: vi.fn(async () => undefined),
    ...overrides,
  };
}

let root: HTMLElement;

function mount(backend: ApiSurface): Workbench {
  root = document.createElement("div");
  document.body.appendChild(root);
  return new Workbench(root, backend);
}

const flush = () => new Promise((r) => setTimeout(r, 0));

function click(testid: string): void {
  (root.querySelector(`[data-testid=${testid}]`) as HTMLElement).click();
}

function q<T extends HTMLElement = HTMLElement>(testid: string): T {
  return root.querySelector(`[data-testid=${testid}]`) as T;
}

beforeEach(() => {
  document.body.innerHTML = "";
  window.location.hash = "";
});

describe("solve flow", () => {
  it("shows every model table and a non-unique badge for the pasted problem", async () => {
    const bench = mount(stubBackend());
    bench.editor.setSubmission(mary);
    click("solve-btn");
    await flush();
    const tables = root.querySelectorAll("[data-testid=model-table]");
    expect(tables.length).toBe(21);
    expect(tables.length).toBeGreaterThanOrEqual(2);
    expect(q("badge").textContent).toContain("not unique");
    expect(q("stats").textContent).toContain("ms");
    // the run must not touch what the user typed
    expect(bench.editor.submission()).toEqual(mary);
  });

  it("disables Solve while a run is outstanding and supports cancel", async () => {
    let release!: (r: SolveResponse) => void;
    const backend = stubBackend({
      solve: vi.fn(() => new Promise<SolveResponse>((res) => { release = res; })),
    });
    mount(backend);
    click("solve-btn");
    expect(q<HTMLButtonElement>("solve-btn").disabled).toBe(true);
    expect(q("cancel-btn").hidden).toBe(false);
    click("solve-btn");
    expect(backend.solve).toHaveBeenCalledTimes(1);
    release(solveMary as unknown as SolveResponse);
    await flush();
    expect(q<HTMLButtonElement>("solve-btn").disabled).toBe(false);
    expect(q("cancel-btn").hidden).toBe(true);
  });

  it("keeps the editor and shows a banner when the service is unreachable", async () => {
    const backend = stubBackend({
      check: vi.fn(async () => { throw new TypeError("fetch failed"); }),
    });
    const bench = mount(backend);
    bench.editor.setSubmission(mary);
    click("check-btn");
    await flush();
    expect(bench.editor.submission()).toEqual(mary);
    const banner = q("banner");
    expect(banner.textContent).toContain("cannot reach the service");
    (banner.querySelector(".banner-close") as HTMLElement).click();
    expect(root.querySelector("[data-testid=banner]")).toBeNull();
  });
});

describe("check flow", () => {
  it("renders the captured type error summary with expandable detail", async () => {
    const backend = stubBackend({
      check: vi.fn(async () => checkGolden as CheckResponse),
    });
    const bench = mount(backend);
    bench.editor.setSubmission({ ...mary,
      constraints: "had(Mary, SOME x lamb(x)).\n" });
    click("check-btn");
    await flush();
    const block = root.querySelector(
      "[data-testid=diags-constraints] details")!;
    expect(block.hasAttribute("open")).toBe(false);
    expect(block.querySelector("summary")!.textContent)
      .toContain("Type mismatch with argument of had");
    expect(block.querySelector("pre")!.textContent)
      .toContain("expects argument 2 to be of type animal");
    expect(q("status").textContent).toBe("1 error");
  });

  it("warns on a check of an empty editor", async () => {
    const backend = stubBackend({
      check: vi.fn(async () => checkEmpty as CheckResponse),
    });
    mount(backend);
    click("check-btn");
    await flush();
    expect(root.textContent).toContain("no constraints");
    expect(q("status").textContent).toBe("ok, with warnings");
  });
});

describe("diagnosis flow", () => {
  async function solveContra(backend: ApiSurface): Promise<Workbench> {
    const bench = mount(backend);
    bench.editor.setSubmission(contra);
    click("solve-btn");
    await flush();
    return bench;
  }

  it("exposes Diagnose after a no-solution run and highlights the core", async () => {
    const backend = stubBackend({
      solve: vi.fn(async () => solveContradiction as unknown as SolveResponse),
    });
    const bench = await solveContra(backend);
    expect(q("diagnose-row").hidden).toBe(false);
    expect(q("badge").textContent).toBe("no solution");
    click("diagnose-mus-btn");
    await flush();
    expect(bench.editor.markedLines("constraints")).toEqual([1, 2]);
    const core = root.querySelectorAll("[data-testid=core-constraint]");
    expect(core.length).toBe(2);
    expect(core[0].textContent).toContain("ALL x p(x)");
    expect(root.textContent).toContain("Removing any one");
    expect(bench.editor.submission()).toEqual(contra);
  });

  it("warns when the core search was cut short", async () => {
    const backend = stubBackend({
      solve: vi.fn(async () => solveContradiction as unknown as SolveResponse),
      // same shape the service returns when the deadline interrupts the
      // minimisation pass
      diagnose: vi.fn(async () =>
        ({ ...diagnoseMus, minimal: false }) as unknown as DiagnoseResponse),
    });
    await solveContra(backend);
    click("diagnose-mus-btn");
    await flush();
    expect(q("partial-core-warning").textContent!.replace(/\s+/g, " "))
      .toContain("may include more constraints than necessary");
  });

  it("shows the best partial solution with violated lines struck through", async () => {
    const backend = stubBackend({
      solve: vi.fn(async () => solveContradiction as unknown as SolveResponse),
      diagnose: vi.fn(async () => diagnoseApprox as unknown as DiagnoseResponse),
    });
    await solveContra(backend);
    click("diagnose-approx-btn");
    await flush();
    expect(q("satisfied-indicator").textContent)
      .toContain("2 of 3 constraints satisfied");
    const struck = root.querySelectorAll("[data-testid=violated-constraint] s");
    expect(struck.length).toBe(1);
    expect(struck[0].textContent).toContain("ALL x p(x)");
    expect(root.querySelector("[data-testid=diagnosis] [data-testid=model-table]"))
      .not.toBeNull();
  });
});

describe("puzzle browser", () => {
  it("lists every puzzle and filters by level", async () => {
    const backend = stubBackend();
    const bench = mount(backend);
    await bench.start();
    expect(root.querySelectorAll("[data-testid=puzzle-row]").length)
      .toBe(puzzles.puzzles.length);
    const filter = q<HTMLSelectElement>("level-filter");
    filter.value = "Beginner";
    filter.dispatchEvent(new Event("change"));
    await flush();
    const rows = [...root.querySelectorAll("[data-testid=puzzle-row]")];
    expect(rows.length).toBe(puzzlesBeginner.puzzles.length);
    expect(rows.map((r) => r.getAttribute("data-id"))).toContain("mary-lamb");
  });

  it("pins the statement beside the editor and loads the skeleton", async () => {
    const bench = mount(stubBackend());
    await bench.openPuzzle("logic-games");
    const pin = q("statement-pin");
    expect(pin.hidden).toBe(false);
    expect(pin.textContent).toContain(logicGames.title);
    expect(pin.textContent).toContain("round-robin");
    (pin.querySelector("[data-testid=load-skeleton-btn]") as HTMLElement).click();
    expect(bench.editor.value("sorts")).toBe(logicGames.skeleton.sorts);
    expect(bench.editor.value("constraints")).toBe("");
    // every sort in this puzzle is an enum, so there are no bounds to set
    expect(q<HTMLInputElement>("opt-bounds").value).toBe("");
  });

  it("prefills bounds when the puzzle declares open sorts", async () => {
    const backend = stubBackend({
      getPuzzle: vi.fn(async () => puzzleMary as unknown as PuzzleDetail),
    });
    const bench = mount(backend);
    await bench.openPuzzle("mary-lamb");
    const load = q("statement-pin")
      .querySelector("[data-testid=load-skeleton-btn]") as HTMLElement;
    load.click();
    expect(q<HTMLInputElement>("opt-bounds").value).toContain("person 1..1");
    expect(bench.options().bounds).toEqual(puzzleMary.bounds);
  });

  it("shows a friendly view for an unknown puzzle id", async () => {
    const backend = stubBackend({
      getPuzzle: vi.fn(async () => {
        throw new ApiError(404, "no puzzle 'missing-one'");
      }),
    });
    const bench = mount(backend);
    await bench.openPuzzle("missing-one");
    const missing = q("puzzle-missing");
    expect(missing.hidden).toBe(false);
    expect(missing.textContent).toContain("missing-one");
    expect(root.querySelector("[data-testid=banner]")).toBeNull();
  });
});

describe("saves", () => {
  it("restores editor content byte for byte from a deep link", async () => {
    window.location.hash = `#save=${save.saveId}`;
    const backend = stubBackend();
    const bench = mount(backend);
    await bench.start();
    expect(backend.getSave).toHaveBeenCalledWith(save.saveId);
    expect(bench.editor.submission()).toEqual(save.submission);
    expect(q<HTMLInputElement>("save-name").value).toBe(save.name);
  });

  it("autosaves after a successful solve when the toggle is on", async () => {
    const backend = stubBackend();
    const bench = mount(backend);
    bench.editor.setSubmission(mary);
    q<HTMLInputElement>("autosave-toggle").checked = true;
    click("solve-btn");
    await flush();
    expect(backend.createSave).toHaveBeenCalledTimes(1);
    expect(window.location.hash).toBe(`#save=${save.saveId}`);
  });

  it("saves explicitly and lists the result", async () => {
    const backend = stubBackend({
      listSaves: vi.fn(async () => ({ saves: [save as SaveRecord] })),
    });
    const bench = mount(backend);
    bench.editor.setSubmission(mary);
    q<HTMLInputElement>("save-name").value = "mary session";
    click("save-btn");
    await flush();
    expect(backend.createSave).toHaveBeenCalledWith("mary session",
                                                    expect.anything());
    const rows = root.querySelectorAll("[data-testid=save-row]");
    expect(rows.length).toBe(1);
    expect(rows[0].textContent).toContain("mary session");
  });
});

describe("parseBounds", () => {
  it("reads comma separated ranges and skips junk", () => {
    expect(parseBounds("person 1..1, animal 2..4")).toEqual({
      person: [1, 1], animal: [2, 4],
    });
    expect(parseBounds("")).toEqual({});
    expect(parseBounds("nonsense")).toEqual({});
  });
});
