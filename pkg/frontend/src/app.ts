// Workbench wiring: editor, action buttons, results pane, diagnosis pane,
// puzzle browser and saves.  The class owns all state; main.ts only mounts
// it.  Tests construct it with a stub API surface.

import * as api from "./api.js";
import type {
  DiagnoseResponse, PuzzleDetail, SaveRecord, SolveOptions, SolveResponse,
  Submission,
} from "./api.js";
import { ProblemEditor } from "./editor.js";
import {
  constraintList, diagnosticBlock, el, esc, modelTable, outcomeBadge,
  statsLine,
} from "./views.js";
import { locateLine } from "./lines.js";

export type ApiSurface = Pick<typeof api,
  "check" | "solve" | "diagnose" | "listPuzzles" | "getPuzzle" |
  "listSaves" | "getSave" | "createSave" | "updateSave" | "deleteSave">;

const LEVELS = ["Beginner", "Intermediate", "Advanced", "Expert", "Logician"];

const LAYOUT = `
<div class="workbench">
  <header>
    <h1>Logical modelling workbench</h1>
    <div class="banner-host" data-testid="banner-host"></div>
  </header>
  <div class="columns">
    <section class="editor-pane">
      <div class="statement-pin" data-testid="statement-pin" hidden></div>
      <div class="editor-host"></div>
      <div class="options-row">
        <label>max models
          <input data-testid="opt-max-models" type="number" value="10"
                 min="1" max="100">
        </label>
        <label>deadline secs
          <input data-testid="opt-deadline" type="number" value="10" min="1">
        </label>
        <label>bounds
          <input data-testid="opt-bounds" type="text"
                 placeholder="sort 1..3, other 2..2">
        </label>
      </div>
      <div class="actions-row">
        <button data-testid="check-btn">Check</button>
        <button data-testid="solve-btn">Solve</button>
        <button data-testid="cancel-btn" hidden>Cancel</button>
        <span class="status" data-testid="status"></span>
      </div>
      <div class="diagnose-row" data-testid="diagnose-row" hidden>
        <span>No solution in the searched bounds.</span>
        <button data-testid="diagnose-mus-btn">Diagnose</button>
        <button data-testid="diagnose-approx-btn">Best partial solution</button>
      </div>
      <div class="saves-row">
        <input data-testid="save-name" type="text" placeholder="save name">
        <button data-testid="save-btn">Save</button>
        <label><input data-testid="autosave-toggle" type="checkbox">
          autosave on solve</label>
        <ul class="saves-list" data-testid="saves-list"></ul>
      </div>
    </section>
    <aside class="side-pane">
      <h2>Puzzles</h2>
      <select data-testid="level-filter">
        <option value="">All levels</option>
      </select>
      <ul class="puzzle-list" data-testid="puzzle-list"></ul>
      <div class="puzzle-missing" data-testid="puzzle-missing" hidden></div>
    </aside>
  </div>
  <section class="results" data-testid="results"></section>
  <section class="diagnosis" data-testid="diagnosis"></section>
</div>`;

export class Workbench {
  readonly editor = new ProblemEditor();
  private root: HTMLElement;
  private backend: ApiSurface;
  private inFlight: AbortController | null = null;
  private loadedSave: SaveRecord | null = null;

  constructor(root: HTMLElement, backend: ApiSurface = api) {
    this.root = root;
    this.backend = backend;
    root.innerHTML = LAYOUT;
    this.q(".editor-host").appendChild(this.editor.element);

    const levelSelect = this.q<HTMLSelectElement>("[data-testid=level-filter]");
    for (const level of LEVELS) {
      levelSelect.appendChild(el(`<option value="${level}">${level}</option>`));
    }
    levelSelect.addEventListener("change", () => {
      void this.loadPuzzles(levelSelect.value || undefined);
    });

    this.q("[data-testid=check-btn]").addEventListener("click",
      () => void this.runCheck());
    this.q("[data-testid=solve-btn]").addEventListener("click",
      () => void this.runSolve());
    this.q("[data-testid=cancel-btn]").addEventListener("click",
      () => this.inFlight?.abort());
    this.q("[data-testid=diagnose-mus-btn]").addEventListener("click",
      () => void this.runDiagnose("mus"));
    this.q("[data-testid=diagnose-approx-btn]").addEventListener("click",
      () => void this.runDiagnose("approx"));
    this.q("[data-testid=save-btn]").addEventListener("click",
      () => void this.saveCurrent());
  }

  /** Fetch initial data and honour a #save=/#puzzle= deep link. */
  async start(): Promise<void> {
    await this.loadPuzzles();
    await this.refreshSaves();
    const hash = window.location.hash;
    const save = /^#save=(.+)$/.exec(hash);
    if (save) await this.openSaveLink(decodeURIComponent(save[1]));
    const puzzle = /^#puzzle=(.+)$/.exec(hash);
    if (puzzle) await this.openPuzzle(decodeURIComponent(puzzle[1]));
  }

  // -- shared plumbing -------------------------------------------------------

  private q<T extends HTMLElement = HTMLElement>(sel: string): T {
    const found = this.root.querySelector(sel);
    if (!found) throw new Error(`missing element ${sel}`);
    return found as T;
  }

  private setStatus(text: string): void {
    this.q("[data-testid=status]").textContent = text;
  }

  showBanner(message: string): void {
    const banner = el(`
      <div class="banner" data-testid="banner">
        <span>${esc(message)}</span>
        <button class="banner-close">dismiss</button>
      </div>`);
    banner.querySelector(".banner-close")!
      .addEventListener("click", () => banner.remove());
    this.q("[data-testid=banner-host]").appendChild(banner);
  }

  private failure(err: unknown): void {
    if (err instanceof DOMException && err.name === "AbortError") {
      this.setStatus("cancelled");
      return;
    }
    if (err instanceof api.ApiError) {
      this.showBanner(`service error: ${err.message}`);
    } else {
      this.showBanner("cannot reach the service; your input is untouched");
    }
    this.setStatus("failed");
  }

  private busy(): boolean {
    return this.inFlight !== null;
  }

  private beginRequest(): AbortController {
    this.inFlight = new AbortController();
    this.q<HTMLButtonElement>("[data-testid=solve-btn]").disabled = true;
    this.q("[data-testid=cancel-btn]").hidden = false;
    return this.inFlight;
  }

  private endRequest(): void {
    this.inFlight = null;
    this.q<HTMLButtonElement>("[data-testid=solve-btn]").disabled = false;
    this.q("[data-testid=cancel-btn]").hidden = true;
  }

  options(): SolveOptions {
    const opts: SolveOptions = {};
    const max = parseInt(this.q<HTMLInputElement>(
      "[data-testid=opt-max-models]").value, 10);
    if (Number.isFinite(max)) opts.maxModels = max;
    const deadline = parseFloat(this.q<HTMLInputElement>(
      "[data-testid=opt-deadline]").value);
    if (Number.isFinite(deadline)) opts.deadlineSecs = deadline;
    const bounds = parseBounds(this.q<HTMLInputElement>(
      "[data-testid=opt-bounds]").value);
    if (Object.keys(bounds).length) opts.bounds = bounds;
    return opts;
  }

  // -- check / solve ---------------------------------------------------------

  async runCheck(): Promise<void> {
    if (this.busy()) return;
    const sub = this.editor.submission();
    this.editor.clearDiagnostics();
    this.clearResults();
    this.beginRequest();
    this.setStatus("checking");
    try {
      const r = await this.backend.check(sub);
      this.editor.setDiagnostics([...r.diagnostics, ...r.warnings]);
      this.setStatus(r.ok
        ? (r.warnings.length ? "ok, with warnings" : "ok")
        : `${r.diagnostics.length} error${r.diagnostics.length === 1 ? "" : "s"}`);
    } catch (err) {
      this.failure(err);
    } finally {
      this.endRequest();
    }
  }

  async runSolve(): Promise<void> {
    if (this.busy()) return;
    const sub = this.editor.submission();
    this.editor.clearDiagnostics();
    this.clearResults();
    const controller = this.beginRequest();
    this.setStatus("solving");
    try {
      const r = await this.backend.solve(sub, this.options(),
                                         controller.signal);
      this.renderSolve(r, sub);
      if (r.kind === "solutions" &&
          this.q<HTMLInputElement>("[data-testid=autosave-toggle]").checked) {
        await this.saveCurrent(true);
      }
    } catch (err) {
      this.failure(err);
    } finally {
      this.endRequest();
    }
  }

  private clearResults(): void {
    this.q("[data-testid=results]").innerHTML = "";
    this.q("[data-testid=diagnosis]").innerHTML = "";
    this.q("[data-testid=diagnose-row]").hidden = true;
  }

  private renderSolve(r: SolveResponse, sub: Submission): void {
    const results = this.q("[data-testid=results]");
    results.innerHTML = "";
    if (r.kind === "input-errors") {
      this.editor.setDiagnostics([...r.diagnostics, ...r.warnings]);
      this.setStatus("input errors");
      return;
    }
    results.appendChild(outcomeBadge(r));
    results.appendChild(statsLine(r.stats, r.searched));
    for (const d of [...r.diagnostics, ...r.warnings]) {
      results.appendChild(diagnosticBlock(d, locateLine(d.line, sub)));
    }
    if (r.kind === "solutions") {
      const host = el(`<div class="model-grid"></div>`);
      r.models.forEach((m, i) => host.appendChild(modelTable(m, i)));
      results.appendChild(host);
      this.setStatus(`${r.models.length} model${r.models.length === 1 ? "" : "s"}`);
    } else if (r.kind === "no-solution") {
      this.q("[data-testid=diagnose-row]").hidden = false;
      this.setStatus(r.complete ? "no solution" : "no solution found");
    } else {
      this.setStatus(r.kind);
    }
  }

  // -- diagnosis -------------------------------------------------------------

  async runDiagnose(kind: "mus" | "approx"): Promise<void> {
    if (this.busy()) return;
    const sub = this.editor.submission();
    this.beginRequest();
    this.setStatus("diagnosing");
    try {
      const r = await this.backend.diagnose(sub, kind, this.options());
      this.renderDiagnosis(r);
    } catch (err) {
      this.failure(err);
    } finally {
      this.endRequest();
    }
  }

  private renderDiagnosis(r: DiagnoseResponse): void {
    const pane = this.q("[data-testid=diagnosis]");
    pane.innerHTML = "";
    this.editor.clearMarks();
    switch (r.kind) {
      case "high-level-mus": {
        pane.appendChild(el(`<h3>Conflicting constraints</h3>`));
        if (!r.minimal) {
          pane.appendChild(el(`
            <p class="warning" data-testid="partial-core-warning">
              Diagnosis ran out of time; this core may include more
              constraints than necessary.
            </p>`));
        } else {
          pane.appendChild(el(`
            <p>Removing any one of these lines makes the rest satisfiable.</p>`));
        }
        pane.appendChild(constraintList(r.constraints));
        this.editor.markLines("constraints",
                              r.constraints.map((c) => c.boxLine), "mus-line");
        this.setStatus(`conflict core of ${r.constraints.length}`);
        break;
      }
      case "approximate": {
        pane.appendChild(el(`<h3>Best partial solution</h3>`));
        const total = r.satisfiedCount + r.violated.length;
        pane.appendChild(el(`
          <p data-testid="satisfied-indicator">
            ${r.satisfiedCount} of ${total} constraints satisfied
            ${r.optimal ? "(best possible)" : "(may not be best possible)"}
          </p>`));
        pane.appendChild(constraintList(r.violated, true));
        pane.appendChild(modelTable(r.model, 0));
        this.editor.markLines("constraints",
                              r.violated.map((c) => c.boxLine), "violated-line");
        this.setStatus(`${r.satisfiedCount} of ${total} satisfied`);
        break;
      }
      case "timeout":
        pane.appendChild(el(`
          <p class="warning" data-testid="partial-core-warning">
            Diagnosis timed out before finding a core.
          </p>`));
        this.setStatus("diagnosis timed out");
        break;
      case "nothing-to-diagnose":
        pane.appendChild(el(`<p>The constraints are satisfiable as given;
          there is nothing to diagnose.</p>`));
        this.setStatus("nothing to diagnose");
        break;
      case "input-errors":
        this.editor.setDiagnostics(r.diagnostics);
        this.setStatus("input errors");
        break;
    }
  }

  // -- puzzle browser --------------------------------------------------------

  async loadPuzzles(level?: string): Promise<void> {
    const list = this.q("[data-testid=puzzle-list]");
    try {
      const { puzzles } = await this.backend.listPuzzles(level);
      list.innerHTML = "";
      for (const p of puzzles) {
        const row = el(`
          <li data-testid="puzzle-row" data-id="${esc(p.id)}">
            <a href="#puzzle=${encodeURIComponent(p.id)}">${esc(p.title)}</a>
            <span class="level">${esc(p.level)}</span>
          </li>`);
        row.querySelector("a")!.addEventListener("click", (ev) => {
          ev.preventDefault();
          void this.openPuzzle(p.id);
        });
        list.appendChild(row);
      }
    } catch (err) {
      this.failure(err);
    }
  }

  async openPuzzle(id: string): Promise<void> {
    const missing = this.q("[data-testid=puzzle-missing]");
    try {
      const detail = await this.backend.getPuzzle(id);
      missing.hidden = true;
      this.pinStatement(detail);
    } catch (err) {
      if (err instanceof api.ApiError && err.status === 404) {
        missing.hidden = false;
        missing.innerHTML =
          `<p>No puzzle called <code>${esc(id)}</code> exists.
           Pick one from the list instead.</p>`;
        return;
      }
      this.failure(err);
    }
  }

  private pinStatement(detail: PuzzleDetail): void {
    const pin = this.q("[data-testid=statement-pin]");
    pin.hidden = false;
    pin.innerHTML = `
      <h3>${esc(detail.title)} <span class="level">${esc(detail.level)}</span></h3>
      <pre class="statement">${esc(detail.statement)}</pre>
      <button data-testid="load-skeleton-btn">Load into editor</button>`;
    pin.querySelector("[data-testid=load-skeleton-btn]")!
      .addEventListener("click", () => {
        this.editor.setSubmission(detail.skeleton);
        const bounds = Object.entries(detail.bounds)
          .map(([s, [lo, hi]]) => `${s} ${lo}..${hi}`).join(", ");
        this.q<HTMLInputElement>("[data-testid=opt-bounds]").value = bounds;
      });
  }

  // -- saves -----------------------------------------------------------------

  async refreshSaves(): Promise<void> {
    const list = this.q("[data-testid=saves-list]");
    try {
      const { saves } = await this.backend.listSaves();
      list.innerHTML = "";
      for (const rec of saves) {
        const row = el(`
          <li data-testid="save-row" data-id="${esc(rec.saveId)}">
            <a href="#save=${encodeURIComponent(rec.saveId)}">${esc(rec.name)}</a>
            <button class="save-delete">delete</button>
          </li>`);
        row.querySelector("a")!.addEventListener("click", () => {
          void this.openSaveLink(rec.saveId);
        });
        row.querySelector(".save-delete")!.addEventListener("click",
          async () => {
            try {
              await this.backend.deleteSave(rec.saveId);
              await this.refreshSaves();
            } catch (err) {
              this.failure(err);
            }
          });
        list.appendChild(row);
      }
    } catch (err) {
      this.failure(err);
    }
  }

  async openSaveLink(id: string): Promise<void> {
    try {
      const rec = await this.backend.getSave(id);
      this.loadedSave = rec;
      this.editor.setSubmission(rec.submission);
      this.q<HTMLInputElement>("[data-testid=save-name]").value = rec.name;
      window.location.hash = `#save=${encodeURIComponent(id)}`;
      this.setStatus(`loaded save ${rec.name}`);
    } catch (err) {
      this.failure(err);
    }
  }

  async saveCurrent(quiet = false): Promise<void> {
    const nameInput = this.q<HTMLInputElement>("[data-testid=save-name]");
    const name = nameInput.value.trim() || "untitled";
    const sub = this.editor.submission();
    try {
      if (this.loadedSave && this.loadedSave.name === name) {
        this.loadedSave = await this.backend.updateSave(
          this.loadedSave.saveId, name, sub, this.loadedSave.updatedAt);
      } else {
        this.loadedSave = await this.backend.createSave(name, sub);
      }
      window.location.hash = `#save=${encodeURIComponent(this.loadedSave.saveId)}`;
      if (!quiet) this.setStatus(`saved as ${name}`);
      await this.refreshSaves();
    } catch (err) {
      if (err instanceof api.ApiError && err.status === 409) {
        this.showBanner(`cannot save: ${err.message}`);
      } else {
        this.failure(err);
      }
    }
  }
}

/** "person 1..1, animal 2..4" -> {person: [1, 1], animal: [2, 4]} */
export function parseBounds(text: string): Record<string, [number, number]> {
  const bounds: Record<string, [number, number]> = {};
  for (const part of text.split(",")) {
    const m = /^\s*([A-Za-z_]\w*)\s+(\d+)\s*\.\.\s*(\d+)\s*$/.exec(part);
    if (m) bounds[m[1]] = [parseInt(m[2], 10), parseInt(m[3], 10)];
  }
  return bounds;
}
