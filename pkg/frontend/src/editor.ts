// The three box problem editor with line number gutters.  Box content is
// handed back exactly as typed; actions never rewrite it.

import type { Diagnostic, Submission } from "./api.js";
import type { BoxName } from "./lines.js";
import { locateLine } from "./lines.js";
import { diagnosticBlock, el } from "./views.js";

const BOXES: { name: BoxName; label: string; rows: number }[] = [
  { name: "sorts", label: "Sorts", rows: 5 },
  { name: "vocabulary", label: "Vocabulary", rows: 8 },
  { name: "constraints", label: "Constraints", rows: 10 },
];

interface Box {
  textarea: HTMLTextAreaElement;
  gutter: HTMLElement;
  diagHost: HTMLElement;
  marks: Map<number, string>; // line -> css class
}

export class ProblemEditor {
  readonly element: HTMLElement;
  private boxes = new Map<BoxName, Box>();
  private changed: (() => void) | null = null;

  constructor() {
    this.element = el(`<div class="editor" data-testid="editor"></div>`);
    for (const spec of BOXES) {
      const section = el(`
        <div class="editor-box" data-box="${spec.name}">
          <label for="box-${spec.name}">${spec.label}</label>
          <div class="box-body">
            <div class="gutter" aria-hidden="true"></div>
            <textarea id="box-${spec.name}" data-testid="box-${spec.name}"
                      rows="${spec.rows}" spellcheck="false"></textarea>
          </div>
          <div class="box-diagnostics" data-testid="diags-${spec.name}"></div>
        </div>`);
      const textarea = section.querySelector("textarea") as HTMLTextAreaElement;
      const gutter = section.querySelector(".gutter") as HTMLElement;
      const diagHost = section.querySelector(".box-diagnostics") as HTMLElement;
      const box: Box = { textarea, gutter, diagHost, marks: new Map() };
      textarea.addEventListener("input", () => {
        this.refreshGutter(box);
        this.changed?.();
      });
      textarea.addEventListener("scroll", () => {
        gutter.scrollTop = textarea.scrollTop;
      });
      this.boxes.set(spec.name, box);
      this.element.appendChild(section);
      this.refreshGutter(box);
    }
  }

  onChange(cb: () => void): void {
    this.changed = cb;
  }

  submission(): Submission {
    return {
      sorts: this.value("sorts"),
      vocabulary: this.value("vocabulary"),
      constraints: this.value("constraints"),
    };
  }

  setSubmission(sub: Submission): void {
    this.setValue("sorts", sub.sorts);
    this.setValue("vocabulary", sub.vocabulary);
    this.setValue("constraints", sub.constraints);
  }

  value(name: BoxName): string {
    return this.box(name).textarea.value;
  }

  setValue(name: BoxName, text: string): void {
    const box = this.box(name);
    box.textarea.value = text;
    this.refreshGutter(box);
  }

  /** Tag gutter lines with a css class, e.g. the conflict core. */
  markLines(name: BoxName, lines: number[], cls: string): void {
    const box = this.box(name);
    for (const n of lines) box.marks.set(n, cls);
    this.refreshGutter(box);
  }

  markedLines(name: BoxName): number[] {
    return [...this.box(name).marks.keys()].sort((a, b) => a - b);
  }

  clearMarks(): void {
    for (const box of this.boxes.values()) {
      box.marks.clear();
      this.refreshGutter(box);
    }
  }

  /** Show error/warning blocks under the box each one points into. */
  setDiagnostics(items: Diagnostic[]): void {
    this.clearDiagnostics();
    const sub = this.submission();
    for (const d of items) {
      const loc = locateLine(d.line, sub);
      const host = loc ? this.box(loc.box).diagHost
                       : this.box("constraints").diagHost;
      host.appendChild(diagnosticBlock(d, loc));
      if (loc) {
        this.markLines(loc.box, [loc.boxLine],
                       d.severity === "error" ? "line-error" : "line-warning");
      }
    }
  }

  clearDiagnostics(): void {
    for (const box of this.boxes.values()) box.diagHost.innerHTML = "";
    this.clearMarks();
  }

  private box(name: BoxName): Box {
    const box = this.boxes.get(name);
    if (!box) throw new Error(`no editor box ${name}`);
    return box;
  }

  private refreshGutter(box: Box): void {
    const count = Math.max(1, box.textarea.value.split("\n").length);
    const cells: string[] = [];
    for (let n = 1; n <= count; n++) {
      const mark = box.marks.get(n);
      cells.push(`<span class="ln${mark ? " " + mark : ""}" data-line="${n}">` +
                 `${n}</span>`);
    }
    box.gutter.innerHTML = cells.join("");
  }
}
