// HTML builders for the results and diagnosis panes.  Pure functions
// from service payloads to elements; all text is escaped on the way in.

import type {
  ConstraintRef, Diagnostic, ModelPayload, SolveResponse, SolveStats,
} from "./api.js";
import type { BoxLocation } from "./lines.js";

export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function el(html: string): HTMLElement {
  const tpl = document.createElement("template");
  tpl.innerHTML = html.trim();
  return tpl.content.firstElementChild as HTMLElement;
}

/** One solved interpretation as a two column table. */
export function modelTable(model: ModelPayload, index: number): HTMLElement {
  const rows: string[] = [];
  const sizes = Object.entries(model.sizes)
    .map(([s, n]) => `${esc(s)}=${n}`).join(", ");
  for (const [name, value] of Object.entries(model.names)) {
    rows.push(`<tr><td>${esc(name)}</td><td>${esc(value)}</td></tr>`);
  }
  for (const [fn, entries] of Object.entries(model.functions)) {
    for (const e of entries) {
      rows.push(`<tr><td>${esc(fn)}(${e.args.map(esc).join(", ")})</td>` +
                `<td>${esc(e.value)}</td></tr>`);
    }
  }
  for (const [p, tuples] of Object.entries(model.predicates)) {
    for (const args of tuples) {
      rows.push(`<tr><td>${esc(p)}(${args.map(esc).join(", ")})</td>` +
                `<td>true</td></tr>`);
    }
  }
  if (!rows.length) rows.push(`<tr><td colspan="2">empty structure</td></tr>`);
  return el(`
    <table class="model-table" data-testid="model-table">
      <caption>model ${index + 1} <span class="sizes">(${sizes})</span></caption>
      ${rows.join("\n")}
    </table>`);
}

/** Uniqueness/outcome badge for a solve result. */
export function outcomeBadge(r: SolveResponse): HTMLElement {
  let cls = "badge";
  let text: string;
  if (r.kind === "solutions") {
    if (r.unique) {
      cls += " badge-unique";
      text = "unique";
    } else {
      cls += " badge-multiple";
      text = r.exhausted ? `not unique: ${r.models.length} models`
                         : `not unique: ${r.models.length}+ models`;
    }
  } else if (r.kind === "no-solution") {
    cls += " badge-unsat";
    text = r.complete ? "no solution" : "no solution found";
  } else if (r.kind === "timeout") {
    cls += " badge-timeout";
    text = "timed out";
  } else {
    cls += " badge-error";
    text = r.kind;
  }
  return el(`<span class="${cls}" data-testid="badge">${esc(text)}</span>`);
}

export function statsLine(stats: SolveStats, searched: string[]): HTMLElement {
  const bounds = Object.entries(stats.bounds)
    .map(([s, [lo, hi]]) => `${esc(s)} ${lo}..${hi}`).join(", ");
  const searchedNote = searched.length
    ? ` over ${searched.map(esc).join("; ")}` : "";
  return el(`
    <p class="stats" data-testid="stats">
      ${stats.runs} run${stats.runs === 1 ? "" : "s"},
      ${stats.conflicts} conflicts, ${stats.wallMs} ms,
      bounds ${bounds}${searchedNote}
    </p>`);
}

/** Diagnostic as a collapsed summary/detail block. */
export function diagnosticBlock(d: Diagnostic, loc: BoxLocation | null): HTMLElement {
  const where = loc ? `${loc.box} line ${loc.boxLine}` : `line ${d.line}`;
  const body = [d.rendered, ...d.detail, ...d.hints.map((h) => `hint: ${h}`)]
    .join("\n");
  return el(`
    <details class="diagnostic sev-${esc(d.severity)}" data-testid="diagnostic"
             data-line="${d.line}">
      <summary>${esc(where)}: ${esc(d.message)}</summary>
      <pre>${esc(body)}</pre>
    </details>`);
}

/** Constraint list for a diagnosis; refs in `struck` render crossed out. */
export function constraintList(refs: ConstraintRef[],
                               struck = false): HTMLElement {
  const items = refs.map((r) => {
    const text = `line ${r.boxLine}: ${esc(r.text)}.`;
    return `<li data-testid="${struck ? "violated" : "core"}-constraint"` +
           ` data-box-line="${r.boxLine}">` +
           (struck ? `<s>${text}</s>` : text) + `</li>`;
  });
  return el(`<ul class="constraint-list">${items.join("\n")}</ul>`);
}
