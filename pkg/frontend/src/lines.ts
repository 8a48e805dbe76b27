// Line arithmetic for the three editor boxes.  The service parses the
// boxes joined under literal section headers; diagnostics carry line
// numbers in that joined text.  These helpers map them back onto the box
// the user is looking at.  The check endpoint returns the constraints
// offset it used, so tests can hold this mirror against the service.

import type { Submission } from "./api.js";

function bodyLineCount(text: string): number {
  const body = text.replace(/\n+$/, "");
  return body === "" ? 0 : body.split("\n").length;
}

export interface BoxOffsets {
  // absolute line number of each section header; box line k sits at
  // header + k
  sorts: number;
  vocabulary: number;
  constraints: number;
}

export function boxOffsets(sub: Submission): BoxOffsets {
  const sorts = 1;
  const vocabulary = sorts + 1 + bodyLineCount(sub.sorts);
  const constraints = vocabulary + 1 + bodyLineCount(sub.vocabulary);
  return { sorts, vocabulary, constraints };
}

export type BoxName = "sorts" | "vocabulary" | "constraints";

export interface BoxLocation {
  box: BoxName;
  boxLine: number;
}

/** Map an absolute line from a diagnostic onto a box, or null when the
 * line falls on a section header (nothing user-written to point at). */
export function locateLine(absLine: number, sub: Submission): BoxLocation | null {
  const off = boxOffsets(sub);
  const spans: [BoxName, number, number][] = [
    ["sorts", off.sorts, bodyLineCount(sub.sorts)],
    ["vocabulary", off.vocabulary, bodyLineCount(sub.vocabulary)],
    ["constraints", off.constraints, Number.MAX_SAFE_INTEGER],
  ];
  for (const [box, header, count] of spans) {
    if (absLine > header && absLine <= header + count) {
      return { box, boxLine: absLine - header };
    }
  }
  return null;
}
