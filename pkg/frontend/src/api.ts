// API client: thin typed fetch wrappers over the service's /api/* routes.
// Every number and line reference the UI displays comes out of these
// payloads; nothing is solved or re-derived client side.

export interface Diagnostic {
  severity: string;
  line: number;
  column: number;
  offendingText: string | null;
  message: string;
  detail: string[];
  partialTree: string | null;
  hints: string[];
  rendered: string;
}

export interface ModelPayload {
  sizes: Record<string, number>;
  names: Record<string, string>;
  functions: Record<string, { args: string[]; value: string }[]>;
  predicates: Record<string, string[][]>;
}

export interface SolveStats {
  runs: number;
  conflicts: number;
  wallMs: number;
  groundSizes: { sizes: string; vars: number; clauses: number }[];
  bounds: Record<string, number[]>;
}

export interface CheckResponse {
  ok: boolean;
  diagnostics: Diagnostic[];
  warnings: Diagnostic[];
  constraintsLineOffset: number;
}

export interface SolveResponse {
  kind: string;
  unique: boolean;
  exhausted: boolean;
  complete: boolean;
  searched: string[];
  models: ModelPayload[];
  diagnostics: Diagnostic[];
  warnings: Diagnostic[];
  stats: SolveStats;
}

// One constraint as the diagnosis endpoints point at it.  boxLine is
// 1-based within the constraints box; text omits the closing period.
export interface ConstraintRef {
  index: number;
  line: number;
  boxLine: number;
  column: number;
  text: string;
}

export type DiagnoseResponse =
  | { kind: "high-level-mus"; sizes: Record<string, number>;
      minimal: boolean; constraints: ConstraintRef[] }
  | { kind: "approximate"; sizes: Record<string, number>; optimal: boolean;
      satisfiedCount: number; violated: ConstraintRef[]; model: ModelPayload }
  | { kind: "nothing-to-diagnose" }
  | { kind: "timeout" }
  | { kind: "input-errors"; diagnostics: Diagnostic[] };

export interface Submission {
  sorts: string;
  vocabulary: string;
  constraints: string;
}

export interface SolveOptions {
  maxModels?: number;
  deadlineSecs?: number;
  bounds?: Record<string, [number, number]>;
  symmetryBreaking?: boolean;
}

export interface PuzzleRow {
  id: string;
  title: string;
  level: string;
  expectedModels: number;
}

export interface PuzzleDetail extends PuzzleRow {
  statement: string;
  bounds: Record<string, number[]>;
  skeleton: Submission;
}

export interface SaveRecord {
  saveId: string;
  name: string;
  submission: Submission;
  createdAt: number;
  updatedAt: number;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

let base = "";

/** Point the client somewhere other than the serving origin. */
export function setApiBase(url: string): void {
  base = url.replace(/\/$/, "");
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const res = await fetch(base + path, {
    credentials: "include",
    ...init,
  });
  if (!res.ok) {
    let message = `${res.status} ${res.statusText}`;
    try {
      const body = await res.json();
      if (body && typeof body.error === "string") message = body.error;
    } catch {
      // non-JSON error body; the status line is all we have
    }
    throw new ApiError(res.status, message);
  }
  if (res.status === 204) return undefined as T;
  return res.json() as Promise<T>;
}

function post<T>(path: string, body: unknown, signal?: AbortSignal): Promise<T> {
  return request<T>(path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
    signal,
  });
}

export function check(sub: Submission, signal?: AbortSignal): Promise<CheckResponse> {
  return post("/api/check", sub, signal);
}

export function solve(sub: Submission, options: SolveOptions = {},
                      signal?: AbortSignal): Promise<SolveResponse> {
  return post("/api/solve", { ...sub, options }, signal);
}

export function diagnose(sub: Submission, kind: "mus" | "approx",
                         options: SolveOptions = {},
                         signal?: AbortSignal): Promise<DiagnoseResponse> {
  return post("/api/diagnose", { ...sub, kind, options }, signal);
}

export function listPuzzles(level?: string): Promise<{ puzzles: PuzzleRow[] }> {
  const q = level ? `?level=${encodeURIComponent(level)}` : "";
  return request(`/api/puzzles${q}`);
}

export function getPuzzle(id: string): Promise<PuzzleDetail> {
  return request(`/api/puzzles/${encodeURIComponent(id)}`);
}

export function listSaves(): Promise<{ saves: SaveRecord[] }> {
  return request("/api/saves");
}

export function getSave(id: string): Promise<SaveRecord> {
  return request(`/api/saves/${encodeURIComponent(id)}`);
}

export function createSave(name: string, sub: Submission): Promise<SaveRecord> {
  return post("/api/saves", { name, ...sub });
}

export function updateSave(id: string, name: string, sub: Submission,
                           updatedAt: number): Promise<SaveRecord> {
  return request(`/api/saves/${encodeURIComponent(id)}`, {
    method: "PUT",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ name, ...sub, updatedAt }),
  });
}

export function deleteSave(id: string): Promise<void> {
  return request(`/api/saves/${encodeURIComponent(id)}`, { method: "DELETE" });
}
