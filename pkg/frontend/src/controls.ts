// Search-panel state and its projection onto the /select request schema.
//
// The serialized body must be byte-equal to the server's own canonical
// projection of the same configuration: keys in catalog order, parameters
// in catalog order, compact JSON. That keeps golden request fixtures and
// shareable links stable.

import type {
  Catalog,
  ConfigDoc,
  CriterionSetting,
  CriterionSpec,
  Mode,
  Query,
  SelectRequest,
} from "./types.js";

export const LEVELS = ["A1", "A2", "B1", "B2", "C1"] as const;
export const MATCH_KINDS = ["wordform", "lemma", "pos_pattern"] as const;

export interface ControlState {
  profile: string;
  term: string;
  matchKind: string;
  pos: string | null;
  targetLevel: string;
  maxCandidates: number;
  retainSuboptimal: boolean;
  modes: Record<string, Mode>;
  params: Record<string, Record<string, unknown>>;
}

export interface Blocked {
  ok: false;
  reason: string;
}

export interface Applied {
  ok: true;
  state: ControlState;
}

function defaultParams(spec: CriterionSpec): Record<string, unknown> {
  const out: Record<string, unknown> = {};
  for (const p of spec.params) out[p.name] = p.default;
  return out;
}

export function initialState(catalog: Catalog, profile = "paper_eval"): ControlState {
  const profileModes = catalog.profiles[profile];
  if (!profileModes) throw new Error(`unknown profile ${profile}`);
  const modes: Record<string, Mode> = {};
  const params: Record<string, Record<string, unknown>> = {};
  for (const spec of catalog.criteria) {
    modes[spec.id] = profileModes[spec.id] ?? "off";
    params[spec.id] = defaultParams(spec);
  }
  return {
    profile,
    term: "",
    matchKind: "lemma",
    pos: null,
    targetLevel: "B1",
    maxCandidates: 300,
    retainSuboptimal: false,
    modes,
    params,
  };
}

export function setMode(
  state: ControlState,
  catalog: Catalog,
  id: string,
  mode: Mode,
): Applied | Blocked {
  const spec = catalog.criteria.find((c) => c.id === id);
  if (!spec) return { ok: false, reason: `unknown criterion ${id}` };
  if (!spec.modes.includes(mode)) {
    return {
      ok: false,
      reason: spec.binary
        ? `${id} is a yes/no criterion: it can exclude sentences but has no magnitude to rank by (allowed: ${spec.modes.join(", ")})`
        : `${id} does not allow mode ${mode}`,
    };
  }
  return { ok: true, state: { ...state, modes: { ...state.modes, [id]: mode } } };
}

export function setParam(
  state: ControlState,
  catalog: Catalog,
  id: string,
  name: string,
  value: unknown,
): Applied | Blocked {
  const spec = catalog.criteria.find((c) => c.id === id);
  const pspec = spec?.params.find((p) => p.name === name);
  if (!spec || !pspec) return { ok: false, reason: `unknown parameter ${id}.${name}` };
  if (pspec.type === "number" && typeof value !== "number") {
    return { ok: false, reason: `${id}.${name} must be a number` };
  }
  if (pspec.type === "boolean" && typeof value !== "boolean") {
    return { ok: false, reason: `${id}.${name} must be a boolean` };
  }
  if (pspec.type === "array" && !Array.isArray(value)) {
    return { ok: false, reason: `${id}.${name} must be a list` };
  }
  return {
    ok: true,
    state: {
      ...state,
      params: { ...state.params, [id]: { ...state.params[id], [name]: value } },
    },
  };
}

export function canSubmit(state: ControlState): boolean {
  return state.term.trim().length > 0;
}

function buildQuery(state: ControlState): Query {
  return {
    term: state.term,
    match_kind: state.matchKind,
    pos: state.pos,
    target_level: state.targetLevel,
    max_candidates: state.maxCandidates,
  };
}

export function buildConfig(state: ControlState, catalog: Catalog): ConfigDoc {
  const criteria: Record<string, CriterionSetting> = {};
  for (const spec of catalog.criteria) {
    const params: Record<string, unknown> = {};
    for (const p of spec.params) {
      const held = state.params[spec.id] ?? {};
      params[p.name] = p.name in held ? held[p.name] : p.default;
    }
    criteria[spec.id] = { mode: state.modes[spec.id] ?? "off", params };
  }
  return {
    query: buildQuery(state),
    retain_suboptimal: state.retainSuboptimal,
    criteria,
  };
}

export function buildSelectBody(state: ControlState, catalog: Catalog): SelectRequest {
  return { query: buildQuery(state), config: buildConfig(state, catalog) };
}

export function serializeBody(body: SelectRequest): string {
  return JSON.stringify(body);
}

// Shareable links: everything needed to rebuild the panel lives in the
// URL hash; results are re-fetched from the server.
export function encodeStateToHash(state: ControlState, catalog: Catalog): string {
  const profileModes = catalog.profiles[state.profile] ?? {};
  const modeDiff: Record<string, Mode> = {};
  for (const [id, mode] of Object.entries(state.modes)) {
    if ((profileModes[id] ?? "off") !== mode) modeDiff[id] = mode;
  }
  const paramDiff: Record<string, Record<string, unknown>> = {};
  for (const spec of catalog.criteria) {
    const held = state.params[spec.id] ?? {};
    const diff: Record<string, unknown> = {};
    for (const p of spec.params) {
      if (p.name in held && JSON.stringify(held[p.name]) !== JSON.stringify(p.default)) {
        diff[p.name] = held[p.name];
      }
    }
    if (Object.keys(diff).length) paramDiff[spec.id] = diff;
  }
  const doc = {
    p: state.profile,
    t: state.term,
    k: state.matchKind,
    g: state.pos,
    l: state.targetLevel,
    n: state.maxCandidates,
    r: state.retainSuboptimal,
    m: modeDiff,
    a: paramDiff,
  };
  return encodeURIComponent(JSON.stringify(doc));
}

export function decodeStateFromHash(hash: string, catalog: Catalog): ControlState {
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  if (!raw) return initialState(catalog);
  const doc = JSON.parse(decodeURIComponent(raw));
  let state = initialState(catalog, doc.p ?? "paper_eval");
  state = {
    ...state,
    term: doc.t ?? "",
    matchKind: doc.k ?? "lemma",
    pos: doc.g ?? null,
    targetLevel: doc.l ?? "B1",
    maxCandidates: doc.n ?? 300,
    retainSuboptimal: doc.r ?? false,
  };
  for (const [id, mode] of Object.entries(doc.m ?? {})) {
    const applied = setMode(state, catalog, id, mode as Mode);
    if (applied.ok) state = applied.state;
  }
  for (const [id, params] of Object.entries(doc.a ?? {})) {
    for (const [name, value] of Object.entries(params as Record<string, unknown>)) {
      const applied = setParam(state, catalog, id, name, value);
      if (applied.ok) state = applied.state;
    }
  }
  return state;
}
