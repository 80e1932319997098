/**
 * Search state and its lossless URL encoding.
 *
 * The whole state travels in the `s` query parameter as canonical JSON, so
 * any search is shareable by copying the address bar and reloading a URL
 * reproduces the exact state. Facet selections are kept apart from free
 * clauses so panels can toggle values without touching user-entered chips.
 */

import { facetSelectionClause } from "./filters.js";
import type { Clause, FieldName, SearchRequest } from "./types.js";

export const FACET_FIELDS: FieldName[] = [
  "Kind",
  "Command",
  "SourceTheoryFacet",
  "ConstantTypeFacet",
  "NameFacet",
];

export const DEFAULT_LIMIT = 10;

export interface UiState {
  clauses: Clause[];
  facets: Partial<Record<FieldName, string[]>>;
  offset: number;
  limit: number;
}

export function emptyState(): UiState {
  return { clauses: [], facets: {}, offset: 0, limit: DEFAULT_LIMIT };
}

function canonical(state: UiState): UiState {
  const facets: UiState["facets"] = {};
  for (const field of FACET_FIELDS) {
    const values = state.facets[field];
    if (values && values.length > 0) facets[field] = [...values];
  }
  return {
    clauses: state.clauses,
    facets,
    offset: state.offset,
    limit: state.limit,
  };
}

export function encodeState(state: UiState): string {
  const c = canonical(state);
  if (
    c.clauses.length === 0 &&
    Object.keys(c.facets).length === 0 &&
    c.offset === 0 &&
    c.limit === DEFAULT_LIMIT
  ) {
    return "";
  }
  return "?s=" + encodeURIComponent(JSON.stringify(c));
}

export function decodeState(search: string): UiState {
  const params = new URLSearchParams(search);
  const raw = params.get("s");
  if (!raw) return emptyState();
  try {
    const parsed = JSON.parse(raw) as UiState;
    return canonical({
      clauses: parsed.clauses ?? [],
      facets: parsed.facets ?? {},
      offset: parsed.offset ?? 0,
      limit: parsed.limit ?? DEFAULT_LIMIT,
    });
  } catch {
    return emptyState();
  }
}

export function buildRequest(state: UiState): SearchRequest {
  const clauses = [...state.clauses];
  for (const field of FACET_FIELDS) {
    const clause = facetSelectionClause(field, state.facets[field] ?? []);
    if (clause) clauses.push(clause);
  }
  return {
    clauses,
    facetFields: FACET_FIELDS,
    offset: state.offset,
    limit: state.limit,
  };
}

/**
 * Request used to refresh one facet panel that has active selections: the
 * panel's own restriction is left out so sibling values stay clickable for
 * multi-select, and only that facet is requested.
 */
export function buildFacetPanelRequest(state: UiState, panel: FieldName): SearchRequest {
  const clauses = [...state.clauses];
  for (const field of FACET_FIELDS) {
    if (field === panel) continue;
    const clause = facetSelectionClause(field, state.facets[field] ?? []);
    if (clause) clauses.push(clause);
  }
  return { clauses, facetFields: [panel], offset: 0, limit: 1 };
}

// --- state transitions (all reset paging, except setOffset itself) ---

export function addClause(state: UiState, clause: Clause): UiState {
  return { ...state, clauses: [...state.clauses, clause], offset: 0 };
}

export function removeClause(state: UiState, index: number): UiState {
  const clauses = state.clauses.filter((_, i) => i !== index);
  return { ...state, clauses, offset: 0 };
}

export function clearAll(state: UiState): UiState {
  return { ...emptyState(), limit: state.limit };
}

export function toggleFacet(state: UiState, field: FieldName, value: string): UiState {
  const current = state.facets[field] ?? [];
  const values = current.includes(value)
    ? current.filter((v) => v !== value)
    : [...current, value];
  return { ...state, facets: { ...state.facets, [field]: values }, offset: 0 };
}

export function replaceWithPivot(state: UiState, pivot: Clause): UiState {
  return { ...emptyState(), limit: state.limit, clauses: [pivot] };
}

export function setOffset(state: UiState, offset: number): UiState {
  return { ...state, offset: Math.max(0, offset) };
}
