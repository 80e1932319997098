/** Clause constructors for the interactions the UI offers. */

import type { Clause, FieldName, Filter } from "./types.js";

/** Free-text search scoped to one field (main bar targets SourceCode). */
export function termClause(field: FieldName, value: string): Clause {
  return { field, filter: { type: "Term", value } };
}

/**
 * Clause for the current selections of one facet panel: a single value
 * filters directly, several become a disjunction.
 */
export function facetSelectionClause(
  field: FieldName,
  values: string[],
): Clause | null {
  if (values.length === 0) return null;
  const terms: Filter[] = values.map((v) => ({ type: "Term", value: v }));
  if (terms.length === 1) return { field, filter: terms[0]! };
  return { field, filter: { type: "Or", filters: terms } };
}

/**
 * "Used by" pivot: blocks whose entities reference the given entity. The
 * sub-query selects the entity itself; its child id is then matched against
 * the Uses field of every other entity.
 */
export function usedByPivotClause(entityId: string): Clause {
  return {
    field: "Uses",
    filter: {
      type: "InResult",
      extractField: "ChildId",
      subQuery: [{ field: "ChildId", filter: { type: "Term", value: entityId } }],
    },
  };
}

export function describeFilter(filter: Filter): string {
  switch (filter.type) {
    case "Term":
      return filter.value;
    case "Exact":
      return `"${filter.value}"`;
    case "InRange":
      return `${filter.lo}..${filter.hi}`;
    case "Not":
      return `not ${describeFilter(filter.filter)}`;
    case "And":
      return filter.filters.map(describeFilter).join(" & ");
    case "Or":
      return filter.filters.map(describeFilter).join(" | ");
    case "InResult":
      return `in-result(${filter.extractField})`;
  }
}
