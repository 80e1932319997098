/** Wire types for the /v1 REST API. */

export type FieldName =
  | "Id"
  | "ChildId"
  | "Command"
  | "SourceCode"
  | "SourceTheory"
  | "SourceTheoryFacet"
  | "StartLine"
  | "Kind"
  | "Name"
  | "NameFacet"
  | "ConstantType"
  | "ConstantTypeFacet"
  | "Uses";

export type Filter =
  | { type: "Term"; value: string }
  | { type: "Exact"; value: string }
  | { type: "InRange"; lo: number; hi: number }
  | { type: "Not"; filter: Filter }
  | { type: "And"; filters: Filter[] }
  | { type: "Or"; filters: Filter[] }
  | { type: "InResult"; extractField: FieldName; subQuery: Clause[] };

export interface Clause {
  field: FieldName;
  filter: Filter;
}

export interface SearchRequest {
  clauses: Clause[];
  facetFields: FieldName[];
  offset: number;
  limit: number;
  slop?: number;
}

export interface FacetValue {
  value: string;
  count: number;
}

export interface FacetResult {
  values: FacetValue[];
  truncated: boolean;
}

export type EntityKind = "Constant" | "Fact" | "Type";

export interface EntityBrief {
  childId: string;
  kind: EntityKind;
  name: string;
  constType?: string;
}

export interface ResultBlock {
  blockId: string;
  score: number;
  theory: string;
  startLine: number;
  command: string;
  sourceCode: string;
  entities: EntityBrief[];
  matchedEntityIds: string[];
}

export interface SearchResponse {
  total: number;
  offset: number;
  limit: number;
  results: ResultBlock[];
  facets: Record<string, FacetResult>;
}
