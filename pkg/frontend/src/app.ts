/**
 * Single-page drill-down search UI.
 *
 * Layout: a main search bar feeding the source-code field, a field-scoped
 * filter row, the active filter chips, a facet rail on the left, and result
 * cards with entity badges and a "used by" pivot per entity. Every state
 * change reissues the search and rewrites the URL, so the current view is
 * always shareable. Responses arriving out of order are dropped via a
 * request sequence number; failed requests surface a banner but keep the
 * previous results on screen.
 */

import { ApiError } from "./api.js";
import { describeFilter, termClause, usedByPivotClause } from "./filters.js";
import {
  FACET_FIELDS,
  UiState,
  addClause,
  buildFacetPanelRequest,
  buildRequest,
  clearAll,
  decodeState,
  emptyState,
  encodeState,
  removeClause,
  replaceWithPivot,
  setOffset,
  toggleFacet,
} from "./state.js";
import type { FacetResult, FieldName, SearchRequest, SearchResponse } from "./types.js";

export interface Navigation {
  get(): string;
  set(query: string): void;
}

/** The slice of the API client the app needs; eases test doubles. */
export interface SearchApi {
  search(request: SearchRequest): Promise<SearchResponse>;
}

const SCOPED_FIELDS: FieldName[] = [
  "Name",
  "ConstantType",
  "SourceTheory",
  "Command",
  "SourceCode",
];

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export class App {
  state: UiState = emptyState();
  lastResponse: SearchResponse | null = null;
  lastError: string | null = null;
  loading = false;
  private seq = 0;
  // counts for panels whose own selection is excluded (multi-select facets)
  private facetOverrides: Partial<Record<FieldName, FacetResult>> = {};

  constructor(
    private readonly root: HTMLElement,
    private readonly client: SearchApi,
    private readonly nav: Navigation,
  ) {}

  async init(): Promise<void> {
    this.state = decodeState(this.nav.get());
    await this.submit();
  }

  private async apply(next: UiState): Promise<void> {
    this.state = next;
    await this.submit();
  }

  async submit(): Promise<void> {
    const mySeq = ++this.seq;
    this.loading = true;
    this.render();
    try {
      const response = await this.client.search(buildRequest(this.state));
      if (mySeq !== this.seq) return; // a newer search superseded this one
      const overrides: Partial<Record<FieldName, FacetResult>> = {};
      for (const field of FACET_FIELDS) {
        if ((this.state.facets[field] ?? []).length === 0) continue;
        const panel = await this.client.search(buildFacetPanelRequest(this.state, field));
        if (mySeq !== this.seq) return;
        const facet = panel.facets[field];
        if (facet) overrides[field] = facet;
      }
      this.lastResponse = response;
      this.facetOverrides = overrides;
      this.lastError = null;
    } catch (err) {
      if (mySeq !== this.seq) return;
      this.lastError = err instanceof ApiError ? err.message : String(err);
    } finally {
      if (mySeq === this.seq) {
        this.loading = false;
        this.nav.set(encodeState(this.state));
        this.render();
      }
    }
  }

  render(): void {
    const r = this.lastResponse;
    this.root.innerHTML = `
      <header class="bar">
        <form data-testid="main-form">
          <input data-testid="main-input" placeholder="Search source code" />
          <button data-testid="main-submit" type="submit">Search</button>
        </form>
        <form data-testid="scoped-form">
          <select data-testid="scoped-field">
            ${SCOPED_FIELDS.map((f) => `<option value="${f}">${f}</option>`).join("")}
          </select>
          <input data-testid="scoped-input" placeholder="Filter value" />
          <button data-testid="scoped-add" type="submit">Add filter</button>
        </form>
      </header>
      <div data-testid="chips" class="chips">${this.renderChips()}</div>
      ${this.lastError ? `<div data-testid="error" class="error">${esc(this.lastError)}</div>` : ""}
      <div data-testid="status">${this.loading ? "loading" : "ready"}</div>
      <main class="layout">
        <aside data-testid="facet-rail">${r ? this.renderFacets(r) : ""}</aside>
        <section>
          <div data-testid="total">${r ? `${r.total} results` : ""}</div>
          <div data-testid="results">${r ? this.renderResults(r) : ""}</div>
          <nav class="pager">
            <button data-testid="prev">Previous</button>
            <span data-testid="page-info">${this.pageInfo()}</span>
            <button data-testid="next">Next</button>
          </nav>
        </section>
      </main>`;
    this.bind();
  }

  private pageInfo(): string {
    const r = this.lastResponse;
    if (!r) return "";
    const page = Math.floor(r.offset / r.limit) + 1;
    const pages = Math.max(1, Math.ceil(r.total / r.limit));
    return `page ${page} of ${pages}`;
  }

  private renderChips(): string {
    const chips: string[] = this.state.clauses.map(
      (clause, i) => `
        <span class="chip" data-testid="chip">
          ${esc(clause.field)}: ${esc(describeFilter(clause.filter))}
          <button data-chip-remove="${i}" title="remove">x</button>
        </span>`,
    );
    for (const field of FACET_FIELDS) {
      for (const value of this.state.facets[field] ?? []) {
        chips.push(`
          <span class="chip" data-testid="chip">
            ${esc(field)}: ${esc(value)}
            <button data-facet-remove="${esc(field)}" data-value="${esc(value)}"
                    title="remove">x</button>
          </span>`);
      }
    }
    if (chips.length === 0) return `<span class="hint">no active filters</span>`;
    chips.push(`<button data-testid="clear-all">clear all</button>`);
    return chips.join("");
  }

  private renderFacets(r: SearchResponse): string {
    return FACET_FIELDS.map((field) => {
      const facet = this.facetOverrides[field] ?? r.facets[field];
      if (!facet || facet.values.length === 0) return "";
      const selected = this.state.facets[field] ?? [];
      const rows = facet.values
        .map((v) => {
          const active = selected.includes(v.value) ? " selected" : "";
          return `
            <li>
              <button class="facet-value${active}" data-facet-field="${esc(field)}"
                      data-facet-value="${esc(v.value)}">
                <span class="value">${esc(v.value)}</span>
                <span class="count" data-facet-count="${esc(field)}:${esc(v.value)}">${v.count}</span>
              </button>
            </li>`;
        })
        .join("");
      const more = facet.truncated ? `<li class="hint">more values not shown</li>` : "";
      return `
        <section class="facet-panel" data-facet="${esc(field)}">
          <h3>${esc(field)}</h3>
          <ul class="facet-scroll">${rows}${more}</ul>
        </section>`;
    }).join("");
  }

  private renderResults(r: SearchResponse): string {
    if (r.results.length === 0) {
      return `<div data-testid="empty" class="hint">no matching blocks</div>`;
    }
    return r.results
      .map((block) => {
        const matched = new Set(block.matchedEntityIds);
        const badges = block.entities
          .map((e) => {
            const hit = matched.has(e.childId) ? " matched" : "";
            const type = e.constType ? ` title="${esc(e.constType)}"` : "";
            return `
              <span class="badge${hit}"${type} data-entity="${esc(e.childId)}">
                ${esc(e.kind)} ${esc(e.name)}
                <button data-used-by="${esc(e.childId)}">used by</button>
              </span>`;
          })
          .join("");
        return `
          <article class="card" data-testid="result" data-block="${esc(block.blockId)}">
            <header>
              <span class="theory">${esc(block.theory)}</span>
              <span class="command">${esc(block.command)}</span>
              <span class="line">line ${block.startLine}</span>
            </header>
            <pre class="source">${esc(block.sourceCode)}</pre>
            <footer>${badges}</footer>
          </article>`;
      })
      .join("");
  }

  private bind(): void {
    const q = <T extends Element>(sel: string) => this.root.querySelector(sel) as T | null;

    q<HTMLFormElement>("[data-testid=main-form]")?.addEventListener("submit", (ev) => {
      ev.preventDefault();
      const input = q<HTMLInputElement>("[data-testid=main-input]");
      const value = input?.value.trim() ?? "";
      if (value) void this.apply(addClause(this.state, termClause("SourceCode", value)));
    });

    q<HTMLFormElement>("[data-testid=scoped-form]")?.addEventListener("submit", (ev) => {
      ev.preventDefault();
      const field = q<HTMLSelectElement>("[data-testid=scoped-field]")?.value as FieldName;
      const value = q<HTMLInputElement>("[data-testid=scoped-input]")?.value.trim() ?? "";
      if (value) void this.apply(addClause(this.state, termClause(field, value)));
    });

    for (const el of this.root.querySelectorAll("[data-chip-remove]")) {
      el.addEventListener("click", () => {
        const index = Number((el as HTMLElement).getAttribute("data-chip-remove"));
        void this.apply(removeClause(this.state, index));
      });
    }
    for (const el of this.root.querySelectorAll("[data-facet-remove]")) {
      el.addEventListener("click", () => {
        const field = (el as HTMLElement).getAttribute("data-facet-remove") as FieldName;
        const value = (el as HTMLElement).getAttribute("data-value") ?? "";
        void this.apply(toggleFacet(this.state, field, value));
      });
    }
    q("[data-testid=clear-all]")?.addEventListener("click", () => {
      void this.apply(clearAll(this.state));
    });

    for (const el of this.root.querySelectorAll("[data-facet-field]")) {
      el.addEventListener("click", () => {
        const field = (el as HTMLElement).getAttribute("data-facet-field") as FieldName;
        const value = (el as HTMLElement).getAttribute("data-facet-value") ?? "";
        void this.apply(toggleFacet(this.state, field, value));
      });
    }

    for (const el of this.root.querySelectorAll("[data-used-by]")) {
      el.addEventListener("click", () => {
        const entityId = (el as HTMLElement).getAttribute("data-used-by") ?? "";
        void this.apply(replaceWithPivot(this.state, usedByPivotClause(entityId)));
      });
    }

    q("[data-testid=prev]")?.addEventListener("click", () => {
      void this.apply(setOffset(this.state, this.state.offset - this.state.limit));
    });
    q("[data-testid=next]")?.addEventListener("click", () => {
      void this.apply(setOffset(this.state, this.state.offset + this.state.limit));
    });
  }
}
