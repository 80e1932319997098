// @vitest-environment happy-dom
//
// Full-stack drill-down: builds the demo index, serves it with the real
// backend, and walks the bundled prime-number scenario using clicks and
// typing only. Rendered totals must equal what the API reports for the same
// request, and every intermediate state must survive a URL round-trip.
import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { SearchClient } from "../src/api.js";
import { App, Navigation } from "../src/app.js";
import { buildRequest, decodeState, encodeState } from "../src/state.js";

const HERE = path.dirname(fileURLToPath(import.meta.url));
const REPO_ROOT = path.resolve(HERE, "..", "..");
const DEMO_DUMP = path.join(REPO_ROOT, "src", "factsearch", "demo", "demo.jsonl");
const SCENARIO = path.join(REPO_ROOT, "src", "factsearch", "demo", "scenario.json");
const PORT = 18741;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;
let indexDir: string;

class FakeNav implements Navigation {
  query = "";
  get() {
    return this.query;
  }
  set(query: string) {
    this.query = query;
  }
}

async function flush() {
  for (let i = 0; i < 4; i++) {
    await new Promise((resolve) => setTimeout(resolve, 10));
  }
}

async function waitForApp(app: App) {
  for (let i = 0; i < 200; i++) {
    await flush();
    if (!app.loading) return;
  }
  throw new Error("app never settled");
}

beforeAll(async () => {
  indexDir = mkdtempSync(path.join(tmpdir(), "factsearch-e2e-"));
  const build = spawnSync("python3", ["-m", "factsearch", "index", DEMO_DUMP, indexDir], {
    cwd: REPO_ROOT,
    encoding: "utf-8",
  });
  if (build.status !== 0) {
    throw new Error(`index build failed: ${build.stderr}`);
  }
  // happy-dom enforces the same-origin policy, so the backend must allow
  // the test page's origin; this exercises the real CORS configuration
  server = spawn(
    "python3",
    ["-m", "factsearch", "serve", indexDir, "--port", String(PORT),
     "--cors-origin", "http://localhost:3000"],
    { cwd: REPO_ROOT, stdio: "ignore" },
  );
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      const resp = await fetch(`${BASE}/v1/blocks/b-primes-01`);
      if (resp.ok) break;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error("backend never came up");
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
}, 60_000);

afterAll(() => {
  server?.kill();
  rmSync(indexDir, { recursive: true, force: true });
});

function el<T extends Element>(root: HTMLElement, selector: string): T {
  const found = root.querySelector(selector);
  if (!found) throw new Error(`missing element ${selector}`);
  return found as T;
}

function renderedTotal(root: HTMLElement): number {
  const label = el<HTMLElement>(root, "[data-testid=total]").textContent ?? "";
  const match = /^(\d+) results/.exec(label.trim());
  if (!match) throw new Error(`unparseable total label: ${label}`);
  return Number(match[1]);
}

async function apiTotalFor(app: App): Promise<number> {
  const client = new SearchClient(BASE);
  const response = await client.search(buildRequest(app.state));
  return response.total;
}

async function checkStep(app: App, root: HTMLElement, nav: FakeNav, expected: number) {
  const total = renderedTotal(root);
  expect(total).toBe(expected);
  expect(await apiTotalFor(app)).toBe(total);
  expect(encodeState(decodeState(nav.query))).toBe(nav.query);
  expect(decodeState(nav.query)).toEqual(
    JSON.parse(JSON.stringify({ ...app.state })),
  );
}

describe("drill-down scenario through the UI", () => {
  it("replays the prime narrative with clicks and typing only", async () => {
    const scenario = JSON.parse(readFileSync(SCENARIO, "utf-8")) as {
      steps: { name: string; expectedTotal: number }[];
      usedBy: { expectedTotal: number; expectedBlockIds: string[] };
    };
    const totals = scenario.steps.map((s) => s.expectedTotal);

    document.body.innerHTML = '<div id="app"></div>';
    const root = document.getElementById("app") as HTMLElement;
    const nav = new FakeNav();
    const app = new App(root, new SearchClient(BASE), nav);
    await app.init();
    await waitForApp(app);
    expect(renderedTotal(root)).toBe(40); // match-all landing state

    // step 1: type 'prime' into the main search bar
    el<HTMLInputElement>(root, "[data-testid=main-input]").value = "prime";
    el<HTMLElement>(root, "[data-testid=main-form]").dispatchEvent(
      new Event("submit", { bubbles: true, cancelable: true }),
    );
    await waitForApp(app);
    await checkStep(app, root, nav, totals[0]!);

    // step 2: click Constant in the Kind facet panel
    el<HTMLElement>(
      root, "[data-facet-field='Kind'][data-facet-value='Constant']",
    ).click();
    await waitForApp(app);
    await checkStep(app, root, nav, totals[1]!);

    // step 3: scoped filter on entity names
    el<HTMLSelectElement>(root, "[data-testid=scoped-field]").value = "Name";
    el<HTMLInputElement>(root, "[data-testid=scoped-input]").value = "prime";
    el<HTMLElement>(root, "[data-testid=scoped-form]").dispatchEvent(
      new Event("submit", { bubbles: true, cancelable: true }),
    );
    await waitForApp(app);
    await checkStep(app, root, nav, totals[2]!);

    // step 4: scoped filter on the constant type
    el<HTMLSelectElement>(root, "[data-testid=scoped-field]").value = "ConstantType";
    el<HTMLInputElement>(root, "[data-testid=scoped-input]").value = "nat bool";
    el<HTMLElement>(root, "[data-testid=scoped-form]").dispatchEvent(
      new Event("submit", { bubbles: true, cancelable: true }),
    );
    await waitForApp(app);
    await checkStep(app, root, nav, totals[3]!);

    // step 5: multi-select commands in the Command facet
    el<HTMLElement>(
      root, "[data-facet-field='Command'][data-facet-value='definition']",
    ).click();
    await waitForApp(app);
    el<HTMLElement>(
      root, "[data-facet-field='Command'][data-facet-value='inductive']",
    ).click();
    await waitForApp(app);
    await checkStep(app, root, nav, totals[4]!);

    // totals were non-increasing and the seeded definition is on screen
    for (let i = 1; i < totals.length; i++) {
      expect(totals[i]!).toBeLessThanOrEqual(totals[i - 1]!);
    }
    expect(root.querySelector("[data-block='b-primes-01']")).toBeTruthy();

    // pivot: who uses the found definition, narrowed to facts
    el<HTMLElement>(root, "[data-used-by='e-primes-prime']").click();
    await waitForApp(app);
    el<HTMLElement>(
      root, "[data-facet-field='Kind'][data-facet-value='Fact']",
    ).click();
    await waitForApp(app);
    await checkStep(app, root, nav, scenario.usedBy.expectedTotal);
    const shown = [...root.querySelectorAll("[data-block]")].map((c) =>
      c.getAttribute("data-block"),
    );
    for (const id of shown) {
      expect(scenario.usedBy.expectedBlockIds).toContain(id);
    }
  }, 120_000);

  it("removing every chip restores the match-all landing state", async () => {
    document.body.innerHTML = '<div id="app"></div>';
    const root = document.getElementById("app") as HTMLElement;
    const nav = new FakeNav();
    const app = new App(root, new SearchClient(BASE), nav);
    await app.init();
    await waitForApp(app);

    el<HTMLInputElement>(root, "[data-testid=main-input]").value = "prime";
    el<HTMLElement>(root, "[data-testid=main-form]").dispatchEvent(
      new Event("submit", { bubbles: true, cancelable: true }),
    );
    await waitForApp(app);
    expect(renderedTotal(root)).toBe(17);

    el<HTMLElement>(root, "[data-chip-remove='0']").click();
    await waitForApp(app);
    expect(renderedTotal(root)).toBe(40);
    expect(nav.query).toBe("");
  }, 60_000);

  it("reloading a shared url reproduces the same results", async () => {
    document.body.innerHTML = '<div id="app"></div>';
    const root = document.getElementById("app") as HTMLElement;
    const nav = new FakeNav();
    const app = new App(root, new SearchClient(BASE), nav);
    await app.init();
    await waitForApp(app);
    el<HTMLInputElement>(root, "[data-testid=main-input]").value = "prime";
    el<HTMLElement>(root, "[data-testid=main-form]").dispatchEvent(
      new Event("submit", { bubbles: true, cancelable: true }),
    );
    await waitForApp(app);
    const sharedUrl = nav.query;
    const total = renderedTotal(root);

    document.body.innerHTML = '<div id="app"></div>';
    const root2 = document.getElementById("app") as HTMLElement;
    const nav2 = new FakeNav();
    nav2.query = sharedUrl;
    const app2 = new App(root2, new SearchClient(BASE), nav2);
    await app2.init();
    await waitForApp(app2);
    expect(renderedTotal(root2)).toBe(total);
    expect(nav2.query).toBe(sharedUrl);
  }, 60_000);
});
