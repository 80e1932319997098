import { SearchClient } from "./api.js";
import { App } from "./app.js";

const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? "http://127.0.0.1:8600";

// The api parameter is deployment config, not search state; keep it while
// the state codec rewrites the rest of the query string.
const nav = {
  get: () => window.location.search,
  set: (query: string) => {
    const next = new URLSearchParams(query);
    const api = new URLSearchParams(window.location.search).get("api");
    if (api) next.set("api", api);
    const qs = next.toString();
    window.history.replaceState(null, "", window.location.pathname + (qs ? `?${qs}` : ""));
  },
};

const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");
const app = new App(root, new SearchClient(apiBase), nav);
void app.init();
