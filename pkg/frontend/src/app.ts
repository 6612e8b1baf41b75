import { ApiClient } from "./api";
import { decodeState, encodeState, PANELS, type PanelId, type ViewState } from "./state";
import { el, clear } from "./theme";
import { renderDataPanel, locateRow, type TableQuery } from "./panels/dataTable";
import { renderModelPanel } from "./panels/model";
import { renderGroupPanel, renderSubgroupPanel } from "./panels/overview";
import { renderIndividualPanel } from "./panels/individual";
import { renderWhatifPanel } from "./panels/whatif";
import { renderPreferencesPanel } from "./panels/preferences";
import { renderTeamPanel } from "./panels/team";
import type { InstanceRow, SchemaResponse } from "./types";

const PANEL_TITLES: Record<PanelId, string> = {
  data: "Data",
  model: "Model",
  group: "Group fairness",
  subgroup: "Subgroup fairness",
  individual: "Individual fairness",
  whatif: "What-if",
  preferences: "Preferences",
  team: "Team",
};

export class App {
  api: ApiClient;
  state: ViewState;
  schema: SchemaResponse;
  instanceById = new Map<number, InstanceRow>();
  tableQuery: TableQuery = { filter: [], sort: null };
  root: HTMLElement;
  panelHost!: HTMLElement;
  private pending: Array<Promise<unknown>> = [];

  constructor(root: HTMLElement, state: ViewState, schema: SchemaResponse) {
    this.root = root;
    this.state = state;
    this.schema = schema;
    this.api = new ApiClient("", state.session);
  }

  // Registers in-flight async work so tests (and chained handlers) can
  // wait for the UI to settle instead of sleeping.
  track<T>(work: Promise<T>): Promise<T> {
    this.pending.push(work.catch(() => undefined));
    return work;
  }

  async idle(): Promise<void> {
    while (this.pending.length) {
      const batch = this.pending;
      this.pending = [];
      await Promise.all(batch);
    }
  }

  cacheInstances(rows: InstanceRow[]): void {
    for (const row of rows) this.instanceById.set(row.id, row);
  }

  syncUrl(): void {
    const encoded = `#${encodeState(this.state)}`;
    if (window.location.hash !== encoded) {
      history.replaceState(null, "", encoded);
    }
  }

  async navigate(partial: Partial<ViewState>): Promise<void> {
    Object.assign(this.state, partial);
    this.syncUrl();
    await this.renderPanel();
  }

  // Jump to the data table and mark one instance in purple.
  async locateInstance(id: number): Promise<void> {
    this.state.selectedInstance = id;
    if (this.state.panel !== "data") {
      await this.navigate({ panel: "data" });
      return;
    }
    this.syncUrl();
    if (!locateRow(this.panelHost, id)) {
      // the row may be filtered out; drop filters and re-render once
      this.tableQuery.filter = [];
      await this.renderPanel();
    }
  }

  renderNav(): void {
    const nav = el("nav", { class: "top-nav" });
    for (const panel of PANELS) {
      const button = el("button", {
        type: "button",
        class: "nav-tab",
        "data-role": "nav-tab",
        "data-panel": panel,
      }, PANEL_TITLES[panel]);
      if (panel === this.state.panel) button.classList.add("active-tab");
      button.addEventListener("click", () => {
        void this.track(this.navigate({ panel }));
      });
      nav.appendChild(button);
    }
    const old = this.root.querySelector("nav.top-nav");
    if (old) {
      old.replaceWith(nav);
    } else {
      this.root.prepend(nav);
    }
  }

  async renderPanel(): Promise<void> {
    this.renderNav();
    const host = this.panelHost;
    host.setAttribute("data-panel", this.state.panel);
    switch (this.state.panel) {
      case "data":
        await renderDataPanel(host, this);
        break;
      case "model":
        await renderModelPanel(host, this);
        break;
      case "group":
        await renderGroupPanel(host, this);
        break;
      case "subgroup":
        await renderSubgroupPanel(host, this);
        break;
      case "individual":
        await renderIndividualPanel(host, this);
        break;
      case "whatif":
        await renderWhatifPanel(host, this);
        break;
      case "preferences":
        await renderPreferencesPanel(host, this);
        break;
      case "team":
        await renderTeamPanel(host, this);
        break;
    }
  }
}

export async function boot(root: HTMLElement): Promise<App> {
  clear(root);
  const state = decodeState(window.location.hash);
  const api = new ApiClient("", state.session);
  const schema = await api.schema();
  const app = new App(root, state, schema);

  const host = el("main", { class: "panel-host", "data-role": "panel-host" });
  app.panelHost = host;
  root.appendChild(host);

  // session thresholds are server state; adopt them before first paint
  try {
    const session = await api.sessionDoc();
    app.state.thresholds = session.thresholds;
  } catch {
    // keep defaults when the session store is empty
  }

  // warm the id -> instance cache for cards and neighbor chips
  try {
    const page = await api.instances({ limit: 200 });
    app.cacheInstances(page.rows);
  } catch {
    // table rendering will surface the error where it matters
  }

  window.addEventListener("hashchange", () => {
    const next = decodeState(window.location.hash);
    void app.track(app.navigate(next));
  });

  await app.renderPanel();
  return app;
}
