import { Api } from "./api";
import { clear, el } from "./dom";
import { renderCurator } from "./curator";
import { renderCellDetail, renderOverview } from "./overview";
import { renderRings } from "./rings";
import { decodeState, encodeState, ViewState } from "./state";

/** Orchestrates fetching and rendering; stale responses are discarded by
 * sequence number so a slow earlier request can never clobber a newer view. */
export class App {
  private seq = 0;

  constructor(
    private root: HTMLElement,
    private api: Api,
    private pushUrl: (hash: string) => void = (hash) => {
      window.location.hash = hash;
    },
  ) {}

  navigate(state: ViewState): Promise<void> {
    this.pushUrl(encodeState(state));
    return this.render(state);
  }

  async render(state: ViewState): Promise<void> {
    const mySeq = ++this.seq;
    const stale = () => mySeq !== this.seq;
    try {
      if (state.view === "curator" && state.curator) {
        const detail = await this.api.curator(state.curator);
        if (stale()) return;
        renderCurator(this.root, detail, state, {
          onState: (next) => void this.navigate(next),
        });
      } else if (state.view === "rings") {
        const rings = await this.api.rings();
        if (stale()) return;
        renderRings(this.root, rings, state, {
          onState: (next) => void this.navigate(next),
        });
      } else {
        const [meta, layer, curators] = await Promise.all([
          this.api.meta(),
          this.api.map(state.decade, state.gridMult),
          this.api.curators(),
        ]);
        if (stale()) return;
        renderOverview(this.root, meta, layer, curators, state, {
          onState: (next) => void this.navigate(next),
          onSelectCurator: (id) =>
            void this.navigate({ ...state, view: "curator", curator: id, cell: null }),
          onHoverCell: (col, row) => void this.showCellDetail(col, row),
        });
        this.attachNav(state);
        return;
      }
      this.attachNav(state);
    } catch (error) {
      if (stale()) return;
      this.renderError(state, error);
    }
  }

  private async showCellDetail(col: number, row: number): Promise<void> {
    const panel = this.root.querySelector<HTMLElement>("#cell-detail");
    if (!panel) return;
    try {
      const detail = await this.api.cell(col, row);
      renderCellDetail(panel, detail);
    } catch {
      clear(panel); // cells outside the archive simply show nothing
    }
  }

  private attachNav(state: ViewState): void {
    const nav = el("nav", { class: "main-nav" });
    const views: [ViewState["view"], string][] = [
      ["overview", "map"],
      ["rings", "rings"],
    ];
    for (const [view, label] of views) {
      nav.append(
        el(
          "button",
          {
            class: state.view === view ? "nav-link active" : "nav-link",
            "data-view": view,
            onclick: () =>
              void this.navigate({ ...state, view, curator: null, cell: null }),
          },
          [label],
        ),
      );
    }
    this.root.prepend(nav);
  }

  private renderError(state: ViewState, error: unknown): void {
    clear(this.root);
    this.root.append(
      el("section", { class: "error-state" }, [
        el("h1", {}, ["could not reach the archive"]),
        el("p", {}, [String(error)]),
        el(
          "button",
          { class: "retry", onclick: () => void this.render(state) },
          ["retry"],
        ),
      ]),
    );
  }
}

export function boot(root: HTMLElement, api: Api = new Api(apiBase())): App {
  const app = new App(root, api);
  window.addEventListener("hashchange", () => {
    void app.render(decodeState(window.location.hash));
  });
  void app.render(decodeState(window.location.hash));
  return app;
}

function apiBase(): string {
  // same origin by default; override for a detached API during development
  return (window as { GROVEBOOK_API?: string }).GROVEBOOK_API ?? "";
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot(document.getElementById("app")!);
}
