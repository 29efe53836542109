import { clear, el } from "./dom";
import { buildCellMap } from "./map";
import { colorFor, legendEntries } from "./palette";
import type { ViewState } from "./state";
import type { CellDetail, CuratorList, MapLayer, Meta } from "./types";

export interface OverviewHandlers {
  onState(next: ViewState): void; // filter/coarseness changes re-query via state
  onSelectCurator(id: string): void;
  onHoverCell(col: number, row: number): void;
}

export function renderOverview(
  root: HTMLElement,
  meta: Meta,
  layer: MapLayer,
  curators: CuratorList,
  state: ViewState,
  handlers: OverviewHandlers,
): void {
  clear(root);
  const view = el("section", { class: "view overview" });

  view.append(el("h1", {}, ["Archive overview"]));
  view.append(el("p", { class: "subtitle" }, [
    `${layer.total} recorded events on the map`,
    state.decade !== null ? ` (decade filter: ${state.decade})` : "",
  ]));

  view.append(buildControls(meta, state, handlers));

  const rects = layer.cells.map((cell) => ({
    col: cell.col,
    row: cell.row,
    fill: colorFor(cell.color),
    count: cell.count,
    title: `cell ${cell.col},${cell.row}: ${cell.count} events`,
  }));
  view.append(
    el("div", { class: "map-panel" }, [
      buildCellMap(rects, {
        onCellHover: (col, row) => handlers.onHoverCell(col, row),
        onCellClick: (col, row) =>
          handlers.onState({ ...state, cell: [col, row] }),
      }),
      el("div", { id: "cell-detail", class: "cell-detail" }),
    ]),
  );

  view.append(buildLegend(meta));

  const list = el("ul", { class: "curator-list" });
  for (const curator of curators.curators) {
    const span =
      curator.first_year !== null ? ` ${curator.first_year}–${curator.last_year}` : "";
    const item = el("li", {}, [
      el(
        "button",
        {
          class: "curator-link",
          "data-curator": curator.id,
          onclick: () => handlers.onSelectCurator(curator.id),
        },
        [`${curator.canonical}${span} (${curator.events_total})`],
      ),
    ]);
    list.append(item);
  }
  view.append(el("aside", { class: "curators" }, [el("h2", {}, ["Curators"]), list]));

  root.append(view);
}

function buildControls(meta: Meta, state: ViewState, handlers: OverviewHandlers): HTMLElement {
  const decadeSelect = el("select", { id: "decade-filter" });
  decadeSelect.append(el("option", { value: "" }, ["all decades"]));
  for (const entry of legendEntries(meta.scale)) {
    decadeSelect.append(el("option", { value: String(entry.value) }, [entry.label]));
  }
  decadeSelect.value = state.decade === null ? "" : String(state.decade);
  decadeSelect.addEventListener("change", () => {
    const value = decadeSelect.value;
    const decade =
      value === "" ? null : value === "unknown" ? ("unknown" as const) : parseInt(value, 10);
    handlers.onState({ ...state, decade });
  });

  const gridSelect = el("select", { id: "grid-mult" });
  for (const [mult, label] of [
    [1, "fine grid"],
    [2, "medium grid"],
    [4, "coarse grid"],
  ] as const) {
    gridSelect.append(el("option", { value: String(mult) }, [label]));
  }
  gridSelect.value = String(state.gridMult);
  gridSelect.addEventListener("change", () => {
    handlers.onState({ ...state, gridMult: parseInt(gridSelect.value, 10) });
  });

  return el("div", { class: "controls" }, [
    el("label", {}, ["decade ", decadeSelect]),
    el("label", {}, ["resolution ", gridSelect]),
  ]);
}

function buildLegend(meta: Meta): HTMLElement {
  const list = el("ul", { class: "legend" });
  for (const entry of legendEntries(meta.scale)) {
    list.append(
      el("li", { class: "legend-entry", "data-value": String(entry.value) }, [
        el("span", { class: "swatch", style: `background:${entry.color}` }),
        entry.label,
      ]),
    );
  }
  return el("div", { class: "legend-panel" }, [el("h2", {}, ["Decades"]), list]);
}

/** Fill the hover panel with one cell's decade histogram. */
export function renderCellDetail(panel: HTMLElement, detail: CellDetail): void {
  clear(panel);
  panel.append(el("h3", {}, [`cell ${detail.cell[0]},${detail.cell[1]}`]));
  const list = el("ul", { class: "histogram" });
  const entries = Object.entries(detail.histogram).sort(([a], [b]) => a.localeCompare(b));
  for (const [bucket, count] of entries) {
    const label = bucket === "unknown" ? bucket : `${bucket}s`;
    list.append(el("li", { "data-bucket": bucket }, [`${label}: ${count}`]));
  }
  panel.append(list);
}
