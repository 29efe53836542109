// View state <-> URL hash. Every reachable state encodes into a canonical
// hash, and canonical hashes decode back to the same state, so links
// reproduce exactly what the sender saw.

export type View = "overview" | "curator" | "rings";

export interface ViewState {
  view: View;
  curator: string | null; // selected curator (curator view only)
  decade: number | "unknown" | null; // decade filter on the map
  gridMult: number; // grid coarsening factor, >= 1
  cell: [number, number] | null; // pinned cell on the overview
}

export const DEFAULT_STATE: ViewState = {
  view: "overview",
  curator: null,
  decade: null,
  gridMult: 1,
  cell: null,
};

/** Drop values that cannot appear in the given view; order-independent fields
 * get canonical values so encode/decode is a bijection on reachable states.
 * A curator view without a curator id is incoherent and falls back to the
 * overview. */
export function normalize(state: ViewState): ViewState {
  const view = state.view === "curator" && !state.curator ? "overview" : state.view;
  return {
    view,
    curator: view === "curator" ? state.curator : null,
    decade: state.decade,
    gridMult: Number.isInteger(state.gridMult) && state.gridMult >= 1 ? state.gridMult : 1,
    cell: view === "overview" ? state.cell : null,
  };
}

export function encodeState(state: ViewState): string {
  const s = normalize(state);
  let path = `#/${s.view}`;
  if (s.view === "curator" && s.curator) {
    path += `/${encodeURIComponent(s.curator)}`;
  }
  const params = new URLSearchParams();
  if (s.cell) params.set("cell", `${s.cell[0]},${s.cell[1]}`);
  if (s.decade !== null) params.set("decade", String(s.decade));
  if (s.gridMult !== 1) params.set("grid", String(s.gridMult));
  params.sort();
  const query = params.toString();
  return query ? `${path}?${query}` : path;
}

export function decodeState(hash: string): ViewState {
  const raw = hash.startsWith("#") ? hash.slice(1) : hash;
  const [pathPart, queryPart = ""] = raw.split("?", 2);
  const segments = pathPart.split("/").filter((s) => s.length > 0);
  const params = new URLSearchParams(queryPart);

  let view: View = "overview";
  let curator: string | null = null;
  if (segments[0] === "curator" && segments[1]) {
    view = "curator";
    curator = decodeURIComponent(segments[1]);
  } else if (segments[0] === "rings") {
    view = "rings";
  }

  let decade: number | "unknown" | null = null;
  const rawDecade = params.get("decade");
  if (rawDecade === "unknown") {
    decade = "unknown";
  } else if (rawDecade !== null && /^-?\d+$/.test(rawDecade)) {
    decade = parseInt(rawDecade, 10);
  }

  let gridMult = 1;
  const rawGrid = params.get("grid");
  if (rawGrid !== null && /^\d+$/.test(rawGrid) && parseInt(rawGrid, 10) >= 1) {
    gridMult = parseInt(rawGrid, 10);
  }

  let cell: [number, number] | null = null;
  const rawCell = params.get("cell");
  if (rawCell !== null && /^-?\d+,-?\d+$/.test(rawCell)) {
    const [col, row] = rawCell.split(",");
    cell = [parseInt(col, 10), parseInt(row, 10)];
  }

  return normalize({ view, curator, decade, gridMult, cell });
}
