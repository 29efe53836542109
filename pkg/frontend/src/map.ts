import { svg } from "./dom";

export interface MapRect {
  col: number;
  row: number;
  fill: string;
  count: number;
  title: string;
}

export interface CellMapOptions {
  onCellClick?: (col: number, row: number) => void;
  onCellHover?: (col: number, row: number) => void;
}

/** Shared SVG grid renderer: one rect per cell, y growing upward. */
export function buildCellMap(rects: MapRect[], options: CellMapOptions = {}): SVGElement {
  const PX = 14; // screen pixels per cell
  if (rects.length === 0) {
    return svg("svg", { class: "cell-map", width: 200, height: 60 }, [
      svg("text", { x: 8, y: 30, class: "empty-note" }, ["no located events"]),
    ]);
  }
  const cols = rects.map((r) => r.col);
  const rows = rects.map((r) => r.row);
  const minCol = Math.min(...cols);
  const maxCol = Math.max(...cols);
  const minRow = Math.min(...rows);
  const maxRow = Math.max(...rows);
  const width = (maxCol - minCol + 1) * PX;
  const height = (maxRow - minRow + 1) * PX;

  const root = svg("svg", {
    class: "cell-map",
    width: width + 2,
    height: height + 2,
    viewBox: `0 0 ${width + 2} ${height + 2}`,
  });
  for (const rect of rects) {
    const node = svg("rect", {
      class: "cell",
      "data-col": rect.col,
      "data-row": rect.row,
      "data-count": rect.count,
      x: 1 + (rect.col - minCol) * PX,
      y: 1 + (maxRow - rect.row) * PX, // flip: north is up
      width: PX - 1,
      height: PX - 1,
      fill: rect.fill,
    });
    node.append(svg("title", {}, [rect.title]));
    if (options.onCellClick) {
      node.addEventListener("click", () => options.onCellClick!(rect.col, rect.row));
    }
    if (options.onCellHover) {
      node.addEventListener("mouseenter", () => options.onCellHover!(rect.col, rect.row));
    }
    root.append(node);
  }
  return root;
}
