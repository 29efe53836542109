import { clear, el, svg } from "./dom";
import type { ViewState } from "./state";
import type { RingMark, Rings } from "./types";

export interface RingsHandlers {
  onState(next: ViewState): void;
}

/** Radial timeline: innermost ring is the earliest year, one ring per year
 * (gap years draw as empty rings), marks are individual events.  Clicking a
 * mark jumps to the curator involved, or to its cell on the overview. */
export function renderRings(
  root: HTMLElement,
  rings: Rings,
  state: ViewState,
  handlers: RingsHandlers,
): void {
  clear(root);
  const view = el("section", { class: "view rings-view" });
  view.append(el("h1", {}, ["Year rings"]));

  const n = rings.rings.length;
  if (n === 0) {
    view.append(el("p", {}, ["no dated events in this archive"]));
    root.append(view);
    return;
  }
  const first = rings.rings[0].year;
  const last = rings.rings[n - 1].year;
  view.append(
    el("p", { class: "subtitle" }, [
      `${first}–${last}; ${rings.undated} undated events not shown`,
    ]),
  );

  const base = 10;
  const step = 6;
  const size = 2 * (base + step * n) + 20;
  const center = size / 2;
  const chart = svg("svg", {
    class: "ring-chart",
    width: size,
    height: size,
    viewBox: `0 0 ${size} ${size}`,
  });

  rings.rings.forEach((ring, i) => {
    const radius = base + step * (i + 1);
    const circle = svg("circle", {
      class: "ring",
      "data-year": ring.year,
      cx: center,
      cy: center,
      r: radius,
    });
    chart.append(circle);
    ring.marks.forEach((mark, k) => {
      const angle = (2 * Math.PI * k) / ring.marks.length + i * 0.07;
      const node = svg("circle", {
        class: "mark",
        "data-event": mark.id,
        "data-year": ring.year,
        cx: center + radius * Math.cos(angle),
        cy: center + radius * Math.sin(angle),
        r: 2.4,
      });
      node.append(
        svg("title", {}, [`${mark.accession} ${mark.semantics} ${mark.date}`]),
      );
      node.addEventListener("click", () => handlers.onState(targetFor(mark, state)));
      chart.append(node);
    });
    if (i === 0 || i === n - 1 || ring.year % 10 === 0) {
      chart.append(
        svg(
          "text",
          { class: "year-tick", x: center, y: center - radius - 1 },
          [String(ring.year)],
        ),
      );
    }
  });

  view.append(chart);
  root.append(view);
}

function targetFor(mark: RingMark, state: ViewState): ViewState {
  if (mark.curator) {
    return { ...state, view: "curator", curator: mark.curator, cell: null };
  }
  if (mark.cell) {
    return { ...state, view: "overview", curator: null, cell: mark.cell };
  }
  return state;
}
