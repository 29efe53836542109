import { clear, el } from "./dom";
import { buildCellMap } from "./map";
import type { ViewState } from "./state";
import type { BiographyDraft, CuratorDetail } from "./types";

export interface CuratorHandlers {
  onState(next: ViewState): void;
}

export function renderCurator(
  root: HTMLElement,
  detail: CuratorDetail,
  state: ViewState,
  handlers: CuratorHandlers,
): void {
  clear(root);
  const curator = detail.curator;
  const view = el("section", { class: "view curator-profile" });

  view.append(
    el("nav", {}, [
      el(
        "button",
        {
          class: "back-link",
          onclick: () => handlers.onState({ ...state, view: "overview", curator: null }),
        },
        ["← overview"],
      ),
    ]),
  );
  view.append(el("h1", {}, [curator.canonical]));
  view.append(
    el("p", { class: "variants" }, [
      "appears as: " + curator.variants.map((v) => v.raw).join(", "),
    ]),
  );

  // the profile map shows exactly the footprint cells the API reported
  const maxCount = Math.max(...curator.footprint.cells.map((c) => c[2]), 1);
  const rects = curator.footprint.cells.map(([col, row, count]) => ({
    col,
    row,
    fill: `rgba(58, 94, 66, ${(0.25 + (0.75 * count) / maxCount).toFixed(3)})`,
    count,
    title: `cell ${col},${row}: ${count} events`,
  }));
  view.append(el("div", { class: "footprint" }, [buildCellMap(rects)]));

  view.append(buildTimeline(curator.first_year, curator.last_year,
                            curator.footprint.events_total));
  view.append(buildBiography(detail.biography.template, detail.biography.generated));
  view.append(buildDossier(detail));

  root.append(view);
}

function buildTimeline(first: number | null, last: number | null, total: number): HTMLElement {
  if (first === null || last === null) {
    return el("p", { class: "timeline empty" }, ["no dated activity on record"]);
  }
  return el("div", { class: "timeline", "data-first": first, "data-last": last }, [
    el("span", { class: "year-label" }, [String(first)]),
    el("span", { class: "span-bar" }),
    el("span", { class: "year-label" }, [String(last)]),
    el("span", { class: "total" }, [`${total} events`]),
  ]);
}

function buildBiography(
  template: BiographyDraft | null,
  generated: BiographyDraft | null,
): HTMLElement {
  const section = el("div", { class: "biography" }, [el("h2", {}, ["Biography"])]);
  if (template) {
    section.append(draftBlock(template));
  }
  if (generated) {
    section.append(draftBlock(generated));
  }
  if (!template && !generated) {
    section.append(el("p", {}, ["no biography available"]));
  }
  return section;
}

function draftBlock(draft: BiographyDraft): HTMLElement {
  const block = el("div", {
    class: draft.generated ? "draft generated" : "draft empirical",
  });
  if (draft.generated) {
    // generated prose is interpretation; it is labelled, never blended in
    block.append(el("span", { class: "generated-badge" }, ["generated"]));
  }
  for (const paragraph of draft.paragraphs) {
    const p = el("p", {});
    for (const sentence of paragraph) {
      p.append(
        el("span", { class: "sentence", "data-facts": sentence.fact_ids.join(" ") }, [
          sentence.text + " ",
        ]),
      );
    }
    block.append(p);
  }
  block.append(el("span", { class: "generator-id" }, [draft.generator_id]));
  return block;
}

function buildDossier(detail: CuratorDetail): HTMLElement {
  const list = el("ul", { class: "dossier" });
  for (const fact of detail.dossier.facts) {
    list.append(
      el("li", { class: "fact", "data-fact": fact.id }, [
        el("span", { class: "kind" }, [fact.kind]),
        " ",
        el("span", { class: "value" }, [formatValue(fact.value)]),
        " ",
        el("span", { class: "evidence" }, [fact.evidence.join(", ")]),
      ]),
    );
  }
  return el("div", { class: "dossier-panel" }, [el("h2", {}, ["Evidence"]), list]);
}

function formatValue(value: unknown): string {
  if (Array.isArray(value)) return value.join("–");
  return String(value);
}
