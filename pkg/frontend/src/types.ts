// Wire-format types, mirroring the bundle service's JSON responses.
// The explorer never derives numbers of its own: everything rendered
// traces back to one of these payload fields.

export interface ScaleConfig {
  start: number;
  end: number;
  unknown_token: string;
  steps: number;
}

export interface Meta {
  schema_version: string;
  build_stamp: string;
  grid: {
    origin: [number, number];
    cell_size: number;
    bbox: [number, number, number, number] | null;
  };
  scale: ScaleConfig;
  reference_year: number;
  pivot_floor: number;
  counts: Record<string, number>;
}

export type ColorIndex = number | "unknown";

export interface MapCell {
  col: number;
  row: number;
  count: number;
  color: ColorIndex;
}

export interface MapLayer {
  decade: number | string | null;
  grid_mult: number;
  cell_size: number;
  total: number;
  cells: MapCell[];
}

export interface CuratorSummary {
  id: string;
  canonical: string;
  first_year: number | null;
  last_year: number | null;
  events_total: number;
}

export interface CuratorList {
  curators: CuratorSummary[];
}

export interface FootprintCell extends Array<number> {
  0: number; // col
  1: number; // row
  2: number; // count
}

export interface CuratorDetail {
  curator: {
    id: string;
    canonical: string;
    variants: { raw: string; occurrences: number }[];
    first_year: number | null;
    last_year: number | null;
    footprint: {
      cells: FootprintCell[];
      events_total: number;
    };
  };
  dossier: {
    curator: string;
    facts: { id: string; kind: string; value: unknown; evidence: string[] }[];
  };
  biography: {
    template: BiographyDraft | null;
    generated: BiographyDraft | null;
  };
}

export interface BiographySentence {
  text: string;
  fact_ids: string[];
}

export interface BiographyDraft {
  curator: string;
  paragraphs: BiographySentence[][];
  generated: boolean;
  generator_id: string;
}

export interface RingMark {
  id: string;
  accession: string;
  date: string;
  semantics: string;
  curator: string | null;
  cell: [number, number] | null;
}

export interface Rings {
  undated: number;
  rings: { year: number; marks: RingMark[] }[];
}

export interface CellDetail {
  cell: [number, number];
  histogram: Record<string, number>;
  events: string[];
}
