import type { ColorIndex, ScaleConfig } from "./types";

// Concrete hexes are a client decision; the service only hands out ordinal
// colour indexes. The ramp runs dark green (index 0, earliest decade) to
// deep red (last index, latest decade); the legend documents the mapping.
export const DECADE_PALETTE: readonly string[] = [
  "#006837", "#128a49", "#39a758", "#6ec064", "#9dd569",
  "#c3e67d", "#e3f399", "#fffebe", "#fee999", "#feca79",
  "#fca55d", "#f57547", "#e34933", "#c82227", "#a50026",
];

export const GREY = "#9e9e9e";

/** Colour for a cell exactly as the API indexed it; never recomputed here. */
export function colorFor(color: ColorIndex): string {
  if (color === "unknown") return GREY;
  return DECADE_PALETTE[Math.max(0, Math.min(color, DECADE_PALETTE.length - 1))];
}

export interface LegendEntry {
  label: string;
  color: string;
  value: number | "unknown";
}

/** One entry per decade step plus the grey unknown entry. */
export function legendEntries(scale: ScaleConfig): LegendEntry[] {
  const entries: LegendEntry[] = [];
  for (let i = 0; i < scale.steps; i += 1) {
    const decade = scale.start + 10 * i;
    entries.push({ label: `${decade}s`, color: colorFor(i), value: decade });
  }
  entries.push({ label: scale.unknown_token, color: GREY, value: "unknown" });
  return entries;
}
