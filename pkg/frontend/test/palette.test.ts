import { describe, expect, it } from "vitest";

import { DECADE_PALETTE, GREY, colorFor, legendEntries } from "../src/palette";
import { META } from "./support";

describe("decade palette", () => {
  it("has fifteen distinct steps", () => {
    expect(DECADE_PALETTE).toHaveLength(15);
    expect(new Set(DECADE_PALETTE).size).toBe(15);
  });

  it("runs from dark green to deep red", () => {
    const channel = (hex: string, i: number) => parseInt(hex.slice(i, i + 2), 16);
    const first = DECADE_PALETTE[0];
    const last = DECADE_PALETTE[14];
    expect(channel(first, 3)).toBeGreaterThan(channel(first, 1)); // green > red
    expect(channel(last, 1)).toBeGreaterThan(channel(last, 3)); // red > green
  });

  it("maps the unknown token to grey", () => {
    expect(colorFor("unknown")).toBe(GREY);
    expect(DECADE_PALETTE).not.toContain(GREY);
  });

  it("returns exactly the API-indexed colour", () => {
    for (let i = 0; i < 15; i += 1) {
      expect(colorFor(i)).toBe(DECADE_PALETTE[i]);
    }
  });
});

describe("legendEntries", () => {
  it("builds one entry per scale step plus the unknown entry", () => {
    const entries = legendEntries(META.scale);
    expect(entries).toHaveLength(META.scale.steps + 1);
    expect(entries[0]).toEqual({ label: "1870s", color: DECADE_PALETTE[0], value: 1870 });
    expect(entries[14].label).toBe("2010s");
    expect(entries[15]).toEqual({ label: "unknown", color: GREY, value: "unknown" });
  });
});
