// Fixture payloads captured from the real service (see
// scripts/capture_fixtures.py) plus a minimal fetch mock.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type {
  CuratorDetail,
  CuratorList,
  MapLayer,
  Meta,
  Rings,
} from "../src/types";

const here = dirname(fileURLToPath(import.meta.url));

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf-8")) as T;
}

export const META = fixture<Meta>("meta.json");
export const MAP = fixture<MapLayer>("map.json");
export const MAP_1870 = fixture<MapLayer>("map_1870.json");
export const MAP_UNKNOWN = fixture<MapLayer>("map_unknown.json");
export const MAP_MULT4 = fixture<MapLayer>("map_mult4.json");
export const CURATORS = fixture<CuratorList>("curators.json");
export const HOWARD = fixture<CuratorDetail>("curator_howard.json");
export const RINGS = fixture<Rings>("rings.json");

export function standardRoutes(): Record<string, unknown> {
  return {
    "/api/v1/meta": META,
    "/api/v1/map": MAP,
    "/api/v1/map?decade=1870": MAP_1870,
    "/api/v1/map?decade=unknown": MAP_UNKNOWN,
    "/api/v1/map?grid_mult=4": MAP_MULT4,
    "/api/v1/curators": CURATORS,
    [`/api/v1/curators/${HOWARD.curator.id}`]: HOWARD,
    "/api/v1/rings": RINGS,
  };
}

export function mockFetch(routes: Record<string, unknown>): string[] {
  const requested: string[] = [];
  globalThis.fetch = (async (input: RequestInfo | URL) => {
    const url = String(input);
    const path = url.startsWith("http")
      ? new URL(url).pathname + new URL(url).search
      : url;
    requested.push(path);
    if (path in routes) {
      return {
        ok: true,
        status: 200,
        json: async () => routes[path],
        text: async () => JSON.stringify(routes[path]),
      } as Response;
    }
    return {
      ok: false,
      status: 404,
      json: async () => ({ error: { code: "NOT_FOUND" } }),
      text: async () => "not found",
    } as Response;
  }) as typeof fetch;
  return requested;
}

export function failingFetch(): void {
  globalThis.fetch = (async () => {
    throw new Error("network down");
  }) as typeof fetch;
}

export function tick(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
