import type {
  CellDetail,
  CuratorDetail,
  CuratorList,
  MapLayer,
  Meta,
  Rings,
} from "./types";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/** Thin typed client for the read-only bundle API. */
export class Api {
  constructor(private base: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.base + path);
    if (!response.ok) {
      throw new ApiError(response.status, `${path} -> ${response.status}`);
    }
    return (await response.json()) as T;
  }

  meta(): Promise<Meta> {
    return this.get<Meta>("/api/v1/meta");
  }

  map(decade: number | "unknown" | null, gridMult: number): Promise<MapLayer> {
    const params = new URLSearchParams();
    if (decade !== null) params.set("decade", String(decade));
    if (gridMult !== 1) params.set("grid_mult", String(gridMult));
    const query = params.toString();
    return this.get<MapLayer>(`/api/v1/map${query ? "?" + query : ""}`);
  }

  curators(): Promise<CuratorList> {
    return this.get<CuratorList>("/api/v1/curators");
  }

  curator(id: string): Promise<CuratorDetail> {
    return this.get<CuratorDetail>(`/api/v1/curators/${encodeURIComponent(id)}`);
  }

  cell(col: number, row: number): Promise<CellDetail> {
    return this.get<CellDetail>(`/api/v1/cells/${col}/${row}`);
  }

  rings(): Promise<Rings> {
    return this.get<Rings>("/api/v1/rings");
  }
}
