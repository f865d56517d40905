/** Typed client over the REST endpoints. The fetch implementation is
 * injectable so tests can count and script requests. */

import type {
  AttributionSummaryPayload,
  DatasetInfo,
  ErrorPayload,
  FeatureAttributionPayload,
  GraphExplanationPayload,
  GraphViewPayload,
  NodeExplanationPayload,
  ReferenceSetPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly payload: ErrorPayload,
  ) {
    super(payload.detail ? `${payload.error}: ${payload.detail}` : payload.error);
  }
}

export interface ExplainNodeRequest {
  dataset_id: string;
  node_id: number;
  top_k?: number;
  d?: number;
}

export interface ExplainGraphRequest {
  dataset_id: string;
  graph_id: number;
  strategy: "top_k" | "threshold";
  value: number;
}

export interface ExplainFeaturesRequest {
  dataset_id: string;
  node_id: number;
  n_samples?: number;
  seed?: number;
}

export interface FeaturesSummaryRequest {
  dataset_id: string;
  sample_ids?: number[];
  n_samples?: number;
  seed?: number;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let payload: ErrorPayload = { error: `http_${response.status}` };
      try {
        payload = (await response.json()) as ErrorPayload;
      } catch {
        // non-JSON error body; keep the status-derived payload
      }
      throw new ApiError(response.status, payload);
    }
    return (await response.json()) as T;
  }

  listDatasets(): Promise<DatasetInfo[]> {
    return this.request("GET", "/api/datasets");
  }

  graphView(datasetId: string, graphId: number, layout = "pca"): Promise<GraphViewPayload> {
    const suffix = layout ? `?layout=${encodeURIComponent(layout)}` : "";
    return this.request("GET", `/api/datasets/${encodeURIComponent(datasetId)}/graph/${graphId}${suffix}`);
  }

  explainNode(req: ExplainNodeRequest): Promise<NodeExplanationPayload> {
    return this.request("POST", "/api/explain/node", req);
  }

  explainGraph(req: ExplainGraphRequest): Promise<GraphExplanationPayload> {
    return this.request("POST", "/api/explain/graph", req);
  }

  explainFeatures(req: ExplainFeaturesRequest): Promise<FeatureAttributionPayload> {
    return this.request("POST", "/api/explain/features", req);
  }

  featuresSummary(req: FeaturesSummaryRequest): Promise<AttributionSummaryPayload> {
    return this.request("POST", "/api/explain/features/summary", req);
  }

  examples(datasetId: string, graphId: number): Promise<ReferenceSetPayload> {
    return this.request("GET", `/api/examples/${encodeURIComponent(datasetId)}/${graphId}`);
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/api/health");
  }
}
