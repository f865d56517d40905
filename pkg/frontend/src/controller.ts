/** Maps user events to API requests and applies responses through the
 * store's sequence guard. Each control change or click issues exactly one
 * request per affected slot; the hop-level selector is a pure client-side
 * filter and issues none. */

import { ApiClient, ApiError } from "./api.js";
import type { Slot, SlotPayloads, Store } from "./state.js";
import type { DatasetInfo } from "./types.js";

export class Controller {
  constructor(
    private readonly api: ApiClient,
    private readonly store: Store,
  ) {}

  private async track<K extends Slot>(slot: K, call: () => Promise<SlotPayloads[K]>): Promise<void> {
    const sequence = this.store.nextSequence(slot);
    try {
      const payload = await call();
      this.store.apply(slot, sequence, payload);
    } catch (err) {
      this.store.setBanner(err instanceof ApiError ? err.message : `request failed: ${err}`);
    }
  }

  async start(): Promise<void> {
    const datasets = await this.api.listDatasets();
    this.store.update((s) => {
      s.datasets = datasets;
    });
    if (datasets.length > 0) {
      await this.selectDataset(datasets[0]);
    }
  }

  async selectDataset(dataset: DatasetInfo): Promise<void> {
    this.store.update((s) => {
      s.activeDataset = dataset;
      s.selectedNode = null;
      s.selectedGraph = null;
      s.banner = null;
      for (const slot of Object.keys(s.payloads) as Slot[]) s.payloads[slot] = null;
    });
    await this.showGraph(0);
  }

  /** Load the global view of one graph (with the server-side layout). */
  async showGraph(graphId: number): Promise<void> {
    const dataset = this.store.state.activeDataset;
    if (!dataset) return;
    this.store.update((s) => {
      s.selectedGraph = graphId;
    });
    await this.track("graphView", () => this.api.graphView(dataset.id, graphId));
  }

  /** Node click: one explain-node request with the current controls. */
  async clickNode(nodeId: number): Promise<void> {
    const dataset = this.store.state.activeDataset;
    if (!dataset || dataset.task !== "node_classification") return;
    const { topK, d } = this.store.state.controls;
    this.store.update((s) => {
      s.selectedNode = nodeId;
    });
    await this.track("nodeExplanation", () =>
      this.api.explainNode({ dataset_id: dataset.id, node_id: nodeId, top_k: topK, d }),
    );
  }

  /** Graph click: one explain-graph and one references request. */
  async clickGraph(graphId: number): Promise<void> {
    const dataset = this.store.state.activeDataset;
    if (!dataset || dataset.task !== "graph_classification") return;
    this.store.update((s) => {
      s.selectedGraph = graphId;
    });
    const { strategy, strategyValue } = this.store.state.controls;
    await Promise.all([
      this.track("graphExplanation", () =>
        this.api.explainGraph({
          dataset_id: dataset.id,
          graph_id: graphId,
          strategy,
          value: strategyValue,
        }),
      ),
      this.track("references", () => this.api.examples(dataset.id, graphId)),
    ]);
  }

  /** Attribution for the selected node: one explain-features request. */
  async requestAttribution(nodeId: number): Promise<void> {
    const dataset = this.store.state.activeDataset;
    if (!dataset) return;
    const { nSamples, seed } = this.store.state.controls;
    await this.track("attribution", () =>
      this.api.explainFeatures({ dataset_id: dataset.id, node_id: nodeId, n_samples: nSamples, seed }),
    );
  }

  async requestSummary(): Promise<void> {
    const dataset = this.store.state.activeDataset;
    if (!dataset) return;
    const { nSamples, seed } = this.store.state.controls;
    await this.track("summary", () =>
      this.api.featuresSummary({ dataset_id: dataset.id, n_samples: nSamples, seed }),
    );
  }

  /** Strategy controls re-query the open graph explanation live. */
  async setStrategy(strategy: "top_k" | "threshold", value: number): Promise<void> {
    this.store.update((s) => {
      s.controls.strategy = strategy;
      s.controls.strategyValue = value;
    });
    const graphId = this.store.state.selectedGraph;
    if (graphId !== null && this.store.state.activeDataset?.task === "graph_classification") {
      const dataset = this.store.state.activeDataset;
      await this.track("graphExplanation", () =>
        this.api.explainGraph({ dataset_id: dataset.id, graph_id: graphId, strategy, value }),
      );
    }
  }

  /** Walk controls re-query the open node explanation live. */
  async setWalkControls(topK: number, d: number): Promise<void> {
    this.store.update((s) => {
      s.controls.topK = topK;
      s.controls.d = d;
    });
    const nodeId = this.store.state.selectedNode;
    if (nodeId !== null) {
      await this.clickNode(nodeId);
    }
  }

  /** Hop filtering happens in the view layer; no request is issued. */
  setHopLevel(level: number): void {
    this.store.update((s) => {
      s.controls.hopLevel = level;
    });
  }
}
