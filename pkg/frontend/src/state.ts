/** View state plus stale-response rejection.
 *
 * Every request slot carries a monotone sequence number; a response is
 * applied only if its sequence exceeds the last applied one, so an
 * out-of-order (superseded) response can never overwrite newer data.
 */

import type {
  AttributionSummaryPayload,
  DatasetInfo,
  FeatureAttributionPayload,
  GraphExplanationPayload,
  GraphViewPayload,
  NodeExplanationPayload,
  ReferenceSetPayload,
} from "./types.js";

export interface ControlState {
  topK: number;
  d: number;
  hopLevel: number;
  strategy: "top_k" | "threshold";
  strategyValue: number;
  nSamples: number;
  seed: number;
}

export const DEFAULT_CONTROLS: ControlState = {
  topK: 10,
  d: 0.85,
  hopLevel: 3,
  strategy: "top_k",
  strategyValue: 6,
  nSamples: 2048,
  seed: 0,
};

export interface SlotPayloads {
  graphView: GraphViewPayload;
  nodeExplanation: NodeExplanationPayload;
  graphExplanation: GraphExplanationPayload;
  references: ReferenceSetPayload;
  attribution: FeatureAttributionPayload;
  summary: AttributionSummaryPayload;
}

export type Slot = keyof SlotPayloads;

export interface ViewState {
  datasets: DatasetInfo[];
  activeDataset: DatasetInfo | null;
  selectedNode: number | null;
  selectedGraph: number | null;
  controls: ControlState;
  payloads: { [K in Slot]: SlotPayloads[K] | null };
  banner: string | null;
}

const EMPTY_PAYLOADS: ViewState["payloads"] = {
  graphView: null,
  nodeExplanation: null,
  graphExplanation: null,
  references: null,
  attribution: null,
  summary: null,
};

export type Listener = (state: ViewState) => void;

export class Store {
  state: ViewState = {
    datasets: [],
    activeDataset: null,
    selectedNode: null,
    selectedGraph: null,
    controls: { ...DEFAULT_CONTROLS },
    payloads: { ...EMPTY_PAYLOADS },
    banner: null,
  };

  private issued: Record<Slot, number> = {
    graphView: 0,
    nodeExplanation: 0,
    graphExplanation: 0,
    references: 0,
    attribution: 0,
    summary: 0,
  };
  private applied: Record<Slot, number> = { ...this.issued };
  private listeners: Listener[] = [];

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  /** Tag a new in-flight request for the slot. */
  nextSequence(slot: Slot): number {
    return ++this.issued[slot];
  }

  /** Apply a response; returns false (and changes nothing) when stale. */
  apply<K extends Slot>(slot: K, sequence: number, payload: SlotPayloads[K]): boolean {
    if (sequence <= this.applied[slot]) {
      return false;
    }
    this.applied[slot] = sequence;
    this.state.payloads[slot] = payload;
    this.notify();
    return true;
  }

  /** Drop a slot's payload (e.g. selection moved to another entity). */
  clear(slot: Slot): void {
    this.state.payloads[slot] = null;
    this.notify();
  }

  update(mutate: (state: ViewState) => void): void {
    mutate(this.state);
    this.notify();
  }

  setBanner(message: string | null): void {
    this.state.banner = message;
    this.notify();
  }
}
