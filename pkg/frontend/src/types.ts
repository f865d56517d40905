/** Wire-format payload types, mirroring the server's published schemas. */

export interface DatasetInfo {
  id: string;
  task: "node_classification" | "graph_classification";
  num_classes: number;
  num_graphs: number;
}

export interface GraphViewPayload {
  dataset_id: string;
  graph_id: number;
  task: "node_classification" | "graph_classification";
  num_classes: number;
  num_nodes: number;
  directed: boolean;
  edges: [number, number][];
  node_labels: number[] | null;
  graph_label: number | null;
  positions: [number, number][] | null;
  predicted_classes: number[] | null;
}

export interface ExplainedNode {
  id: number;
  score: number;
  /** BFS distance from the explained node; -1 when unreachable. */
  hop: number;
}

export interface ContributionEdge {
  src: number;
  dst: number;
  contribution: number;
}

export interface NodeExplanationPayload {
  target: number;
  nodes: ExplainedNode[];
  edges: ContributionEdge[];
  converged: boolean;
}

export interface ScoredEdge {
  src: number;
  dst: number;
  score: number;
  selected: boolean;
}

export interface GraphExplanationPayload {
  graph_id: number;
  predicted_class: number;
  class_probs: number[];
  edges: ScoredEdge[];
}

export interface FeatureAttributionPayload {
  node_id: number;
  explained_class: number;
  base_value: number;
  phi: number[];
  method: "kernel" | "exact";
}

export interface AttributionSummaryPayload {
  mean_abs_phi: number[];
  ranking: number[];
}

/** A reference carries its own graph explanation plus the embedding distance. */
export interface ReferencePayload extends Partial<GraphExplanationPayload> {
  graph_id: number;
  distance: number;
}

export interface ReferenceSetPayload {
  query_id: number;
  same_class: ReferencePayload;
  diff_class: ReferencePayload;
}

export interface ErrorPayload {
  error: string;
  detail?: string;
}
