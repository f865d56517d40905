/** Render model for the global graph view: server-computed 2-D positions,
 * one color per class (ground-truth labels when present, otherwise the
 * model's predicted classes). */

import type { GraphViewPayload } from "../types.js";

export const CLASS_PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];
const UNLABELED_COLOR = "#c0c0c0";

export interface GlobalNode {
  id: number;
  x: number;
  y: number;
  classIndex: number | null;
  color: string;
}

export interface LegendEntry {
  classIndex: number;
  color: string;
}

export interface GlobalViewModel {
  nodes: GlobalNode[];
  edges: [number, number][];
  legend: LegendEntry[];
}

export function classColor(classIndex: number): string {
  return CLASS_PALETTE[classIndex % CLASS_PALETTE.length];
}

export function globalView(payload: GraphViewPayload): GlobalViewModel {
  const classes = payload.node_labels ?? payload.predicted_classes;
  const nodes: GlobalNode[] = [];
  for (let id = 0; id < payload.num_nodes; id++) {
    const position = payload.positions ? payload.positions[id] : [0, 0];
    const classIndex = classes ? classes[id] : null;
    nodes.push({
      id,
      x: position[0],
      y: position[1],
      classIndex,
      color: classIndex === null ? UNLABELED_COLOR : classColor(classIndex),
    });
  }
  return {
    nodes,
    edges: payload.edges,
    legend: Array.from({ length: payload.num_classes }, (_, c) => ({
      classIndex: c,
      color: classColor(c),
    })),
  };
}
