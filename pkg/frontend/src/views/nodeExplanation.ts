/** Render model for the node-explanation overlay: the explained node, its
 * contribution edges (width proportional to contribution, two-decimal
 * ratio labels), and the hop-level filter. */

import type { NodeExplanationPayload } from "../types.js";

export const EDGE_WIDTH_SCALE = 6;

export interface NodeVisual {
  id: number;
  score: number;
  hop: number;
  isTarget: boolean;
  visible: boolean;
}

export interface EdgeVisual {
  src: number;
  dst: number;
  contribution: number;
  width: number;
  label: string;
  visible: boolean;
}

export interface NodeExplanationView {
  target: number;
  nodes: NodeVisual[];
  edges: EdgeVisual[];
  warning: string | null;
}

/** Nodes beyond ``hopLevel`` (or unreachable ones) are hidden; an edge is
 * visible only when both endpoints are and its contribution is nonzero. */
export function nodeExplanationView(
  payload: NodeExplanationPayload,
  hopLevel: number,
): NodeExplanationView {
  const nodes: NodeVisual[] = payload.nodes.map((n) => ({
    id: n.id,
    score: n.score,
    hop: n.hop,
    isTarget: n.id === payload.target,
    visible: n.hop >= 0 && n.hop <= hopLevel,
  }));
  const visibleIds = new Set(nodes.filter((n) => n.visible).map((n) => n.id));
  const edges: EdgeVisual[] = payload.edges.map((e) => ({
    src: e.src,
    dst: e.dst,
    contribution: e.contribution,
    width: e.contribution * EDGE_WIDTH_SCALE,
    label: e.contribution.toFixed(2),
    visible: e.contribution > 0 && visibleIds.has(e.src) && visibleIds.has(e.dst),
  }));
  return {
    target: payload.target,
    nodes,
    edges,
    warning: payload.converged ? null : "random walk hit its iteration cap; scores are approximate",
  };
}
