/** Three-panel comparison: the explained graph next to its nearest
 * same-class and different-class references, each with selected edges
 * highlighted. A missing reference renders as an explanatory empty panel. */

import type {
  GraphExplanationPayload,
  ReferencePayload,
  ReferenceSetPayload,
  ScoredEdge,
} from "../types.js";

export interface PanelView {
  title: string;
  graphId: number | null;
  distance: number | null;
  predictedClass: number | null;
  classProbs: number[] | null;
  edges: ScoredEdge[];
  selectedEdges: ScoredEdge[];
  emptyReason: string | null;
}

export interface ComparisonView {
  target: PanelView;
  sameClass: PanelView;
  diffClass: PanelView;
}

function emptyPanel(title: string, reason: string): PanelView {
  return {
    title,
    graphId: null,
    distance: null,
    predictedClass: null,
    classProbs: null,
    edges: [],
    selectedEdges: [],
    emptyReason: reason,
  };
}

function explanationPanel(
  title: string,
  explanation: GraphExplanationPayload,
  distance: number | null,
): PanelView {
  return {
    title,
    graphId: explanation.graph_id,
    distance,
    predictedClass: explanation.predicted_class,
    classProbs: explanation.class_probs,
    edges: explanation.edges,
    selectedEdges: explanation.edges.filter((e) => e.selected),
    emptyReason: null,
  };
}

function referencePanel(title: string, ref: ReferencePayload): PanelView {
  if (ref.edges === undefined || ref.predicted_class === undefined || ref.class_probs === undefined) {
    return { ...emptyPanel(title, "reference has no explanation attached"), graphId: ref.graph_id, distance: ref.distance };
  }
  return explanationPanel(
    title,
    {
      graph_id: ref.graph_id,
      predicted_class: ref.predicted_class,
      class_probs: ref.class_probs,
      edges: ref.edges,
    },
    ref.distance,
  );
}

export function graphComparisonView(
  target: GraphExplanationPayload | null,
  references: ReferenceSetPayload | null,
  referencesError: string | null = null,
): ComparisonView {
  const targetPanel = target
    ? explanationPanel("Target", target, null)
    : emptyPanel("Target", "no graph selected");
  if (!references) {
    const reason = referencesError ?? "references unavailable";
    return {
      target: targetPanel,
      sameClass: emptyPanel("Same class", reason),
      diffClass: emptyPanel("Different class", reason),
    };
  }
  return {
    target: targetPanel,
    sameClass: referencePanel("Same class", references.same_class),
    diffClass: referencePanel("Different class", references.diff_class),
  };
}
