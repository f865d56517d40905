/** Render models for the feature-attribution charts.
 *
 * Local view: signed horizontal bars ordered by |phi| (zero bars dropped)
 * with the base value and the reconstructed model output; the output is
 * recomputed from the full payload so hiding zero bars cannot skew it.
 * Global view: mean |phi| ranking bars.
 */

import type { AttributionSummaryPayload, FeatureAttributionPayload } from "../types.js";

export interface AttributionBar {
  feature: number;
  value: number;
  magnitude: number;
}

export interface AttributionView {
  nodeId: number;
  explainedClass: number;
  method: string;
  baseValue: number;
  /** base_value + sum(phi): the model output on the explained instance. */
  predictedValue: number;
  bars: AttributionBar[];
}

export function attributionView(payload: FeatureAttributionPayload): AttributionView {
  const bars = payload.phi
    .map((value, feature) => ({ feature, value, magnitude: Math.abs(value) }))
    .filter((bar) => bar.magnitude > 0)
    .sort((a, b) => b.magnitude - a.magnitude || a.feature - b.feature);
  const predicted = payload.phi.reduce((acc, v) => acc + v, payload.base_value);
  return {
    nodeId: payload.node_id,
    explainedClass: payload.explained_class,
    method: payload.method,
    baseValue: payload.base_value,
    predictedValue: predicted,
    bars,
  };
}

export interface SummaryView {
  bars: AttributionBar[];
}

export function summaryView(payload: AttributionSummaryPayload): SummaryView {
  return {
    bars: payload.ranking.map((feature) => ({
      feature,
      value: payload.mean_abs_phi[feature],
      magnitude: payload.mean_abs_phi[feature],
    })),
  };
}
