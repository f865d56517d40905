/** DOM/SVG rendering helpers. Everything here draws the pure view models
 * from ./views; no scores are computed in this layer. */

import type { ComparisonView, PanelView } from "./views/graphComparison.js";
import type { AttributionView, SummaryView } from "./views/attribution.js";
import type { GlobalViewModel } from "./views/globalView.js";
import type { NodeExplanationView } from "./views/nodeExplanation.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  node.append(...children);
  return node;
}

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

interface Extent {
  toX(x: number): number;
  toY(y: number): number;
}

function fitExtent(xs: number[], ys: number[], width: number, height: number, pad = 24): Extent {
  const minX = Math.min(...xs), maxX = Math.max(...xs);
  const minY = Math.min(...ys), maxY = Math.max(...ys);
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  return {
    toX: (x) => pad + ((x - minX) / spanX) * (width - 2 * pad),
    toY: (y) => pad + ((y - minY) / spanY) * (height - 2 * pad),
  };
}

export function renderGlobalView(
  model: GlobalViewModel,
  width: number,
  height: number,
  selected: number | null,
  onNodeClick: (id: number) => void,
): SVGElement {
  const svg = svgEl("svg", { viewBox: `0 0 ${width} ${height}`, class: "graph-canvas" });
  const extent = fitExtent(
    model.nodes.map((n) => n.x),
    model.nodes.map((n) => n.y),
    width,
    height,
  );
  for (const [s, d] of model.edges) {
    const a = model.nodes[s];
    const b = model.nodes[d];
    svg.appendChild(
      svgEl("line", {
        x1: String(extent.toX(a.x)), y1: String(extent.toY(a.y)),
        x2: String(extent.toX(b.x)), y2: String(extent.toY(b.y)),
        class: "graph-edge",
      }),
    );
  }
  for (const node of model.nodes) {
    const circle = svgEl("circle", {
      cx: String(extent.toX(node.x)),
      cy: String(extent.toY(node.y)),
      r: node.id === selected ? "9" : "6",
      fill: node.color,
      class: node.id === selected ? "graph-node selected" : "graph-node",
      "data-node-id": String(node.id),
    });
    circle.addEventListener("click", () => onNodeClick(node.id));
    svg.appendChild(circle);
  }
  return svg;
}

export function renderNodeExplanation(
  view: NodeExplanationView,
  positions: Map<number, { x: number; y: number }>,
  width: number,
  height: number,
): HTMLElement {
  const container = el("div", { class: "panel" });
  container.appendChild(el("h3", {}, `Explanation of node ${view.target}`));
  if (view.warning) {
    container.appendChild(el("div", { class: "warning-badge" }, view.warning));
  }
  const visible = view.nodes.filter((n) => n.visible && positions.has(n.id));
  if (visible.length === 0) {
    container.appendChild(el("p", { class: "muted" }, "nothing within the selected hop level"));
    return container;
  }
  const extent = fitExtent(
    visible.map((n) => positions.get(n.id)!.x),
    visible.map((n) => positions.get(n.id)!.y),
    width,
    height,
  );
  const svg = svgEl("svg", { viewBox: `0 0 ${width} ${height}`, class: "graph-canvas" });
  for (const edge of view.edges) {
    if (!edge.visible || !positions.has(edge.src) || !positions.has(edge.dst)) continue;
    const a = positions.get(edge.src)!;
    const b = positions.get(edge.dst)!;
    const x1 = extent.toX(a.x), y1 = extent.toY(a.y);
    const x2 = extent.toX(b.x), y2 = extent.toY(b.y);
    svg.appendChild(
      svgEl("line", {
        x1: String(x1), y1: String(y1), x2: String(x2), y2: String(y2),
        class: "contribution-edge",
        "stroke-width": String(Math.max(edge.width, 0.5)),
      }),
    );
    const label = svgEl("text", {
      x: String((x1 + x2) / 2),
      y: String((y1 + y2) / 2 - 4),
      class: "edge-label",
    });
    label.textContent = edge.label;
    svg.appendChild(label);
  }
  for (const node of visible) {
    const p = positions.get(node.id)!;
    svg.appendChild(
      svgEl("circle", {
        cx: String(extent.toX(p.x)),
        cy: String(extent.toY(p.y)),
        r: node.isTarget ? "10" : "6",
        class: node.isTarget ? "graph-node target" : "graph-node",
      }),
    );
    const label = svgEl("text", {
      x: String(extent.toX(p.x) + 10),
      y: String(extent.toY(p.y) - 8),
      class: "node-label",
    });
    label.textContent = `${node.id} (${node.score.toFixed(3)})`;
    svg.appendChild(label);
  }
  container.appendChild(svg);
  return container;
}

function circularPositions(panel: PanelView): Map<number, { x: number; y: number }> {
  let maxId = 0;
  for (const e of panel.edges) maxId = Math.max(maxId, e.src, e.dst);
  const n = maxId + 1;
  const positions = new Map<number, { x: number; y: number }>();
  for (let id = 0; id < n; id++) {
    const angle = (2 * Math.PI * id) / n;
    positions.set(id, { x: Math.cos(angle), y: Math.sin(angle) });
  }
  return positions;
}

export function renderComparisonPanel(panel: PanelView, width: number, height: number): HTMLElement {
  const container = el("div", { class: "panel" });
  const heading = panel.distance !== null
    ? `${panel.title} (graph ${panel.graphId}, distance ${panel.distance.toFixed(4)})`
    : panel.graphId !== null
      ? `${panel.title} (graph ${panel.graphId})`
      : panel.title;
  container.appendChild(el("h3", {}, heading));
  if (panel.emptyReason !== null) {
    container.appendChild(el("p", { class: "muted" }, panel.emptyReason));
    return container;
  }
  if (panel.predictedClass !== null && panel.classProbs !== null) {
    const probs = panel.classProbs.map((p) => p.toFixed(3)).join(", ");
    container.appendChild(el("p", { class: "muted" }, `predicted class ${panel.predictedClass} [${probs}]`));
  }
  const positions = circularPositions(panel);
  const extent = fitExtent(
    [...positions.values()].map((p) => p.x),
    [...positions.values()].map((p) => p.y),
    width,
    height,
  );
  const svg = svgEl("svg", { viewBox: `0 0 ${width} ${height}`, class: "graph-canvas" });
  for (const edge of panel.edges) {
    const a = positions.get(edge.src)!;
    const b = positions.get(edge.dst)!;
    svg.appendChild(
      svgEl("line", {
        x1: String(extent.toX(a.x)), y1: String(extent.toY(a.y)),
        x2: String(extent.toX(b.x)), y2: String(extent.toY(b.y)),
        class: edge.selected ? "mask-edge selected" : "mask-edge",
        "stroke-width": edge.selected ? "3" : "1",
      }),
    );
  }
  for (const [id, p] of positions) {
    svg.appendChild(
      svgEl("circle", {
        cx: String(extent.toX(p.x)), cy: String(extent.toY(p.y)), r: "4",
        class: "graph-node", "data-node-id": String(id),
      }),
    );
  }
  container.appendChild(svg);
  return container;
}

export function renderComparison(view: ComparisonView, width: number, height: number): HTMLElement {
  const row = el("div", { class: "comparison-row" });
  row.append(
    renderComparisonPanel(view.target, width, height),
    renderComparisonPanel(view.sameClass, width, height),
    renderComparisonPanel(view.diffClass, width, height),
  );
  return row;
}

export function renderAttributionBars(view: AttributionView): HTMLElement {
  const container = el("div", { class: "panel" });
  container.appendChild(el("h3", {}, `Feature attribution, node ${view.nodeId} (${view.method})`));
  container.appendChild(
    el(
      "p",
      { class: "muted" },
      `class ${view.explainedClass}: base ${view.baseValue.toFixed(4)} + contributions = ` +
        `f(x) ${view.predictedValue.toFixed(4)}`,
    ),
  );
  if (view.bars.length === 0) {
    container.appendChild(el("p", { class: "muted" }, "all attributions are zero"));
    return container;
  }
  const maxMag = view.bars[0].magnitude;
  for (const bar of view.bars) {
    const widthPct = (bar.magnitude / maxMag) * 100;
    container.appendChild(
      el(
        "div",
        { class: "bar-row" },
        el("span", { class: "bar-label" }, `feature ${bar.feature}`),
        el("div", {
          class: bar.value >= 0 ? "bar positive" : "bar negative",
          style: `width:${widthPct.toFixed(1)}%`,
        }),
        el("span", { class: "bar-value" }, bar.value.toFixed(4)),
      ),
    );
  }
  return container;
}

export function renderSummaryBars(view: SummaryView): HTMLElement {
  const container = el("div", { class: "panel" });
  container.appendChild(el("h3", {}, "Mean |attribution| per feature"));
  const maxMag = Math.max(...view.bars.map((b) => b.magnitude), 1e-12);
  for (const bar of view.bars) {
    container.appendChild(
      el(
        "div",
        { class: "bar-row" },
        el("span", { class: "bar-label" }, `feature ${bar.feature}`),
        el("div", { class: "bar positive", style: `width:${((bar.magnitude / maxMag) * 100).toFixed(1)}%` }),
        el("span", { class: "bar-value" }, bar.magnitude.toFixed(4)),
      ),
    );
  }
  return container;
}
