/** Browser bootstrap: wires controls to the controller and re-renders the
 * active views on every store change. */

import { ApiClient } from "./api.js";
import { Controller } from "./controller.js";
import { Store } from "./state.js";
import {
  el,
  renderAttributionBars,
  renderComparison,
  renderGlobalView,
  renderNodeExplanation,
  renderSummaryBars,
} from "./render.js";
import { attributionView, summaryView } from "./views/attribution.js";
import { globalView } from "./views/globalView.js";
import { graphComparisonView } from "./views/graphComparison.js";
import { nodeExplanationView } from "./views/nodeExplanation.js";

declare global {
  interface Window {
    INGREX_API_BASE?: string;
  }
}

const api = new ApiClient(window.INGREX_API_BASE ?? "");
const store = new Store();
const controller = new Controller(api, store);

const root = document.getElementById("app")!;
const header = el("div", { class: "header" });
const bannerBox = el("div", { class: "banner-box" });
const controlsBox = el("div", { class: "controls" });
const content = el("div", { class: "content" });
root.append(header, bannerBox, controlsBox, content);

const datasetSelect = el("select", { class: "dataset-select" });
datasetSelect.addEventListener("change", () => {
  const dataset = store.state.datasets.find((d) => d.id === datasetSelect.value);
  if (dataset) void controller.selectDataset(dataset);
});
header.append(el("span", { class: "brand" }, "ingrex"), datasetSelect);

function numberInput(label: string, value: number, step: string, onCommit: (v: number) => void): HTMLElement {
  const input = el("input", { type: "number", value: String(value), step });
  input.addEventListener("change", () => onCommit(Number(input.value)));
  return el("label", { class: "control" }, `${label} `, input);
}

function rebuildControls(): void {
  controlsBox.replaceChildren();
  const { controls, activeDataset } = store.state;
  if (!activeDataset) return;
  if (activeDataset.task === "node_classification") {
    controlsBox.append(
      numberInput("top-k", controls.topK, "1", (v) => void controller.setWalkControls(v, controls.d)),
      numberInput("keep-going d", controls.d, "0.05", (v) => void controller.setWalkControls(controls.topK, v)),
      numberInput("hop level", controls.hopLevel, "1", (v) => controller.setHopLevel(v)),
      numberInput("shap samples", controls.nSamples, "64", (v) =>
        store.update((s) => {
          s.controls.nSamples = v;
        }),
      ),
      numberInput("seed", controls.seed, "1", (v) =>
        store.update((s) => {
          s.controls.seed = v;
        }),
      ),
    );
  } else {
    const strategySelect = el("select", {});
    for (const kind of ["top_k", "threshold"]) {
      const option = el("option", { value: kind }, kind);
      if (kind === controls.strategy) option.setAttribute("selected", "selected");
      strategySelect.appendChild(option);
    }
    strategySelect.addEventListener("change", () =>
      void controller.setStrategy(strategySelect.value as "top_k" | "threshold", store.state.controls.strategyValue),
    );
    controlsBox.append(
      el("label", { class: "control" }, "strategy ", strategySelect),
      numberInput("value", controls.strategyValue, "1", (v) =>
        void controller.setStrategy(store.state.controls.strategy, v),
      ),
    );
    const graphPicker = el("input", { type: "number", value: String(store.state.selectedGraph ?? 0), step: "1" });
    graphPicker.addEventListener("change", () => void controller.clickGraph(Number(graphPicker.value)));
    controlsBox.append(el("label", { class: "control" }, "graph ", graphPicker));
  }
}

function render(): void {
  const state = store.state;
  datasetSelect.replaceChildren(
    ...state.datasets.map((d) => {
      const option = el("option", { value: d.id }, `${d.id} (${d.task})`);
      if (state.activeDataset?.id === d.id) option.setAttribute("selected", "selected");
      return option;
    }),
  );
  bannerBox.replaceChildren();
  if (state.banner) {
    const banner = el("div", { class: "banner" }, state.banner, " ");
    const dismiss = el("button", {}, "dismiss");
    dismiss.addEventListener("click", () => store.setBanner(null));
    banner.appendChild(dismiss);
    bannerBox.appendChild(banner);
  }
  rebuildControls();
  content.replaceChildren();
  const dataset = state.activeDataset;
  if (!dataset) return;

  if (dataset.task === "node_classification") {
    const row = el("div", { class: "comparison-row" });
    const view = state.payloads.graphView;
    if (view && view.positions) {
      const model = globalView(view);
      const left = el("div", { class: "panel" });
      left.appendChild(el("h3", {}, `Global view of ${dataset.id}`));
      left.appendChild(
        renderGlobalView(model, 520, 420, state.selectedNode, (id) => {
          void controller.clickNode(id);
          void controller.requestAttribution(id);
        }),
      );
      row.appendChild(left);
      if (state.payloads.nodeExplanation) {
        const positions = new Map(model.nodes.map((n) => [n.id, { x: n.x, y: n.y }]));
        row.appendChild(
          renderNodeExplanation(
            nodeExplanationView(state.payloads.nodeExplanation, state.controls.hopLevel),
            positions,
            420,
            420,
          ),
        );
      }
    }
    content.appendChild(row);
    const chartRow = el("div", { class: "comparison-row" });
    if (state.payloads.attribution) {
      chartRow.appendChild(renderAttributionBars(attributionView(state.payloads.attribution)));
    }
    if (state.payloads.summary) {
      chartRow.appendChild(renderSummaryBars(summaryView(state.payloads.summary)));
    }
    const summaryButton = el("button", {}, "global feature summary");
    summaryButton.addEventListener("click", () => void controller.requestSummary());
    content.append(chartRow, summaryButton);
  } else {
    content.appendChild(
      renderComparison(
        graphComparisonView(state.payloads.graphExplanation, state.payloads.references, state.banner),
        340,
        300,
      ),
    );
  }
}

store.subscribe(render);
void controller.start();
