// Browser adapter: wires the pure core (controls, render, basket, api) to
// the DOM and keeps the control state mirrored in the URL hash so result
// pages are shareable.

import { ApiClient } from "./api.js";
import {
  Basket,
  addToBasket,
  canExport,
  exportJson,
  removeFromBasket,
  setNote,
  worksheetRequest,
} from "./basket.js";
import {
  ControlState,
  buildSelectBody,
  canSubmit,
  decodeStateFromHash,
  encodeStateToHash,
  setMode,
  setParam,
  initialState,
} from "./controls.js";
import { renderResults, renderSearchPanel, escapeHtml } from "./render.js";
import type { Catalog, Mode, SelectResponse } from "./types.js";

const api = new ApiClient("");

let catalog: Catalog;
let state: ControlState;
let lastResponse: SelectResponse | null = null;
let basket: Basket = [];
let blockedReason = "";

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function syncHash() {
  window.location.hash = encodeStateToHash(state, catalog);
}

function redrawPanel() {
  $("panel").innerHTML = renderSearchPanel(state, catalog, blockedReason);
  wirePanel();
}

function redrawResults() {
  const ids = new Set(basket.map((b) => b.id));
  $("results").innerHTML = lastResponse ? renderResults(lastResponse, ids) : "";
  for (const button of document.querySelectorAll<HTMLButtonElement>(".basket-toggle")) {
    button.addEventListener("click", (event) => {
      event.preventDefault();
      const id = button.dataset.id!;
      basket = basket.some((b) => b.id === id)
        ? removeFromBasket(basket, id)
        : addToBasket(basket, id, lastResponse!);
      redrawResults();
      redrawBasket();
    });
  }
}

function redrawBasket() {
  const container = $("basket");
  const rows = basket
    .map(
      (b) =>
        `<li data-id="${escapeHtml(b.id)}"><strong>${escapeHtml(b.id)}</strong> ` +
        `<span class="basket-term">(${escapeHtml(b.term)})</span> ${escapeHtml(b.text)} ` +
        `<input class="note" data-id="${escapeHtml(b.id)}" placeholder="note" value="${escapeHtml(b.note)}">` +
        `<button class="drop" data-id="${escapeHtml(b.id)}">drop</button></li>`,
    )
    .join("");
  container.innerHTML =
    `<h2>Basket (${basket.length})</h2><ul>${rows}</ul>` +
    `<button id="export-json"${canExport(basket) ? "" : " disabled"}>Download JSON</button>` +
    `<button id="export-exercise"${canExport(basket) ? "" : " disabled"}>Build exercise</button>` +
    `<pre id="exercise-out"></pre>`;
  for (const input of container.querySelectorAll<HTMLInputElement>("input.note")) {
    input.addEventListener("change", () => {
      basket = setNote(basket, input.dataset.id!, input.value);
    });
  }
  for (const button of container.querySelectorAll<HTMLButtonElement>("button.drop")) {
    button.addEventListener("click", () => {
      basket = removeFromBasket(basket, button.dataset.id!);
      redrawBasket();
      redrawResults();
    });
  }
  $("export-json").addEventListener("click", () => {
    const blob = new Blob([exportJson(basket)], { type: "application/json" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "seeds.json";
    link.click();
    URL.revokeObjectURL(link.href);
  });
  $("export-exercise").addEventListener("click", async () => {
    try {
      const request = worksheetRequest(basket, {
        level: state.targetLevel,
        mode: "same_msd",
        seed: 1,
      });
      const doc = await api.exercises(request);
      $("exercise-out").textContent = JSON.stringify(doc.exercise, null, 2);
    } catch (err) {
      $("exercise-out").textContent = String(err);
    }
  });
}

function wirePanel() {
  const form = $("search-form") as HTMLFormElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    if (!canSubmit(state)) return;
    syncHash();
    const outcome = await api.select(buildSelectBody(state, catalog));
    if (outcome.kind === "stale") return;
    if (outcome.kind === "error") {
      blockedReason = outcome.error.errors.join("; ");
      redrawPanel();
      return;
    }
    blockedReason = "";
    lastResponse = outcome.response;
    redrawResults();
  });
  ($("term") as HTMLInputElement).addEventListener("input", (event) => {
    state = { ...state, term: (event.target as HTMLInputElement).value };
    ($("submit") as HTMLButtonElement).disabled = !canSubmit(state);
  });
  ($("match-kind") as HTMLSelectElement).addEventListener("change", (event) => {
    state = { ...state, matchKind: (event.target as HTMLSelectElement).value };
  });
  ($("target-level") as HTMLSelectElement).addEventListener("change", (event) => {
    state = { ...state, targetLevel: (event.target as HTMLSelectElement).value };
  });
  ($("profile") as HTMLSelectElement).addEventListener("change", (event) => {
    const profile = (event.target as HTMLSelectElement).value;
    const fresh = initialState(catalog, profile);
    state = { ...fresh, term: state.term, targetLevel: state.targetLevel };
    blockedReason = "";
    redrawPanel();
  });
  ($("retain") as HTMLInputElement).addEventListener("change", (event) => {
    state = { ...state, retainSuboptimal: (event.target as HTMLInputElement).checked };
  });
  for (const button of form.querySelectorAll<HTMLButtonElement>("button.mode")) {
    button.addEventListener("click", (event) => {
      event.preventDefault();
      const outcome = setMode(
        state,
        catalog,
        button.dataset.criterion!,
        button.dataset.mode! as Mode,
      );
      if (outcome.ok) {
        state = outcome.state;
        blockedReason = "";
      } else {
        blockedReason = outcome.reason;
      }
      redrawPanel();
    });
  }
  for (const input of form.querySelectorAll<HTMLInputElement>("input[data-param]")) {
    input.addEventListener("change", () => {
      const id = input.dataset.criterion!;
      const name = input.dataset.param!;
      const value =
        input.type === "checkbox"
          ? input.checked
          : input.type === "number"
            ? Number(input.value)
            : input.value.split(",").map((s) => s.trim()).filter(Boolean);
      const outcome = setParam(state, catalog, id, name, value);
      if (outcome.ok) state = outcome.state;
      else blockedReason = outcome.reason;
      redrawPanel();
    });
  }
}

async function start() {
  catalog = await api.criteria();
  state = decodeStateFromHash(window.location.hash, catalog);
  redrawPanel();
  redrawBasket();
  window.addEventListener("hashchange", () => {
    state = decodeStateFromHash(window.location.hash, catalog);
    redrawPanel();
  });
}

start().catch((err) => {
  document.body.innerHTML = `<p class="blocked">Failed to load criterion catalog: ${escapeHtml(String(err))}</p>`;
});
