// HTML-string renderers. Keeping these DOM-free makes the whole result
// presentation testable in node; the browser adapter only assigns
// innerHTML and wires events.

import type { Catalog, ResultEntry, SelectResponse } from "./types.js";
import type { ControlState } from "./controls.js";
import { canSubmit } from "./controls.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

// token indices (1-based) worth highlighting: evidence of the criteria
// that actually filtered the sentence, or of any triggered criterion for
// ranked entries
function evidenceIndices(entry: ResultEntry): Map<number, string[]> {
  const wanted = new Set(entry.filtered_by);
  const marks = new Map<number, string[]>();
  for (const cv of entry.criteria) {
    const relevant = wanted.size ? wanted.has(cv.id) && cv.triggered : cv.triggered;
    if (!relevant) continue;
    for (const index of cv.evidence) {
      const existing = marks.get(index) ?? [];
      existing.push(cv.id);
      marks.set(index, existing);
    }
  }
  return marks;
}

export function renderSentence(entry: ResultEntry): string {
  const marks = evidenceIndices(entry);
  const tokens = entry.text.split(" ");
  return tokens
    .map((form, i) => {
      const ids = marks.get(i + 1);
      const safe = escapeHtml(form);
      if (!ids) return safe;
      return `<mark data-criteria="${escapeHtml(ids.join(" "))}" title="${escapeHtml(ids.join(", "))}">${safe}</mark>`;
    })
    .join(" ");
}

function renderSubscores(entry: ResultEntry, maxSubscore: number): string {
  const rows = Object.entries(entry.subscores)
    .map(([cid, sub]) => {
      const width = maxSubscore > 0 ? Math.round((100 * sub) / maxSubscore) : 0;
      return (
        `<div class="subscore" data-criterion="${escapeHtml(cid)}">` +
        `<span class="subscore-label">${escapeHtml(cid)}</span>` +
        `<span class="bar" style="width:${width}%"></span>` +
        `<span class="subscore-value">${sub}</span></div>`
      );
    })
    .join("");
  return `<div class="subscores">${rows}</div>`;
}

function renderBadges(entry: ResultEntry): string {
  return entry.filtered_by
    .map((cid) => `<span class="badge" data-criterion="${escapeHtml(cid)}">${escapeHtml(cid)}</span>`)
    .join(" ");
}

function renderEntry(entry: ResultEntry, maxSubscore: number, inBasket: boolean): string {
  const rank = entry.rank === null ? "–" : String(entry.rank);
  const basketLabel = inBasket ? "remove" : "keep";
  return (
    `<article class="result${entry.filtered_by.length ? " rejected" : ""}" data-id="${escapeHtml(entry.id)}">` +
    `<header><span class="rank">${rank}</span>` +
    `<span class="goodness" title="goodness">G=${entry.goodness}</span>` +
    `<span class="sid">${escapeHtml(entry.id)}</span>` +
    `<button class="basket-toggle" data-id="${escapeHtml(entry.id)}">${basketLabel}</button>` +
    `</header>` +
    `<p class="sentence">${renderSentence(entry)}</p>` +
    (entry.filtered_by.length ? `<div class="badges">${renderBadges(entry)}</div>` : "") +
    (Object.keys(entry.subscores).length ? renderSubscores(entry, maxSubscore) : "") +
    `<details><summary>criterion values</summary><table class="criteria">` +
    entry.criteria
      .map(
        (cv) =>
          `<tr class="${cv.triggered ? "triggered" : ""}"><td>${escapeHtml(cv.id)}</td>` +
          `<td>${cv.value}</td><td>${cv.triggered ? "hit" : ""}</td></tr>`,
      )
      .join("") +
    `</table></details></article>`
  );
}

export function renderResults(response: SelectResponse, basketIds: Set<string> = new Set()): string {
  if (response.status === "no_matches") {
    return `<p class="empty">No sentences match the search term.</p>`;
  }
  const maxSubscore = Math.max(
    1,
    ...response.results.flatMap((r) => Object.values(r.subscores)),
  );
  const ranked = response.results
    .map((r) => renderEntry(r, maxSubscore, basketIds.has(r.id)))
    .join("");
  const rejected = response.rejected
    .map((r) => renderEntry(r, maxSubscore, basketIds.has(r.id)))
    .join("");
  const suboptimalHeading = response.config_echo.retain_suboptimal
    ? "Suboptimal (ranked by number of filter hits)"
    : "Filtered out";
  return (
    `<section class="ranked"><h2>Ranked candidates (${response.results.length})</h2>${ranked}</section>` +
    (response.rejected.length
      ? `<section class="suboptimal"><h2>${suboptimalHeading} (${response.rejected.length})</h2>${rejected}</section>`
      : "")
  );
}

export function renderSearchPanel(state: ControlState, catalog: Catalog, blockedReason = ""): string {
  const levelOptions = ["A1", "A2", "B1", "B2", "C1"]
    .map((l) => `<option value="${l}"${l === state.targetLevel ? " selected" : ""}>${l}</option>`)
    .join("");
  const kindOptions = ["wordform", "lemma", "pos_pattern"]
    .map((k) => `<option value="${k}"${k === state.matchKind ? " selected" : ""}>${k}</option>`)
    .join("");
  const profileOptions = Object.keys(catalog.profiles)
    .map((p) => `<option value="${p}"${p === state.profile ? " selected" : ""}>${p}</option>`)
    .join("");

  const rows = catalog.criteria
    .map((spec) => {
      const current = state.modes[spec.id] ?? "off";
      const modeButtons = (["off", "filter", "ranker"] as const)
        .map((mode) => {
          const allowed = spec.modes.includes(mode);
          return (
            `<button class="mode${current === mode ? " active" : ""}"` +
            ` data-criterion="${spec.id}" data-mode="${mode}"` +
            `${allowed ? "" : " disabled title=\"binary criteria cannot rank\""}>${mode}</button>`
          );
        })
        .join("");
      const params = spec.params
        .map((p) => {
          const value = state.params[spec.id]?.[p.name] ?? p.default;
          const rendered =
            p.type === "boolean"
              ? `<input type="checkbox" data-criterion="${spec.id}" data-param="${p.name}"${value ? " checked" : ""}>`
              : p.type === "number"
                ? `<input type="number" step="any" data-criterion="${spec.id}" data-param="${p.name}" value="${value}">`
                : `<input type="text" data-criterion="${spec.id}" data-param="${p.name}" value="${escapeHtml((value as unknown[]).join(","))}" placeholder="comma-separated">`;
          return `<label class="param">${escapeHtml(p.name)} ${rendered}</label>`;
        })
        .join("");
      return (
        `<tr class="criterion" data-id="${spec.id}"><td>${spec.number}</td>` +
        `<td title="${escapeHtml(spec.description)}">${spec.id}</td>` +
        `<td>${modeButtons}</td><td>${params}</td></tr>`
      );
    })
    .join("");

  return (
    `<form id="search-form">` +
    `<div class="query-row">` +
    `<input id="term" type="text" placeholder="search term" value="${escapeHtml(state.term)}">` +
    `<select id="match-kind">${kindOptions}</select>` +
    `<select id="target-level">${levelOptions}</select>` +
    `<select id="profile">${profileOptions}</select>` +
    `<label><input id="retain" type="checkbox"${state.retainSuboptimal ? " checked" : ""}> keep suboptimal</label>` +
    `<button id="submit" type="submit"${canSubmit(state) ? "" : " disabled"}>Select</button>` +
    `</div>` +
    (blockedReason ? `<p class="blocked" role="alert">${escapeHtml(blockedReason)}</p>` : "") +
    `<details class="advanced" open><summary>Criteria</summary>` +
    `<table class="criteria-table">${rows}</table></details>` +
    `</form>`
  );
}
