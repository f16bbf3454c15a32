// Curation basket: sentences the teacher keeps while browsing results,
// with per-sentence notes, exportable as JSON or as a word-bank exercise
// request. Every entry remembers the search term that found it, since an
// exercise needs one gap lemma per sentence.

import type { ResultEntry, SelectResponse } from "./types.js";

export interface BasketEntry {
  id: string;
  text: string;
  term: string;
  note: string;
}

export type Basket = BasketEntry[];

export function addToBasket(
  basket: Basket,
  id: string,
  lastResponse: SelectResponse,
): Basket {
  const all: ResultEntry[] = [...lastResponse.results, ...lastResponse.rejected];
  const entry = all.find((r) => r.id === id);
  if (!entry) throw new Error(`sentence ${id} is not in the current result set`);
  if (basket.some((b) => b.id === id)) return basket;
  return [
    ...basket,
    { id, text: entry.text, term: lastResponse.query.term, note: "" },
  ];
}

export function removeFromBasket(basket: Basket, id: string): Basket {
  return basket.filter((b) => b.id !== id);
}

export function setNote(basket: Basket, id: string, note: string): Basket {
  return basket.map((b) => (b.id === id ? { ...b, note } : b));
}

export function canExport(basket: Basket): boolean {
  return basket.length > 0;
}

export function exportJson(basket: Basket): string {
  return JSON.stringify({ seeds: basket }, null, 2);
}

export interface WorksheetRequestOptions {
  level: string;
  mode: "same_msd" | "mixed_pos";
  seed: number;
  profile?: string;
}

export function worksheetRequest(basket: Basket, options: WorksheetRequestOptions) {
  if (!canExport(basket)) throw new Error("basket is empty");
  const terms = [...new Set(basket.map((b) => b.term))];
  return {
    profile: options.profile ?? "permissive",
    query: { term: terms[0], target_level: options.level },
    terms,
    level: options.level,
    mode: options.mode,
    seed: options.seed,
  };
}
