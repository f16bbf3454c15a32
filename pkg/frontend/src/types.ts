// Published service schemas. The UI builds requests only through these
// shapes and computes no criterion values of its own.

export type Mode = "off" | "filter" | "ranker";

export interface CriterionParamSpec {
  name: string;
  default: unknown;
  type: "boolean" | "number" | "array";
}

export interface CriterionSpec {
  id: string;
  number: number;
  group: string;
  binary: boolean;
  positive: boolean;
  modes: Mode[];
  params: CriterionParamSpec[];
  description: string;
}

export interface Catalog {
  criteria: CriterionSpec[];
  profiles: Record<string, Record<string, Mode>>;
}

export interface Query {
  term: string;
  match_kind: string;
  pos: string | null;
  target_level: string;
  max_candidates: number;
}

export interface CriterionSetting {
  mode: Mode;
  params: Record<string, unknown>;
}

export interface ConfigDoc {
  query: Query;
  retain_suboptimal: boolean;
  criteria: Record<string, CriterionSetting>;
}

export interface SelectRequest {
  query: Query;
  config: ConfigDoc;
}

export interface CriterionValue {
  id: string;
  value: number;
  triggered: boolean;
  evidence: number[];
}

export interface ResultEntry {
  id: string;
  text: string;
  rank: number | null;
  goodness: number;
  subscores: Record<string, number>;
  criteria: CriterionValue[];
  filtered_by: string[];
}

export interface SelectResponse {
  query: Query;
  config_echo: ConfigDoc;
  status: "ok" | "no_matches";
  results: ResultEntry[];
  rejected: ResultEntry[];
}

export interface ExerciseDoc {
  id: string;
  mode: string;
  level: string;
  seed: number;
  word_bank: string[];
  bank_msd: string | null;
  items: { sentence_id: string; gapped_text: string; gap_index: number }[];
}

export interface ExerciseResponse {
  seed: number;
  exercise: ExerciseDoc;
}
