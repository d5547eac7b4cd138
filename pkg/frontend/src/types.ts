// JSON shapes served by the riskreg HTTP API. These mirror the service
// responses verbatim; the UI renders them without recomputing anything.

export interface AssetJson {
  name: string;
  category: string;
  owner: string;
  value: number;
}

export interface LikelihoodJson {
  name: string;
  likelihood: number;
}

export interface EntryJson {
  id: number;
  asset: AssetJson;
  threat: LikelihoodJson;
  vulnerability: LikelihoodJson;
  risk: number;
  band: string;
  treatment: string;
}

export interface RegisterResponse {
  revision: number;
  appetite: number;
  entries: EntryJson[];
}

export interface HeatmapCellJson {
  column: number;
  band: string;
  entry_ids: number[];
}

export interface HeatmapRowJson {
  asset_value: number;
  cells: HeatmapCellJson[];
}

export interface HeatmapResponse {
  revision: number;
  appetite: number;
  rows: HeatmapRowJson[];
}

export interface ControlJson {
  id: string;
  name: string;
  category: string;
  functions: string[];
  applies_to: string[];
  threat_reduction: number;
  vulnerability_reduction: number;
  compensating_for: string | null;
}

export interface DefenseInDepthJson {
  satisfied: boolean;
  missing_categories: string[];
}

export interface WhatifDeltaJson {
  entry_id: number;
  risk_before: number;
  risk_after: number;
  band_before: string;
  band_after: string;
  defense_in_depth: DefenseInDepthJson;
}

export interface WhatifResponse {
  revision: number;
  appetite: number;
  total_before: number;
  total_after: number;
  deltas: WhatifDeltaJson[];
}

export interface WhatifAssignment {
  entry_id: number;
  control_ids: string[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  field?: string;
}

export interface EntryPatch {
  asset?: Partial<AssetJson>;
  threat?: Partial<LikelihoodJson>;
  vulnerability?: Partial<LikelihoodJson>;
}
