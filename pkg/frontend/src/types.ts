// Shapes of the service JSON. The UI renders these verbatim; it computes
// no score and holds no band constant of its own.

export type RiskColor = "green" | "yellow" | "orange" | "red";

export interface BandOption {
  score: number | null;
  label: string;
  min?: number | null;
  max?: number | null;
  value: number | string;
}

export interface ParameterDef {
  field: string;
  symbol: string;
  title: string;
  kind: "count" | "number" | "enum";
  options: BandOption[];
}

export interface TablesPayload {
  max_persons: number;
  parameters: ParameterDef[];
}

export interface AssessmentPayload {
  label: string;
  severity: string;
  refused: boolean;
  no_exposure: boolean;
  scores: Record<string, number> | null;
  f: number | null;
  risk: RiskColor | null;
  recommendation: string | null;
  notes: string[];
}

export interface ChangePayload {
  field: string;
  to: number | string;
  band: string;
  score: number;
}

export interface MitigationPayload {
  changes: ChangePayload[];
  new_f: number;
  new_risk: RiskColor;
  recommendation: string;
}

export interface WhatIfPayload {
  original: AssessmentPayload;
  mitigations: MitigationPayload[];
}

export interface ProfilePayload {
  age: number;
  care_home_resident: boolean;
  occupational_exposure: string;
  medical_condition: string;
  system_relevant_job: boolean;
  teacher: boolean;
}

export type ScenarioBody = Record<string, number | string>;
