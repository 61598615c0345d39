import type { ProfilePayload, ScenarioBody, TablesPayload } from "./types.js";

/** The whole form is one selection (an option value) per engine parameter
 * plus a free-text label. Values come verbatim from the tables payload, so
 * serialization is a plain copy and loses nothing. */
export interface FormState {
  selections: Record<string, number | string>;
  label: string;
}

export function defaultForm(tables: TablesPayload): FormState {
  const selections: Record<string, number | string> = {};
  for (const parameter of tables.parameters) {
    const first = parameter.options[0];
    if (first === undefined) {
      throw new Error(`parameter ${parameter.field} has no options`);
    }
    selections[parameter.field] = first.value;
  }
  return { selections, label: "" };
}

export function scenarioFromForm(form: FormState): ScenarioBody {
  const body: ScenarioBody = { ...form.selections };
  if (form.label) {
    body.label = form.label;
  }
  return body;
}

export function defaultProfile(): ProfilePayload {
  return {
    age: 55,
    care_home_resident: false,
    occupational_exposure: "none",
    medical_condition: "none",
    system_relevant_job: false,
    teacher: false,
  };
}

export const EXPOSURE_CHOICES = ["none", "low", "moderate", "high", "very_high"] as const;
export const CONDITION_CHOICES = [
  "none",
  "moderate",
  "severe",
  "dementia_or_mental_handicap",
] as const;
