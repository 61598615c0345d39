import { CONDITION_CHOICES, EXPOSURE_CHOICES, type FormState } from "./form.js";
import type {
  AssessmentPayload,
  MitigationPayload,
  ProfilePayload,
  TablesPayload,
} from "./types.js";

function element<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** One labeled select per engine parameter; options are the tables payload
 * verbatim (label shown, value submitted). */
export function renderControls(
  container: HTMLElement,
  tables: TablesPayload,
  form: FormState,
  onChange: (field: string, value: number | string) => void,
): void {
  container.textContent = "";
  for (const parameter of tables.parameters) {
    const wrapper = element("label", "control");
    wrapper.append(element("span", "control-title", parameter.title));
    const select = element("select");
    select.dataset.field = parameter.field;
    parameter.options.forEach((option, index) => {
      const node = element("option", undefined, option.label);
      node.value = String(index);
      select.append(node);
    });
    const current = form.selections[parameter.field];
    const selected = parameter.options.findIndex((option) => option.value === current);
    select.selectedIndex = selected >= 0 ? selected : 0;
    select.addEventListener("change", () => {
      const option = parameter.options[select.selectedIndex];
      if (option !== undefined) {
        onChange(parameter.field, option.value);
      }
    });
    wrapper.append(select);
    container.append(wrapper);
  }
}

export function renderProfilePanel(
  container: HTMLElement,
  profile: ProfilePayload,
  onChange: (profile: ProfilePayload) => void,
): void {
  container.textContent = "";

  const age = element("label", "control");
  age.append(element("span", "control-title", "Age"));
  const ageInput = element("input");
  ageInput.type = "number";
  ageInput.min = "0";
  ageInput.max = "150";
  ageInput.value = String(profile.age);
  ageInput.addEventListener("change", () => {
    const value = Number(ageInput.value);
    if (Number.isInteger(value) && value >= 0 && value <= 150) {
      onChange({ ...profile, age: value });
    } else {
      ageInput.value = String(profile.age);
    }
  });
  age.append(ageInput);
  container.append(age);

  const selects: Array<[string, keyof ProfilePayload, readonly string[]]> = [
    ["Occupational exposure to vulnerable or infectious persons", "occupational_exposure", EXPOSURE_CHOICES],
    ["Medical preconditions", "medical_condition", CONDITION_CHOICES],
  ];
  for (const [title, key, choices] of selects) {
    const wrapper = element("label", "control");
    wrapper.append(element("span", "control-title", title));
    const select = element("select");
    select.dataset.profileField = key;
    for (const choice of choices) {
      const option = element("option", undefined, choice.replace(/_/g, " "));
      option.value = choice;
      select.append(option);
    }
    select.value = String(profile[key]);
    select.addEventListener("change", () => {
      onChange({ ...profile, [key]: select.value });
    });
    wrapper.append(select);
    container.append(wrapper);
  }

  const flags: Array<[string, keyof ProfilePayload]> = [
    ["Care home resident", "care_home_resident"],
    ["System relevant job", "system_relevant_job"],
    ["Teacher", "teacher"],
  ];
  for (const [title, key] of flags) {
    const wrapper = element("label", "control control-flag");
    const box = element("input");
    box.type = "checkbox";
    box.dataset.profileField = key;
    box.checked = Boolean(profile[key]);
    box.addEventListener("change", () => {
      onChange({ ...profile, [key]: box.checked });
    });
    wrapper.append(box, element("span", "control-title", title));
    container.append(wrapper);
  }
}

/** The big color verdict. Never computed client-side: this renders the
 * latest service response and nothing else. */
export function renderVerdict(container: HTMLElement, assessment: AssessmentPayload | null): void {
  container.textContent = "";
  if (assessment === null) {
    container.className = "verdict verdict-pending";
    container.append(element("p", "verdict-label", "waiting for the service"));
    return;
  }
  if (assessment.refused) {
    container.className = "verdict verdict-refused";
    container.append(element("p", "verdict-label", "REFUSED"));
    container.append(
      element(
        "p",
        "verdict-detail",
        "too many people: this activity should not be performed",
      ),
    );
  } else if (assessment.no_exposure) {
    container.className = "verdict verdict-none";
    container.append(element("p", "verdict-label", "NO EXPOSURE"));
    container.append(element("p", "verdict-detail", "nobody is met; there is no risk to score"));
  } else {
    container.className = `verdict verdict-${assessment.risk}`;
    container.append(
      element("p", "verdict-label", (assessment.risk ?? "").toUpperCase()),
    );
    const f = element("p", "verdict-f");
    f.dataset.f = String(assessment.f);
    f.textContent = `F = ${assessment.f} at severity ${assessment.severity}`;
    container.append(f);
    if (assessment.recommendation) {
      container.append(element("p", "verdict-detail", assessment.recommendation));
    }
  }
  for (const note of assessment.notes) {
    container.append(element("p", "verdict-note", note));
  }
}

export function renderMitigations(
  container: HTMLElement,
  mitigations: MitigationPayload[],
  onApply: (index: number) => void,
  limit = 8,
): void {
  container.textContent = "";
  if (mitigations.length === 0) {
    container.append(element("p", "mitigation-empty", "no single adjustments would help"));
    return;
  }
  const list = element("ol", "mitigation-list");
  mitigations.slice(0, limit).forEach((mitigation, index) => {
    const item = element("li");
    const button = element("button", "mitigation");
    const moves = mitigation.changes
      .map((change) => change.band)
      .join(" and ");
    button.append(element("span", "mitigation-moves", moves));
    button.append(
      element(
        "span",
        `mitigation-outcome outcome-${mitigation.new_risk}`,
        `-> ${mitigation.new_risk.toUpperCase()}, F = ${mitigation.new_f}`,
      ),
    );
    button.addEventListener("click", () => onApply(index));
    item.append(button);
    list.append(item);
  });
  container.append(list);
}

export function renderOffline(banner: HTMLElement, offline: boolean, detail = ""): void {
  banner.hidden = !offline;
  banner.textContent = offline
    ? `service unreachable${detail ? `: ${detail}` : ""}; controls disabled`
    : "";
}

export function setControlsDisabled(root: HTMLElement, disabled: boolean): void {
  for (const node of root.querySelectorAll("select, input, button")) {
    (node as HTMLSelectElement | HTMLInputElement | HTMLButtonElement).disabled = disabled;
  }
}
