import type {
  AssessmentPayload,
  ProfilePayload,
  ScenarioBody,
  TablesPayload,
  WhatIfPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly location: string | null = null,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  try {
    const body = await response.json();
    const error = body?.error ?? {};
    return new ApiError(error.message ?? response.statusText, response.status, error.location ?? null);
  } catch {
    return new ApiError(response.statusText, response.status);
  }
}

/** Thin typed client for the assessment service. */
export class ApiClient {
  constructor(readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(`${this.base}${path}`, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  health(): Promise<{ status: string }> {
    return this.request("/health");
  }

  tables(): Promise<TablesPayload> {
    return this.request("/tables");
  }

  assess(scenario: ScenarioBody, profile: ProfilePayload): Promise<AssessmentPayload> {
    return this.post("/assess", { scenario, profile });
  }

  whatif(scenario: ScenarioBody, profile: ProfilePayload): Promise<WhatIfPayload> {
    return this.post("/whatif", { scenario, profile });
  }

  async storedProfile(): Promise<ProfilePayload | null> {
    const body = await this.request<{ profile: ProfilePayload | null }>("/profile");
    return body.profile;
  }

  saveProfile(profile: ProfilePayload): Promise<unknown> {
    return this.request("/profile", {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(profile),
    });
  }
}
