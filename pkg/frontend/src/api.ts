// Thin typed client for the /api/v1 endpoints.

import type {
  ApiErrorBody,
  Project,
  Recommendation,
  RecommendationAction,
  RecommendationState,
  RisingContributor,
  TrendPoint,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, init);
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    body = null;
  }
  if (!response.ok) {
    const err = (body ?? {}) as Partial<ApiErrorBody>;
    throw new ApiError(
      err.status ?? response.status,
      err.code ?? "error",
      err.message ?? `request failed with status ${response.status}`,
    );
  }
  return body as T;
}

export function trendsUrl(slug: string, window = 6): string {
  return `/api/v1/projects/${slug}/trends?window=${window}`;
}

export function risingUrl(slug: string, includeMembers: boolean): string {
  return `/api/v1/projects/${slug}/rising?include_members=${includeMembers}`;
}

export function recommendationsUrl(slug: string, state?: RecommendationState): string {
  const base = `/api/v1/projects/${slug}/recommendations`;
  return state ? `${base}?state=${state}` : base;
}

export function actionUrl(recommendationId: string): string {
  return `/api/v1/recommendations/${recommendationId}/action`;
}

export const api = {
  projects(): Promise<Project[]> {
    return request("/api/v1/projects");
  },

  trends(slug: string, window = 6): Promise<TrendPoint[]> {
    return request(trendsUrl(slug, window));
  },

  rising(slug: string, includeMembers: boolean): Promise<RisingContributor[]> {
    return request(risingUrl(slug, includeMembers));
  },

  recommendations(slug: string, state?: RecommendationState): Promise<Recommendation[]> {
    return request(recommendationsUrl(slug, state));
  },

  act(
    recommendationId: string,
    action: RecommendationAction,
    until: string | null = null,
  ): Promise<Recommendation> {
    const payload: Record<string, string> = { action };
    if (until !== null) {
      payload.until = until;
    }
    return request(actionUrl(recommendationId), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  },
};
