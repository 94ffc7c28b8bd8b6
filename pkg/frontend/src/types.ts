// JSON shapes of the /api/v1 endpoints, mirrored verbatim. The UI never
// recomputes analytics; every displayed number comes from these fields.

export interface Project {
  owner: string;
  name: string;
  slug: string;
}

export interface TrendPoint {
  month: string;
  joined: number;
  active: number;
  retained: number;
}

export interface ActivityTotals {
  commits: number;
  issues: number;
  prs: number;
}

export interface RisingContributor {
  login: string;
  active_months: string[];
  totals: ActivityTotals;
  detected_at: string;
}

export type RecommendationState = "pending" | "accepted" | "dismissed" | "snoozed";

export type RecommendationAction = "accept" | "dismiss" | "snooze";

export interface Recommendation {
  id: string;
  kind: string;
  target: string;
  rationale: Record<string, unknown>;
  state: RecommendationState;
  snooze_until: string | null;
  created_at: string;
  updated_at: string;
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
}
