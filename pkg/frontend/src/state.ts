// Pure view-state transitions for the recommendation panel.
//
// Actions are applied optimistically: the card flips immediately, the
// server response reconciles it, and an error rolls the snapshot back.

import type {
  Recommendation,
  RecommendationAction,
  RecommendationState,
  RisingContributor,
} from "./types.js";

export type StateFilter = RecommendationState | "all";

export const STATE_FILTERS: StateFilter[] = [
  "pending",
  "snoozed",
  "accepted",
  "dismissed",
  "all",
];

export function filterByState(
  recommendations: Recommendation[],
  filter: StateFilter,
): Recommendation[] {
  if (filter === "all") {
    return recommendations.slice();
  }
  return recommendations.filter((rec) => rec.state === filter);
}

export function pendingCount(recommendations: Recommendation[]): number {
  return filterByState(recommendations, "pending").length;
}

const ACTION_RESULT: Record<RecommendationAction, RecommendationState> = {
  accept: "accepted",
  dismiss: "dismissed",
  snooze: "snoozed",
};

export interface OptimisticResult {
  next: Recommendation[];
  previous: Recommendation | null;
}

export function optimisticApply(
  recommendations: Recommendation[],
  id: string,
  action: RecommendationAction,
  until: string | null = null,
): OptimisticResult {
  const current = recommendations.find((rec) => rec.id === id);
  if (!current || current.state !== "pending") {
    return { next: recommendations.slice(), previous: null };
  }
  const updated: Recommendation = {
    ...current,
    state: ACTION_RESULT[action],
    snooze_until: action === "snooze" ? until : null,
  };
  return { next: reconcile(recommendations, updated), previous: current };
}

export function reconcile(
  recommendations: Recommendation[],
  serverRecord: Recommendation,
): Recommendation[] {
  return recommendations.map((rec) => (rec.id === serverRecord.id ? serverRecord : rec));
}

export function rollback(
  recommendations: Recommendation[],
  previous: Recommendation,
): Recommendation[] {
  return reconcile(recommendations, previous);
}

export function badgeRecommendationFor(
  recommendations: Recommendation[],
  contributor: RisingContributor,
): Recommendation | null {
  return (
    recommendations.find(
      (rec) =>
        rec.kind === "rising_contributor_badge" &&
        rec.target === contributor.login &&
        rec.state === "pending",
    ) ?? null
  );
}

export function describeRecommendation(rec: Recommendation): string {
  switch (rec.kind) {
    case "add_newcomer_label":
      return `Add the "${rec.target}" issue label`;
    case "add_goal_badge":
      return `Add a "${rec.target}" goal badge to the README`;
    case "rising_contributor_badge":
      return `Recognize ${rec.target} as a rising contributor`;
    default:
      return `${rec.kind}: ${rec.target}`;
  }
}
