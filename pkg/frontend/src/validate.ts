import type { Criterion, Draft, ReviewResponse } from "./types.js";

/** Lowercase rating key for a criterion id ("C3" -> "c3"). */
export function ratingKey(criterion: Criterion | string): string {
  return (typeof criterion === "string" ? criterion : criterion.id).toLowerCase();
}

export function isValidRating(value: unknown): value is number {
  return typeof value === "number" && Number.isInteger(value) && value >= 1 && value <= 5;
}

/** Criterion ids still missing a valid rating; empty means submittable. */
export function missingRatings(draft: Draft, criteria: Criterion[]): string[] {
  return criteria.filter((c) => !isValidRating(draft[ratingKey(c)])).map((c) => c.id);
}

export function isComplete(draft: Draft, criteria: Criterion[]): boolean {
  return missingRatings(draft, criteria).length === 0;
}

/**
 * Assemble the POST payload. Throws rather than producing an invalid
 * body, so an incomplete draft can never reach the network layer.
 */
export function buildResponse(
  reviewerToken: string,
  packetId: string,
  entryId: string,
  draft: Draft,
  criteria: Criterion[],
): ReviewResponse {
  const token = reviewerToken.trim();
  if (!token) {
    throw new Error("reviewer token is required");
  }
  const missing = missingRatings(draft, criteria);
  if (missing.length > 0) {
    throw new Error(`unrated criteria: ${missing.join(", ")}`);
  }
  const body: ReviewResponse = {
    reviewer_token: token,
    packet_id: packetId,
    entry_id: entryId,
  };
  for (const c of criteria) {
    body[ratingKey(c)] = draft[ratingKey(c)]!;
  }
  return body;
}
