/**
 * Wire types mirroring the packet and response JSON served by the review
 * API. Field names match the backend byte-for-byte; do not rename.
 */

export interface Criterion {
  id: string; // "C1".."C10"
  text: string;
}

export interface PacketAnchors {
  agreement: string[]; // C1-C9 scale, index 0 = rating 1
  satisfaction: string[]; // C10 scale
}

export interface ReviewEntry {
  entry_id: string;
  meter_id: string;
  horizon: string; // "yearly" or "2018-MM"
  finalist: string; // blinded label
  prediction: number[]; // 12 monthly kWh values
  explanation: string;
  actual_2017: (number | null)[];
  actual_2018: (number | null)[];
}

export interface ReviewPacket {
  schema: string;
  packet_id: string;
  finalists: string[];
  meter_ids: string[];
  horizons: string[];
  criteria: Criterion[];
  anchors: PacketAnchors;
  entries: ReviewEntry[];
}

export const PACKET_SCHEMA = "meterbench.packet/1";

/** Ratings keyed by lowercase criterion id ("c1".."c10"). */
export type Draft = Record<string, number>;

export interface ReviewResponse {
  reviewer_token: string;
  packet_id: string;
  entry_id: string;
  [criterion: string]: string | number;
}

export type SubmitStatus = "unsaved" | "saving" | "saved" | "failed";
