/** Small hand-built packet used across the suites. */

import { PACKET_SCHEMA } from "../src/types.js";
import type { ReviewEntry, ReviewPacket } from "../src/types.js";

export const CRITERIA = [
  { id: "C1", text: "The explanation of the prediction is formally correct (i.e., readable, fluent and grammatically correct)." },
  { id: "C2", text: "From the explanation, the expert understands how the prediction is automatically made." },
  { id: "C3", text: "From the explanation, the expert understands the cause and effect of the prediction." },
  { id: "C4", text: "The explanation comprises factual and counterfactual pieces of information." },
  { id: "C5", text: "The explanation has sufficient detail." },
  { id: "C6", text: "The explanation is complete." },
  { id: "C7", text: "The explanation is useful to my goals." },
  { id: "C8", text: "The explanation shows how accurate the prediction is." },
  { id: "C9", text: "The explanation allows the expert to judge when should the prediction be trusted or not trusted." },
  { id: "C10", text: "The explanation of how the predictor works is satisfying." },
];

export function makeEntry(overrides: Partial<ReviewEntry> = {}): ReviewEntry {
  return {
    entry_id: "m-0001|yearly|A",
    meter_id: "m-0001",
    horizon: "yearly",
    finalist: "A",
    prediction: [110, 95, 90, 70, 60, 55, 50, 52, 65, 80, 100, 120],
    explanation: "The estimation of your energy consumption for next year is low.",
    actual_2017: [120, 100, 95, 75, 60, 58, 48, 51, 70, 85, 105, 125],
    actual_2018: [115, 92, 88, 72, 61, 54, 49, 50, 66, 82, 99, 118],
    ...overrides,
  };
}

export function makePacket(overrides: Partial<ReviewPacket> = {}): ReviewPacket {
  const entries = overrides.entries ?? [
    makeEntry(),
    makeEntry({ entry_id: "m-0001|2018-02|A", horizon: "2018-02" }),
    makeEntry({ entry_id: "m-0001|yearly|B", finalist: "B" }),
  ];
  return {
    schema: PACKET_SCHEMA,
    packet_id: "pkt-test",
    finalists: ["A", "B"],
    meter_ids: ["m-0001"],
    horizons: ["yearly", "2018-02", "2018-05", "2018-12"],
    criteria: CRITERIA,
    anchors: {
      agreement: ["Strongly Disagree", "Somewhat Disagree", "Neutral", "Somewhat Agree", "Strongly Agree"],
      satisfaction: ["Very Dissatisfied", "Dissatisfied", "Neither Satisfied Nor Dissatisfied", "Satisfied", "Very Satisfied"],
    },
    ...overrides,
    entries,
  };
}

/** Draft rating every criterion with the same score. */
export function fullDraft(score = 4): Record<string, number> {
  const draft: Record<string, number> = {};
  for (const c of CRITERIA) draft[c.id.toLowerCase()] = score;
  return draft;
}
