/**
 * View state: entry cursor, per-entry rating drafts, submission status.
 * Drafts persist through the injected storage (localStorage in the
 * browser), so a reload restores unsubmitted work.
 */

import type { Draft, ReviewPacket, SubmitStatus } from "./types.js";
import { isValidRating } from "./validate.js";

export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export class MemoryStore implements KeyValueStore {
  private data = new Map<string, string>();
  getItem(key: string): string | null {
    return this.data.has(key) ? this.data.get(key)! : null;
  }
  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }
  removeItem(key: string): void {
    this.data.delete(key);
  }
}

const TOKEN_KEY = "review-ui:reviewer-token";

export class ViewState {
  readonly packet: ReviewPacket;
  private store: KeyValueStore;
  private cursor = 0;
  private drafts = new Map<string, Draft>();
  private statuses = new Map<string, SubmitStatus>();

  constructor(packet: ReviewPacket, store: KeyValueStore) {
    this.packet = packet;
    this.store = store;
    for (const entry of packet.entries) {
      const raw = store.getItem(this.draftKey(entry.entry_id));
      if (raw !== null) {
        this.drafts.set(entry.entry_id, sanitizeDraft(raw));
      }
    }
  }

  private draftKey(entryId: string): string {
    return `review-ui:draft:${this.packet.packet_id}:${entryId}`;
  }

  get index(): number {
    return this.cursor;
  }

  get total(): number {
    return this.packet.entries.length;
  }

  get current() {
    return this.packet.entries[this.cursor]!;
  }

  /** Clamped navigation; the cursor never leaves the loaded packet. */
  goTo(index: number): void {
    this.cursor = Math.min(Math.max(index, 0), this.total - 1);
  }

  next(): void {
    this.goTo(this.cursor + 1);
  }

  prev(): void {
    this.goTo(this.cursor - 1);
  }

  draftFor(entryId: string): Draft {
    return { ...(this.drafts.get(entryId) ?? {}) };
  }

  setRating(entryId: string, key: string, value: number): void {
    if (!isValidRating(value)) {
      throw new Error(`rating out of range: ${value}`);
    }
    const draft = this.drafts.get(entryId) ?? {};
    draft[key] = value;
    this.drafts.set(entryId, draft);
    this.statuses.set(entryId, "unsaved");
    this.store.setItem(this.draftKey(entryId), JSON.stringify(draft));
  }

  statusOf(entryId: string): SubmitStatus {
    return this.statuses.get(entryId) ?? "unsaved";
  }

  markSaving(entryId: string): void {
    this.statuses.set(entryId, "saving");
  }

  /** Successful submit; the draft stays around for later edits. */
  markSaved(entryId: string): void {
    this.statuses.set(entryId, "saved");
  }

  /** Failed submit; the draft is kept so the reviewer can retry. */
  markFailed(entryId: string): void {
    this.statuses.set(entryId, "failed");
  }

  savedCount(): number {
    let n = 0;
    for (const status of this.statuses.values()) {
      if (status === "saved") n += 1;
    }
    return n;
  }

  get reviewerToken(): string {
    return this.store.getItem(TOKEN_KEY) ?? "";
  }

  set reviewerToken(token: string) {
    this.store.setItem(TOKEN_KEY, token.trim());
  }
}

/** Parse a persisted draft, dropping anything out of range or non-integer. */
export function sanitizeDraft(raw: string): Draft {
  let parsed: unknown;
  try {
    parsed = JSON.parse(raw);
  } catch {
    return {};
  }
  if (parsed === null || typeof parsed !== "object" || Array.isArray(parsed)) {
    return {};
  }
  const draft: Draft = {};
  for (const [key, value] of Object.entries(parsed)) {
    if (isValidRating(value)) {
      draft[key] = value;
    }
  }
  return draft;
}
