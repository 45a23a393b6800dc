import { beforeEach, describe, expect, it } from "vitest";

import { MemoryStore, sanitizeDraft, ViewState } from "../src/state.js";
import { makePacket } from "./fixtures.js";

describe("navigation", () => {
  let state: ViewState;

  beforeEach(() => {
    state = new ViewState(makePacket(), new MemoryStore());
  });

  it("starts at the first entry", () => {
    expect(state.index).toBe(0);
    expect(state.current.entry_id).toBe("m-0001|yearly|A");
  });

  it("steps forward and back", () => {
    state.next();
    expect(state.index).toBe(1);
    state.prev();
    expect(state.index).toBe(0);
  });

  it("never leaves the packet", () => {
    state.prev();
    expect(state.index).toBe(0);
    state.goTo(99);
    expect(state.index).toBe(state.total - 1);
    state.next();
    expect(state.index).toBe(state.total - 1);
    state.goTo(-5);
    expect(state.index).toBe(0);
  });
});

describe("drafts", () => {
  it("records ratings per entry", () => {
    const state = new ViewState(makePacket(), new MemoryStore());
    state.setRating("m-0001|yearly|A", "c1", 4);
    state.setRating("m-0001|yearly|B", "c1", 2);
    expect(state.draftFor("m-0001|yearly|A")).toEqual({ c1: 4 });
    expect(state.draftFor("m-0001|yearly|B")).toEqual({ c1: 2 });
  });

  it("rejects out-of-range ratings", () => {
    const state = new ViewState(makePacket(), new MemoryStore());
    expect(() => state.setRating("m-0001|yearly|A", "c1", 0)).toThrow(/range/);
    expect(() => state.setRating("m-0001|yearly|A", "c1", 3.5)).toThrow(/range/);
  });

  it("hands out copies, not live references", () => {
    const state = new ViewState(makePacket(), new MemoryStore());
    state.setRating("m-0001|yearly|A", "c1", 4);
    const draft = state.draftFor("m-0001|yearly|A");
    draft["c1"] = 1;
    expect(state.draftFor("m-0001|yearly|A")).toEqual({ c1: 4 });
  });

  it("survives a reload through the injected storage", () => {
    const store = new MemoryStore();
    const first = new ViewState(makePacket(), store);
    first.setRating("m-0001|yearly|A", "c1", 5);
    first.setRating("m-0001|yearly|A", "c10", 2);

    const reloaded = new ViewState(makePacket(), store);
    expect(reloaded.draftFor("m-0001|yearly|A")).toEqual({ c1: 5, c10: 2 });
  });

  it("keys storage by packet, so other packets stay untouched", () => {
    const store = new MemoryStore();
    const a = new ViewState(makePacket(), store);
    a.setRating("m-0001|yearly|A", "c1", 5);

    const other = new ViewState(makePacket({ packet_id: "pkt-other" }), store);
    expect(other.draftFor("m-0001|yearly|A")).toEqual({});
  });
});

describe("submission status", () => {
  it("walks unsaved -> saving -> saved", () => {
    const state = new ViewState(makePacket(), new MemoryStore());
    const id = "m-0001|yearly|A";
    expect(state.statusOf(id)).toBe("unsaved");
    state.markSaving(id);
    expect(state.statusOf(id)).toBe("saving");
    state.markSaved(id);
    expect(state.statusOf(id)).toBe("saved");
    expect(state.savedCount()).toBe(1);
  });

  it("keeps the draft when a submit fails", () => {
    const state = new ViewState(makePacket(), new MemoryStore());
    const id = "m-0001|yearly|A";
    state.setRating(id, "c1", 3);
    state.markSaving(id);
    state.markFailed(id);
    expect(state.statusOf(id)).toBe("failed");
    expect(state.draftFor(id)).toEqual({ c1: 3 });
  });

  it("drops back to unsaved when a saved entry is edited", () => {
    const state = new ViewState(makePacket(), new MemoryStore());
    const id = "m-0001|yearly|A";
    state.markSaved(id);
    state.setRating(id, "c2", 1);
    expect(state.statusOf(id)).toBe("unsaved");
  });
});

describe("sanitizeDraft", () => {
  it("drops malformed JSON", () => {
    expect(sanitizeDraft("{not json")).toEqual({});
    expect(sanitizeDraft("[1,2]")).toEqual({});
    expect(sanitizeDraft("null")).toEqual({});
  });

  it("keeps only integer ratings in range", () => {
    const raw = JSON.stringify({ c1: 4, c2: 0, c3: 2.5, c4: "5", c5: true, c6: 5 });
    expect(sanitizeDraft(raw)).toEqual({ c1: 4, c6: 5 });
  });
});

describe("reviewer token", () => {
  it("persists trimmed through storage", () => {
    const store = new MemoryStore();
    const state = new ViewState(makePacket(), store);
    expect(state.reviewerToken).toBe("");
    state.reviewerToken = "  rev-7 ";
    expect(state.reviewerToken).toBe("rev-7");
    expect(new ViewState(makePacket(), store).reviewerToken).toBe("rev-7");
  });
});
