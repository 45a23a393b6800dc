/**
 * Browser entry point. Loads the packet named in the ?packet= query
 * parameter, then drives a single-entry review screen with local draft
 * persistence and optimistic submission.
 */

import { ApiError, fetchPacket, submitResponse } from "./api.js";
import { renderEntry, renderError, renderTokenPrompt } from "./render.js";
import { ViewState } from "./state.js";
import { buildResponse } from "./validate.js";

function packetIdFromLocation(): string {
  const params = new URLSearchParams(window.location.search);
  return (params.get("packet") ?? "").trim();
}

function appRoot(): HTMLElement {
  const el = document.getElementById("app");
  if (!el) throw new Error("missing #app container");
  return el;
}

async function boot(): Promise<void> {
  const root = appRoot();
  const packetId = packetIdFromLocation();
  if (!packetId) {
    root.innerHTML = renderError(
      "No packet selected. Open this page as /?packet=<packet id>.",
    );
    return;
  }

  let state: ViewState;
  try {
    const packet = await fetchPacket(packetId);
    state = new ViewState(packet, window.localStorage);
  } catch (err) {
    const detail = err instanceof Error ? err.message : String(err);
    root.innerHTML = renderError(`Could not load packet ${packetId}: ${detail}`);
    return;
  }

  let lastError: string | null = null;

  function draw(): void {
    const entry = state.current;
    root.innerHTML =
      renderTokenPrompt(state.reviewerToken) +
      renderEntry({
        packet: state.packet,
        entry,
        index: state.index,
        total: state.total,
        draft: state.draftFor(entry.entry_id),
        status: state.statusOf(entry.entry_id),
        error: lastError,
      });
  }

  async function submitCurrent(): Promise<void> {
    const entry = state.current;
    let payload;
    try {
      payload = buildResponse(
        state.reviewerToken,
        state.packet.packet_id,
        entry.entry_id,
        state.draftFor(entry.entry_id),
        state.packet.criteria,
      );
    } catch (err) {
      lastError = err instanceof Error ? err.message : String(err);
      state.markFailed(entry.entry_id);
      draw();
      return;
    }

    lastError = null;
    state.markSaving(entry.entry_id);
    draw();
    try {
      await submitResponse(payload);
      state.markSaved(entry.entry_id);
    } catch (err) {
      // The draft is untouched; the reviewer can fix or just retry.
      lastError = err instanceof ApiError
        ? `server rejected the response (${err.message})`
        : "network error, the server did not receive the response";
      state.markFailed(entry.entry_id);
    }
    draw();
  }

  root.addEventListener("change", (event) => {
    const target = event.target as HTMLInputElement;
    if (target.matches("input[type=radio][data-criterion]")) {
      lastError = null;
      state.setRating(
        state.current.entry_id,
        target.dataset["criterion"]!,
        Number(target.value),
      );
      draw();
    } else if (target.matches(".token-input")) {
      state.reviewerToken = target.value;
    }
  });

  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.closest(".nav-prev")) {
      lastError = null;
      state.prev();
      draw();
    } else if (target.closest(".nav-next")) {
      lastError = null;
      state.next();
      draw();
    }
  });

  root.addEventListener("submit", (event) => {
    event.preventDefault();
    void submitCurrent();
  });

  draw();
}

void boot();
