/**
 * HTML fragments for the review screen. Pure functions over packet data
 * and drafts; main.ts owns the DOM and event wiring.
 */

import { renderChart } from "./chart.js";
import type { Criterion, Draft, ReviewEntry, ReviewPacket, SubmitStatus } from "./types.js";
import { isComplete, ratingKey } from "./validate.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function horizonLabel(horizon: string): string {
  if (horizon === "yearly") return "Full year 2018";
  const month = Number(horizon.slice(5));
  const names = ["January", "February", "March", "April", "May", "June", "July",
    "August", "September", "October", "November", "December"];
  return `${names[month - 1]} 2018`;
}

function anchorsFor(packet: ReviewPacket, criterion: Criterion): readonly string[] {
  return criterion.id === "C10" ? packet.anchors.satisfaction : packet.anchors.agreement;
}

function renderCriterion(packet: ReviewPacket, entry: ReviewEntry,
                         criterion: Criterion, draft: Draft): string {
  const key = ratingKey(criterion);
  const chosen = draft[key];
  const anchors = anchorsFor(packet, criterion);
  const options = anchors
    .map((anchor, i) => {
      const value = i + 1;
      const checked = chosen === value ? " checked" : "";
      const name = `${entry.entry_id}:${key}`;
      return (
        `<label class="anchor" title="${escapeHtml(anchor)}">` +
        `<input type="radio" name="${escapeHtml(name)}" data-criterion="${key}" value="${value}"${checked}>` +
        `<span class="anchor-value">${value}</span>` +
        `<span class="anchor-text">${escapeHtml(anchor)}</span>` +
        `</label>`
      );
    })
    .join("");
  return (
    `<fieldset class="criterion" data-criterion="${key}">` +
    `<legend><strong>${escapeHtml(criterion.id)}.</strong> ${escapeHtml(criterion.text)}</legend>` +
    `<div class="anchors">${options}</div>` +
    `</fieldset>`
  );
}

function statusLine(status: SubmitStatus, error: string | null): string {
  switch (status) {
    case "saved":
      return `<span class="status status-saved">Saved</span>`;
    case "saving":
      return `<span class="status status-saving">Saving&hellip;</span>`;
    case "failed":
      return (
        `<span class="status status-failed">Not saved` +
        (error ? `: ${escapeHtml(error)}` : "") +
        ` &mdash; your ratings are kept locally, use Submit to retry.</span>`
      );
    default:
      return `<span class="status status-unsaved">Not submitted yet</span>`;
  }
}

export interface EntryViewModel {
  packet: ReviewPacket;
  entry: ReviewEntry;
  index: number;
  total: number;
  draft: Draft;
  status: SubmitStatus;
  error: string | null;
}

export function renderEntry(vm: EntryViewModel): string {
  const { packet, entry, draft } = vm;
  const criteria = packet.criteria.map((c) => renderCriterion(packet, entry, c, draft)).join("");
  const submitDisabled = isComplete(draft, packet.criteria) ? "" : " disabled";
  return `
<header class="entry-header">
  <div class="entry-position">Entry ${vm.index + 1} of ${vm.total}</div>
  <h2>Meter ${escapeHtml(entry.meter_id)} &middot; ${escapeHtml(horizonLabel(entry.horizon))}</h2>
  <div class="finalist-label">Finalist <span class="badge">${escapeHtml(entry.finalist)}</span></div>
</header>
<section class="chart-panel">${renderChart(entry)}</section>
<section class="explanation-panel">
  <h3>Explanation</h3>
  <blockquote class="explanation">${escapeHtml(entry.explanation)}</blockquote>
</section>
<form class="rating-form" data-entry="${escapeHtml(entry.entry_id)}">
  ${criteria}
  <div class="submit-row">
    <button type="submit" class="submit"${submitDisabled}>Submit ratings</button>
    ${statusLine(vm.status, vm.error)}
  </div>
</form>
<nav class="pager">
  <button type="button" class="nav-prev"${vm.index === 0 ? " disabled" : ""}>&larr; Previous</button>
  <button type="button" class="nav-next"${vm.index + 1 === vm.total ? " disabled" : ""}>Next &rarr;</button>
</nav>`;
}

export function renderError(message: string): string {
  return `<div class="error-banner">${escapeHtml(message)}</div>`;
}

export function renderTokenPrompt(token: string): string {
  return `
<label class="token-row">Reviewer token
  <input type="text" class="token-input" value="${escapeHtml(token)}" placeholder="e.g. your initials">
</label>`;
}
