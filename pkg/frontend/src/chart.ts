/**
 * Monthly consumption chart rendered as an SVG string.
 *
 * Grouped bars per month: 2017 actuals in red, 2018 actuals in blue,
 * with the finalist's 12-month prediction drawn as a line on top.
 * Null months leave gaps; an all-null year is dropped entirely.
 */

import type { ReviewEntry } from "./types.js";

const MONTHS = ["Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"];

const WIDTH = 720;
const HEIGHT = 300;
const MARGIN = { top: 16, right: 16, bottom: 36, left: 56 };

const COLOR_2017 = "#c0392b";
const COLOR_2018 = "#2980b9";
const COLOR_PRED = "#2c3e50";

interface Scale {
  max: number;
  y(value: number): number;
}

function hasAnyValue(series: (number | null)[] | null): series is (number | null)[] {
  return series !== null && series.some((v) => v !== null);
}

function makeScale(values: number[]): Scale {
  const max = Math.max(1e-9, ...values);
  const plotHeight = HEIGHT - MARGIN.top - MARGIN.bottom;
  return {
    max,
    y: (value: number) => MARGIN.top + plotHeight * (1 - value / max),
  };
}

function axisTicks(max: number): number[] {
  const rawStep = max / 4;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const step = Math.ceil(rawStep / mag) * mag;
  const ticks: number[] = [];
  for (let v = 0; v <= max + 1e-9; v += step) {
    ticks.push(Math.round(v * 100) / 100);
  }
  return ticks;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Build the chart SVG for one packet entry. Pure string in, string out. */
export function renderChart(entry: ReviewEntry): string {
  const actual2017 = hasAnyValue(entry.actual_2017) ? entry.actual_2017 : null;
  const actual2018 = hasAnyValue(entry.actual_2018) ? entry.actual_2018 : null;
  const prediction = entry.prediction;

  const present: number[] = [...prediction];
  for (const series of [actual2017, actual2018]) {
    if (series) {
      for (const v of series) {
        if (v !== null) present.push(v);
      }
    }
  }
  const scale = makeScale(present);

  const plotWidth = WIDTH - MARGIN.left - MARGIN.right;
  const slot = plotWidth / 12;
  const barWidth = slot * 0.28;
  const baseline = HEIGHT - MARGIN.bottom;

  const parts: string[] = [];
  parts.push(
    `<svg class="chart" viewBox="0 0 ${WIDTH} ${HEIGHT}" xmlns="http://www.w3.org/2000/svg" role="img" aria-label="Monthly consumption in kWh">`,
  );

  for (const tick of axisTicks(scale.max)) {
    const y = scale.y(tick);
    parts.push(
      `<line class="grid" x1="${MARGIN.left}" y1="${y.toFixed(1)}" x2="${WIDTH - MARGIN.right}" y2="${y.toFixed(1)}" stroke="#ddd"/>`,
    );
    parts.push(
      `<text class="tick" x="${MARGIN.left - 6}" y="${(y + 4).toFixed(1)}" text-anchor="end" font-size="11">${tick}</text>`,
    );
  }
  parts.push(
    `<text class="axis-label" x="12" y="${MARGIN.top}" font-size="11" transform="rotate(-90 12 ${MARGIN.top})" text-anchor="end">kWh</text>`,
  );

  for (let m = 0; m < 12; m += 1) {
    const center = MARGIN.left + slot * (m + 0.5);
    parts.push(
      `<text class="tick" x="${center.toFixed(1)}" y="${HEIGHT - MARGIN.bottom + 16}" text-anchor="middle" font-size="11">${MONTHS[m]}</text>`,
    );

    if (actual2017) {
      const v = actual2017[m];
      if (v !== null && v !== undefined) {
        const y = scale.y(v);
        parts.push(
          `<rect class="bar-2017" x="${(center - barWidth).toFixed(1)}" y="${y.toFixed(1)}" width="${barWidth.toFixed(1)}" height="${(baseline - y).toFixed(1)}" fill="${COLOR_2017}"/>`,
        );
      }
    }
    if (actual2018) {
      const v = actual2018[m];
      if (v !== null && v !== undefined) {
        const y = scale.y(v);
        parts.push(
          `<rect class="bar-2018" x="${center.toFixed(1)}" y="${y.toFixed(1)}" width="${barWidth.toFixed(1)}" height="${(baseline - y).toFixed(1)}" fill="${COLOR_2018}"/>`,
        );
      }
    }
  }

  const points = prediction
    .map((v, m) => {
      const x = MARGIN.left + slot * (m + 0.5);
      return `${x.toFixed(1)},${scale.y(v).toFixed(1)}`;
    })
    .join(" ");
  parts.push(
    `<polyline class="prediction" points="${points}" fill="none" stroke="${COLOR_PRED}" stroke-width="2"/>`,
  );
  for (let m = 0; m < 12; m += 1) {
    const x = MARGIN.left + slot * (m + 0.5);
    parts.push(
      `<circle class="prediction-point" cx="${x.toFixed(1)}" cy="${scale.y(prediction[m]!).toFixed(1)}" r="3" fill="${COLOR_PRED}"/>`,
    );
  }

  const legend: [string, string][] = [];
  if (actual2017) legend.push(["2017 actual", COLOR_2017]);
  if (actual2018) legend.push(["2018 actual", COLOR_2018]);
  legend.push(["prediction", COLOR_PRED]);
  let lx = MARGIN.left + 8;
  for (const [label, color] of legend) {
    parts.push(`<rect x="${lx}" y="2" width="10" height="10" fill="${color}"/>`);
    parts.push(`<text x="${lx + 14}" y="11" font-size="11">${esc(label)}</text>`);
    lx += 14 + label.length * 6.5 + 18;
  }

  parts.push("</svg>");
  return parts.join("");
}
