/**
 * SVG renderer for sweep curves: theory as lines, Monte Carlo as markers
 * with +- radius bars.  Pure string building; no DOM, no clock, output is
 * a function of the rows and the FigureSpec alone.
 */

import { Series, SweepRow, groupSeries } from "./csv.js";
import { Scale, formatTick, linearScale, logScale } from "./scale.js";

export interface FigureSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  yScale: "log" | "linear";
  width?: number;
  height?: number;
}

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#17becf",
  "#8c564b",
  "#e377c2",
];

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

function fmt(v: number): string {
  return Number(v.toFixed(2)).toString();
}

interface Bounds {
  x0: number;
  x1: number;
  y0: number;
  y1: number;
}

function collectBounds(series: Series[], logY: boolean): Bounds | null {
  let x0 = Infinity,
    x1 = -Infinity,
    y0 = Infinity,
    y1 = -Infinity;
  const consider = (x: number, y: number) => {
    if (!Number.isFinite(x) || !Number.isFinite(y)) return;
    if (logY && y <= 0) return;
    x0 = Math.min(x0, x);
    x1 = Math.max(x1, x);
    y0 = Math.min(y0, y);
    y1 = Math.max(y1, y);
  };
  for (const s of series) {
    for (const p of s.points) {
      consider(p.x, p.theoryBer);
      consider(p.x, p.mcBer);
      if (!logY || p.mcBer - p.mcRadius > 0) consider(p.x, p.mcBer - p.mcRadius);
      consider(p.x, p.mcBer + p.mcRadius);
    }
  }
  if (!Number.isFinite(x0) || !Number.isFinite(y0)) return null;
  return { x0, x1, y0, y1 };
}

export function renderSvg(rows: SweepRow[], spec: FigureSpec): string {
  const width = spec.width ?? 760;
  const height = spec.height ?? 500;
  const margin = { left: 78, right: 24, top: 44, bottom: 56 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;
  const logY = spec.yScale === "log";
  const series = groupSeries(rows);
  const bounds = collectBounds(series, logY);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="24" text-anchor="middle" font-size="16">${esc(spec.title)}</text>`,
  );
  // plot frame
  parts.push(
    `<rect x="${margin.left}" y="${margin.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${margin.left + plotW / 2}" y="${height - 12}" text-anchor="middle" font-size="13">${esc(spec.xLabel)}</text>`,
  );
  parts.push(
    `<text x="20" y="${margin.top + plotH / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 20 ${margin.top + plotH / 2})">${esc(spec.yLabel)}</text>`,
  );

  if (bounds === null) {
    // header-only input (or nothing drawable): empty axes, still a figure
    parts.push(
      `<text x="${margin.left + plotW / 2}" y="${margin.top + plotH / 2}" text-anchor="middle" font-size="13" fill="#777">no data</text>`,
    );
    parts.push("</svg>");
    return parts.join("\n") + "\n";
  }

  const xs: Scale = linearScale([bounds.x0, bounds.x1], [margin.left, margin.left + plotW]);
  const ys: Scale = logY
    ? logScale([bounds.y0, bounds.y1], [margin.top + plotH, margin.top])
    : linearScale([bounds.y0, bounds.y1], [margin.top + plotH, margin.top]);

  for (const t of xs.ticks()) {
    const px = xs.toPx(t);
    if (px < margin.left - 0.5 || px > margin.left + plotW + 0.5) continue;
    parts.push(
      `<line x1="${fmt(px)}" y1="${margin.top}" x2="${fmt(px)}" y2="${margin.top + plotH}" stroke="#ddd" stroke-width="0.6"/>`,
    );
    parts.push(
      `<text x="${fmt(px)}" y="${margin.top + plotH + 18}" text-anchor="middle" font-size="11">${formatTick(t)}</text>`,
    );
  }
  for (const t of ys.ticks()) {
    const py = ys.toPx(t);
    if (py < margin.top - 0.5 || py > margin.top + plotH + 0.5) continue;
    parts.push(
      `<line x1="${margin.left}" y1="${fmt(py)}" x2="${margin.left + plotW}" y2="${fmt(py)}" stroke="#ddd" stroke-width="0.6"/>`,
    );
    parts.push(
      `<text x="${margin.left - 6}" y="${fmt(py + 4)}" text-anchor="end" font-size="11">${formatTick(t)}</text>`,
    );
  }

  const drawable = (y: number) => Number.isFinite(y) && (!logY || y > 0);
  series.forEach((s, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    // theory polyline
    const line = s.points
      .filter((p) => drawable(p.theoryBer))
      .map((p) => `${fmt(xs.toPx(p.x))},${fmt(ys.toPx(p.theoryBer))}`)
      .join(" ");
    if (line.length > 0) {
      parts.push(
        `<polyline points="${line}" fill="none" stroke="${color}" stroke-width="1.6"/>`,
      );
    }
    // Monte Carlo markers with radius bars
    for (const p of s.points) {
      if (!drawable(p.mcBer)) continue;
      const px = xs.toPx(p.x);
      const py = ys.toPx(p.mcBer);
      const hi = p.mcBer + p.mcRadius;
      const lo = p.mcBer - p.mcRadius;
      if (p.mcRadius > 0 && drawable(hi)) {
        const yHi = ys.toPx(hi);
        const yLo = drawable(lo) ? ys.toPx(lo) : margin.top + plotH;
        parts.push(
          `<line x1="${fmt(px)}" y1="${fmt(yHi)}" x2="${fmt(px)}" y2="${fmt(yLo)}" stroke="${color}" stroke-width="1"/>`,
        );
        parts.push(
          `<line x1="${fmt(px - 3)}" y1="${fmt(yHi)}" x2="${fmt(px + 3)}" y2="${fmt(yHi)}" stroke="${color}" stroke-width="1"/>`,
        );
        if (drawable(lo)) {
          parts.push(
            `<line x1="${fmt(px - 3)}" y1="${fmt(yLo)}" x2="${fmt(px + 3)}" y2="${fmt(yLo)}" stroke="${color}" stroke-width="1"/>`,
          );
        }
      }
      parts.push(`<circle cx="${fmt(px)}" cy="${fmt(py)}" r="3" fill="${color}"/>`);
    }
  });

  // legend
  series.forEach((s, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const ly = margin.top + 14 + idx * 16;
    const lx = margin.left + plotW - 180;
    parts.push(
      `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 22}" y2="${ly - 4}" stroke="${color}" stroke-width="1.6"/>`,
    );
    parts.push(`<circle cx="${lx + 11}" cy="${ly - 4}" r="3" fill="${color}"/>`);
    parts.push(`<text x="${lx + 28}" y="${ly}" font-size="11">${esc(s.label)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
