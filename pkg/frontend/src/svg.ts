/** Minimal deterministic SVG plotting: fixed size, fixed fonts, no state. */

export interface Scale {
  (v: number): number;
  ticks(): number[];
}

export const WIDTH = 760;
export const HEIGHT = 480;
export const MARGIN = { left: 72, right: 24, top: 40, bottom: 52 };

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#17becf", "#7f7f7f",
];

function fmt(v: number): string {
  if (!Number.isFinite(v)) return "0";
  return Number(v.toPrecision(6)).toString();
}

export function fmtTick(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e4 || Math.abs(v) < 1e-3)) {
    return v.toExponential(0).replace("+", "");
  }
  return Number(v.toPrecision(4)).toString();
}

function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / (count * step0);
  const step = step0 * (err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1);
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (!(hi > lo)) {
    hi = lo + 1;
  }
  const f = ((v: number) => outLo + ((v - lo) / (hi - lo)) * (outHi - outLo)) as Scale;
  f.ticks = () => niceTicks(lo, hi);
  return f;
}

export function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const f = ((v: number) =>
    outLo + ((Math.log10(v) - llo) / Math.max(lhi - llo, 1e-12)) * (outHi - outLo)) as Scale;
  f.ticks = () => {
    const ticks: number[] = [];
    for (let e = Math.ceil(llo - 1e-9); e <= Math.floor(lhi + 1e-9); e++) {
      ticks.push(Math.pow(10, e));
    }
    return ticks.length >= 2 ? ticks : [lo, hi];
  };
  return f;
}

export class SvgBuilder {
  private parts: string[] = [];

  constructor(title: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
        `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${escapeXml(title)}</text>`
    );
  }

  axes(x: Scale, y: Scale, xLabel: string, yLabel: string): void {
    const { left, right, top, bottom } = MARGIN;
    const x0 = left;
    const x1 = WIDTH - right;
    const y0 = HEIGHT - bottom;
    const y1 = top;
    this.parts.push(
      `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`,
      `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`
    );
    for (const t of x.ticks()) {
      const px = fmt(x(t));
      this.parts.push(
        `<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="black"/>`,
        `<text x="${px}" y="${y0 + 18}" text-anchor="middle" font-size="11">${fmtTick(t)}</text>`
      );
    }
    for (const t of y.ticks()) {
      const py = fmt(y(t));
      this.parts.push(
        `<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`,
        `<text x="${x0 - 8}" y="${py}" text-anchor="end" dominant-baseline="middle" ` +
          `font-size="11">${fmtTick(t)}</text>`
      );
    }
    this.parts.push(
      `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-size="13">` +
        `${escapeXml(xLabel)}</text>`,
      `<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="13" ` +
        `transform="rotate(-90 18 ${(y0 + y1) / 2})">${escapeXml(yLabel)}</text>`
    );
  }

  /** Shaded region between two curves sharing the x grid. */
  band(xs: number[], los: number[], his: number[], x: Scale, y: Scale, color: string, id: string): void {
    const fwd = xs.map((v, i) => `${fmt(x(v))},${fmt(y(los[i]))}`);
    const back = xs.map((v, i) => `${fmt(x(v))},${fmt(y(his[i]))}`).reverse();
    this.parts.push(
      `<path class="band" id="band-${escapeXml(id)}" d="M${fwd.join(" L")} L${back.join(" L")} Z" ` +
        `fill="${color}" fill-opacity="0.18" stroke="none"/>`
    );
  }

  curve(xs: number[], ys: number[], x: Scale, y: Scale, color: string, id: string, dashed = false): void {
    const pts = xs.map((v, i) => `${fmt(x(v))},${fmt(y(ys[i]))}`);
    const dash = dashed ? ` stroke-dasharray="6 4"` : "";
    const cls = dashed ? "fit" : "curve";
    this.parts.push(
      `<path class="${cls}" id="${cls}-${escapeXml(id)}" d="M${pts.join(" L")}" ` +
        `fill="none" stroke="${color}" stroke-width="1.6"${dash}/>`
    );
  }

  point(px: number, py: number, color: string): void {
    this.parts.push(`<circle class="point" cx="${fmt(px)}" cy="${fmt(py)}" r="3.5" fill="${color}"/>`);
  }

  legend(entries: Array<[string, string]>): void {
    const x = MARGIN.left + 12;
    let y = MARGIN.top + 8;
    for (const [label, color] of entries) {
      this.parts.push(
        `<line x1="${x}" y1="${y}" x2="${x + 22}" y2="${y}" stroke="${color}" stroke-width="2"/>`,
        `<text class="legend" x="${x + 28}" y="${y + 4}" font-size="12">${escapeXml(label)}</text>`
      );
      y += 18;
    }
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function plotArea(): { x0: number; x1: number; y0: number; y1: number } {
  return {
    x0: MARGIN.left,
    x1: WIDTH - MARGIN.right,
    y0: HEIGHT - MARGIN.bottom,
    y1: MARGIN.top,
  };
}
