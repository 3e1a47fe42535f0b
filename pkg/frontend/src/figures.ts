/** The three figure kinds: comparison curves with bands, b-sweep, rate fits. */

import { InputError, loadSummaries, loadSweep, loadTraces } from "./files";
import { PALETTE, Scale, SvgBuilder, linearScale, logScale, plotArea } from "./svg";

export interface FigureSpec {
  kind: "comparison" | "sweep" | "rate";
  input_dir: string;
  output: string;
  title?: string;
  log_x?: boolean;
  log_y?: boolean;
  labels?: Record<string, string>;
  f_star?: number; // rate: gap reference
  window?: [number, number]; // rate: fit overlay over this iteration window
}

export function parseSpec(doc: any): FigureSpec {
  if (!doc || typeof doc !== "object") {
    throw new InputError("figure spec must be a JSON object");
  }
  const known = new Set([
    "kind", "input_dir", "output", "title", "log_x", "log_y", "labels", "f_star", "window",
  ]);
  for (const key of Object.keys(doc)) {
    if (!known.has(key)) {
      throw new InputError(`figure spec: unknown key '${key}'`);
    }
  }
  if (!["comparison", "sweep", "rate"].includes(doc.kind)) {
    throw new InputError(`figure spec: kind must be comparison|sweep|rate, got '${doc.kind}'`);
  }
  if (typeof doc.input_dir !== "string" || typeof doc.output !== "string") {
    throw new InputError("figure spec: 'input_dir' and 'output' are required strings");
  }
  return doc as FigureSpec;
}

function scaleFor(log: boolean, lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (log) {
    return logScale(lo, hi, outLo, outHi);
  }
  return linearScale(lo, hi, outLo, outHi);
}

/** Keep only points with positive ordinates when a log axis is requested. */
function logFilter<T extends { xs: number[]; rows: number[][] }>(series: T, logY: boolean): T {
  if (!logY) return series;
  const keep = series.xs.map((_, i) => series.rows.every((r) => r[i] > 0));
  return {
    ...series,
    xs: series.xs.filter((_, i) => keep[i]),
    rows: series.rows.map((r) => r.filter((_, i) => keep[i])),
  };
}

export function renderComparison(spec: FigureSpec): string {
  const logY = spec.log_y !== false; // convergence curves default to log y
  const summary = loadSummaries(spec.input_dir);
  const area = plotArea();

  const series = summary.curves.map((c) =>
    logFilter({ name: c.algorithm, xs: c.evals, rows: [c.mean, c.lower, c.upper] }, logY)
  );
  for (const s of series) {
    if (s.xs.length === 0) {
      throw new InputError(
        `${spec.input_dir}: curve '${s.name}' has no positive values to draw on a log axis`
      );
    }
  }
  const allX = series.flatMap((s) => s.xs);
  const allY = series.flatMap((s) => s.rows.flat());
  const x = scaleFor(!!spec.log_x, Math.min(...allX), Math.max(...allX), area.x0, area.x1);
  const y = scaleFor(logY, Math.min(...allY), Math.max(...allY), area.y0, area.y1);

  const title = spec.title ?? `${summary.instance} (${summary.mode} shadows)`;
  const svg = new SvgBuilder(title);
  svg.axes(x, y, "oracle evaluations", "best value");
  const legend: Array<[string, string]> = [];
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    svg.band(s.xs, s.rows[1], s.rows[2], x, y, color, s.name);
    svg.curve(s.xs, s.rows[0], x, y, color, s.name);
    legend.push([spec.labels?.[s.name] ?? s.name, color]);
  });
  svg.legend(legend);
  return svg.render();
}

export function renderSweep(spec: FigureSpec): string {
  const rows = loadSweep(spec.input_dir);
  const logY = spec.log_y !== false;
  const area = plotArea();
  const ys = rows.flatMap((r) => [r.suboptMin, r.suboptMean, r.suboptMax]).filter(
    (v) => !logY || v > 0
  );
  if (ys.length === 0) {
    throw new InputError(`${spec.input_dir}: sweep table has no drawable values`);
  }
  const x = linearScale(0, 1, area.x0, area.x1);
  const y = scaleFor(logY, Math.min(...ys), Math.max(...ys), area.y0, area.y1);
  const relative = rows.every((r) => r.relative);
  const yLabel = relative ? "final relative suboptimality" : "final best value";
  const svg = new SvgBuilder(spec.title ?? "suboptimality vs base-dimension fraction");
  svg.axes(x, y, "b / n", yLabel);
  const color = PALETTE[0];
  const drawable = rows.filter((r) => !logY || r.suboptMean > 0);
  svg.band(
    drawable.map((r) => r.bOverN),
    drawable.map((r) => (logY && r.suboptMin <= 0 ? r.suboptMean : r.suboptMin)),
    drawable.map((r) => (logY && r.suboptMax <= 0 ? r.suboptMean : r.suboptMax)),
    x, y, color, "sweep"
  );
  svg.curve(drawable.map((r) => r.bOverN), drawable.map((r) => r.suboptMean), x, y, color, "sweep");
  for (const r of drawable) {
    svg.point(x(r.bOverN), y(r.suboptMean), color);
  }
  svg.legend([["final suboptimality (mean over seeds)", color]]);
  return svg.render();
}

export function renderRate(spec: FigureSpec): string {
  const fStar = spec.f_star ?? 0;
  const traces = loadTraces(spec.input_dir);
  const area = plotArea();

  const series = traces.map((t) => {
    const keep = t.bestF.map((v) => v - fStar > 0);
    return {
      name: t.name,
      xs: t.iters.filter((_, i) => keep[i]),
      gaps: t.bestF.map((v) => v - fStar).filter((_, i) => keep[i]),
    };
  }).filter((s) => s.xs.length >= 2);
  if (series.length === 0) {
    throw new InputError(`${spec.input_dir}: no trace stays above f_star`);
  }
  const allX = series.flatMap((s) => s.xs);
  const allY = series.flatMap((s) => s.gaps);
  const x = linearScale(Math.min(...allX), Math.max(...allX), area.x0, area.x1);
  const y = logScale(Math.min(...allY), Math.max(...allY), area.y0, area.y1);

  const svg = new SvgBuilder(spec.title ?? "record gap vs inner iteration");
  svg.axes(x, y, "inner iteration", "best value - f*");
  const legend: Array<[string, string]> = [];
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    svg.curve(s.xs, s.gaps, x, y, color, s.name);
    legend.push([spec.labels?.[s.name] ?? s.name, color]);
    if (spec.window) {
      const [lo, hi] = spec.window;
      const idx = s.xs.map((v, k) => k).filter((k) => s.xs[k] >= lo && s.xs[k] < hi);
      if (idx.length >= 2) {
        // least-squares fit of log(gap) over the window
        const xs = idx.map((k) => s.xs[k]);
        const ys = idx.map((k) => Math.log(s.gaps[k]));
        const n = xs.length;
        const mx = xs.reduce((a, b) => a + b, 0) / n;
        const my = ys.reduce((a, b) => a + b, 0) / n;
        let sxx = 0;
        let sxy = 0;
        for (let k = 0; k < n; k++) {
          sxx += (xs[k] - mx) * (xs[k] - mx);
          sxy += (xs[k] - mx) * (ys[k] - my);
        }
        const slope = sxx > 0 ? sxy / sxx : 0;
        const fitY = (v: number) => Math.exp(my + slope * (v - mx));
        svg.curve([lo, hi], [fitY(lo), fitY(hi)], x, y, color, s.name, true);
      }
    }
  });
  svg.legend(legend);
  return svg.render();
}

export function renderFigure(spec: FigureSpec): string {
  if (spec.kind === "comparison") return renderComparison(spec);
  if (spec.kind === "sweep") return renderSweep(spec);
  return renderRate(spec);
}
