/** Readers for the harness's on-disk formats (summary/trace/sweep CSVs). */

import * as fs from "fs";
import * as path from "path";

export class InputError extends Error {}

export interface SummaryCurve {
  algorithm: string;
  evals: number[];
  mean: number[];
  lower: number[];
  upper: number[];
}

export interface SummaryIndex {
  instance: string;
  mode: string;
  curves: SummaryCurve[];
}

export interface TraceData {
  name: string;
  evals: number[];
  iters: number[];
  bestF: number[];
}

export interface SweepRow {
  b: number;
  bOverN: number;
  suboptMin: number;
  suboptMean: number;
  suboptMax: number;
  relative: boolean;
}

function readText(file: string): string {
  try {
    return fs.readFileSync(file, "utf8");
  } catch {
    throw new InputError(`cannot read ${file}`);
  }
}

/** Parse a headered CSV of plain numbers; every row must match the header. */
export function parseNumericCsv(file: string, expectedHeader: string): number[][] {
  const text = readText(file).trim();
  const lines = text.split(/\r?\n/);
  if (lines.length < 2 || lines[0].trim() !== expectedHeader) {
    throw new InputError(`${file}: expected header '${expectedHeader}'`);
  }
  const width = expectedHeader.split(",").length;
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== width) {
      throw new InputError(`${file}: line ${i + 1} has ${parts.length} fields, expected ${width}`);
    }
    const row = parts.map(Number);
    if (row.some((v) => Number.isNaN(v))) {
      throw new InputError(`${file}: line ${i + 1} is not numeric`);
    }
    rows.push(row);
  }
  return rows;
}

export function loadSummaries(dir: string): SummaryIndex {
  const indexFile = path.join(dir, "summary.json");
  if (!fs.existsSync(indexFile)) {
    throw new InputError(`${indexFile}: missing (run 'solar-bench aggregate' first)`);
  }
  let doc: any;
  try {
    doc = JSON.parse(readText(indexFile));
  } catch {
    throw new InputError(`${indexFile}: malformed JSON`);
  }
  if (!doc || typeof doc.algorithms !== "object") {
    throw new InputError(`${indexFile}: missing 'algorithms'`);
  }
  const curves: SummaryCurve[] = [];
  for (const name of Object.keys(doc.algorithms).sort()) {
    const file = path.join(dir, doc.algorithms[name].file);
    const rows = parseNumericCsv(file, "evals,mean,lower,upper");
    curves.push({
      algorithm: name,
      evals: rows.map((r) => r[0]),
      mean: rows.map((r) => r[1]),
      lower: rows.map((r) => r[2]),
      upper: rows.map((r) => r[3]),
    });
  }
  if (curves.length === 0) {
    throw new InputError(`${indexFile}: no algorithms listed`);
  }
  return { instance: String(doc.instance ?? ""), mode: String(doc.mode ?? ""), curves };
}

export function loadTraces(dir: string): TraceData[] {
  let names: string[];
  try {
    names = fs.readdirSync(dir);
  } catch {
    throw new InputError(`cannot read directory ${dir}`);
  }
  const files = names.filter((f) => f.endsWith(".csv") && !f.startsWith("summary")).sort();
  const traces = files.map((f) => {
    const rows = parseNumericCsv(path.join(dir, f), "evals,iter,best_f,wall_ms");
    return {
      name: f.replace(/\.csv$/, ""),
      evals: rows.map((r) => r[0]),
      iters: rows.map((r) => r[1]),
      bestF: rows.map((r) => r[2]),
    };
  });
  if (traces.length === 0) {
    throw new InputError(`${dir}: no trace files`);
  }
  return traces;
}

export function loadSweep(fileOrDir: string): SweepRow[] {
  let file = fileOrDir;
  if (fs.existsSync(fileOrDir) && fs.statSync(fileOrDir).isDirectory()) {
    const names = fs.readdirSync(fileOrDir).filter((f) => f.startsWith("sweep_b__")).sort();
    if (names.length === 0) {
      throw new InputError(`${fileOrDir}: no sweep_b__*.csv table`);
    }
    file = path.join(fileOrDir, names[0]);
  }
  const rows = parseNumericCsv(file, "b,b_over_n,subopt_min,subopt_mean,subopt_max,relative");
  return rows.map((r) => ({
    b: r[0],
    bOverN: r[1],
    suboptMin: r[2],
    suboptMean: r[3],
    suboptMax: r[4],
    relative: r[5] !== 0,
  }));
}
