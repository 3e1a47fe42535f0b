#!/usr/bin/env node
/** plots render --spec <figure.json> [--out <file>] */

import * as fs from "fs";
import * as path from "path";

import { InputError } from "./files";
import { parseSpec, renderFigure } from "./figures";

function usage(): never {
  process.stderr.write("usage: plots render --spec <figure.json> [--out <file>]\n");
  process.exit(2);
}

export function main(argv: string[]): number {
  if (argv.length === 0 || argv[0] !== "render") {
    usage();
  }
  let specFile = "";
  let outOverride = "";
  for (let i = 1; i < argv.length; i++) {
    if (argv[i] === "--spec" && i + 1 < argv.length) {
      specFile = argv[++i];
    } else if (argv[i] === "--out" && i + 1 < argv.length) {
      outOverride = argv[++i];
    } else {
      usage();
    }
  }
  if (!specFile) {
    usage();
  }
  let doc: unknown;
  try {
    doc = JSON.parse(fs.readFileSync(specFile, "utf8"));
  } catch {
    process.stderr.write(`error: cannot read figure spec ${specFile}\n`);
    return 2;
  }
  try {
    const spec = parseSpec(doc);
    // paths in the spec are relative to the spec file itself
    const base = path.dirname(path.resolve(specFile));
    spec.input_dir = path.resolve(base, spec.input_dir);
    const out = outOverride || path.resolve(base, spec.output);
    const svg = renderFigure(spec);
    fs.mkdirSync(path.dirname(out), { recursive: true });
    fs.writeFileSync(out, svg);
    process.stdout.write(out + "\n");
    return 0;
  } catch (err) {
    if (err instanceof InputError) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
