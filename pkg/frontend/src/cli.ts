#!/usr/bin/env node
/**
 * plotgen <preset> --in DIR --out DIR
 *
 * Renders one figure preset from the sweep CSVs.  Exit codes: 0 rendered,
 * 1 data error (missing file, schema mismatch -- the message names the
 * offending column), 2 usage error.
 */

import { mkdirSync, readFileSync, realpathSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { renderSvg } from "./chart.js";
import { SchemaError, parseSweepCsv } from "./csv.js";
import { PRESETS } from "./presets.js";

function usage(): string {
  const names = Object.keys(PRESETS).join(", ");
  return `usage: plotgen <preset> --in DIR [--out DIR]\npresets: ${names}`;
}

export function main(argv: string[]): number {
  const args = [...argv];
  const preset = args.shift();
  if (preset === undefined || preset === "--help" || preset === "-h") {
    console.log(usage());
    return preset === undefined ? 2 : 0;
  }
  const spec = PRESETS[preset];
  if (spec === undefined) {
    console.error(`unknown preset "${preset}"\n${usage()}`);
    return 2;
  }
  let inDir: string | undefined;
  let outDir = ".";
  while (args.length > 0) {
    const flag = args.shift();
    if (flag === "--in") inDir = args.shift();
    else if (flag === "--out") outDir = args.shift() ?? ".";
    else {
      console.error(`unknown flag "${flag}"\n${usage()}`);
      return 2;
    }
  }
  if (inDir === undefined) {
    console.error(`--in DIR is required\n${usage()}`);
    return 2;
  }
  const inputPath = join(inDir, spec.input);
  let text: string;
  try {
    text = readFileSync(inputPath, "utf8");
  } catch (err) {
    console.error(`cannot read ${inputPath}: ${(err as Error).message}`);
    return 1;
  }
  try {
    const rows = parseSweepCsv(text, inputPath);
    const svg = renderSvg(rows, spec);
    mkdirSync(outDir, { recursive: true });
    const outPath = join(outDir, spec.output);
    writeFileSync(outPath, svg, "utf8");
    console.log(outPath);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(err.message);
      return 1;
    }
    console.error(`render failed: ${(err as Error).message}`);
    return 1;
  }
}

function invokedDirectly(): boolean {
  if (process.argv[1] === undefined) return false;
  try {
    return realpathSync(process.argv[1]) === realpathSync(fileURLToPath(import.meta.url));
  } catch {
    return false;
  }
}

if (invokedDirectly()) {
  process.exit(main(process.argv.slice(2)));
}
