/**
 * Reader for the bslab sweep CSV schema:
 *
 *   x,detector,theory_ber,mc_ber,mc_radius,trials,skipped
 *
 * The header is validated column by column so a mismatch names the
 * offending column, and every numeric cell must parse.
 */

export const EXPECTED_HEADER = [
  "x",
  "detector",
  "theory_ber",
  "mc_ber",
  "mc_radius",
  "trials",
  "skipped",
] as const;

export interface SweepRow {
  x: number;
  detector: string;
  theoryBer: number;
  mcBer: number;
  mcRadius: number;
  trials: number;
  skipped: number;
}

export class SchemaError extends Error {}

function splitCsvLine(line: string): string[] {
  // No quoting is ever emitted by the producer; keep the split strict.
  return line.split(",");
}

export function parseSweepCsv(text: string, source = "<csv>"): SweepRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${source}: empty file, expected header ${EXPECTED_HEADER.join(",")}`);
  }
  const header = splitCsvLine(lines[0]);
  for (let i = 0; i < EXPECTED_HEADER.length; i++) {
    if (header[i] !== EXPECTED_HEADER[i]) {
      throw new SchemaError(
        `${source}: header column ${i + 1} is ${JSON.stringify(header[i] ?? null)}, expected "${EXPECTED_HEADER[i]}"`,
      );
    }
  }
  if (header.length !== EXPECTED_HEADER.length) {
    throw new SchemaError(
      `${source}: unexpected extra header column "${header[EXPECTED_HEADER.length]}"`,
    );
  }

  const rows: SweepRow[] = [];
  for (let ln = 1; ln < lines.length; ln++) {
    const cells = splitCsvLine(lines[ln]);
    if (cells.length !== EXPECTED_HEADER.length) {
      throw new SchemaError(`${source}:${ln + 1}: expected ${EXPECTED_HEADER.length} cells, got ${cells.length}`);
    }
    const num = (idx: number, column: string, allowNaN = false): number => {
      const v = Number(cells[idx]);
      if (Number.isNaN(v) && !(allowNaN && cells[idx].toLowerCase() === "nan")) {
        throw new SchemaError(`${source}:${ln + 1}: column "${column}" is not numeric: ${cells[idx]}`);
      }
      return v;
    };
    rows.push({
      x: num(0, "x"),
      detector: cells[1],
      theoryBer: num(2, "theory_ber", true),
      mcBer: num(3, "mc_ber", true),
      mcRadius: num(4, "mc_radius", true),
      trials: num(5, "trials"),
      skipped: num(6, "skipped"),
    });
  }
  return rows;
}

export interface Series {
  label: string;
  points: SweepRow[];
}

/** Group rows by detector label, points sorted by x. */
export function groupSeries(rows: SweepRow[]): Series[] {
  const by = new Map<string, SweepRow[]>();
  for (const r of rows) {
    const bucket = by.get(r.detector);
    if (bucket) bucket.push(r);
    else by.set(r.detector, [r]);
  }
  return [...by.entries()]
    .sort(([a], [b]) => a.localeCompare(b))
    .map(([label, points]) => ({
      label,
      points: points.slice().sort((p, q) => p.x - q.x),
    }));
}
