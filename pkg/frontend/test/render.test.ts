import { existsSync, mkdtempSync, readFileSync, statSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { renderSvg } from "../src/chart.js";
import { main } from "../src/cli.js";
import { parseSweepCsv } from "../src/csv.js";
import { PRESETS } from "../src/presets.js";

const FIXTURES = join(__dirname, "fixtures");

describe("renderSvg", () => {
  it("draws theory lines and mc markers", () => {
    const rows = parseSweepCsv(readFileSync(join(FIXTURES, "ber-fig4.csv"), "utf8"));
    const svg = renderSvg(rows, PRESETS.fig4);
    expect(svg).toContain("<svg");
    expect(svg).toContain("<polyline");
    expect(svg).toContain("<circle");
    expect(svg).toContain("BER");
  });

  it("renders distinguishable series for a multi-detector dataset", () => {
    const rows = parseSweepCsv(readFileSync(join(FIXTURES, "ber-fig4.csv"), "utf8"));
    const svg = renderSvg(rows, PRESETS.fig4);
    const detectors = new Set(rows.map((r) => r.detector));
    for (const d of detectors) {
      expect(svg).toContain(`>${d}</text>`);
    }
    // at least two palette colors in use
    expect(svg).toContain("#1f77b4");
    expect(svg).toContain("#d62728");
  });

  it("handles a header-only csv with empty axes", () => {
    const svg = renderSvg([], PRESETS.fig4);
    expect(svg).toContain("no data");
    expect(svg).toContain("</svg>");
  });

  it("skips nonpositive values on a log axis instead of failing", () => {
    const text = [
      "x,detector,theory_ber,mc_ber,mc_radius,trials,skipped",
      "0,d,0.001,0,0,1000,0",
      "10,d,0.0001,0.0002,0.00005,1000,0",
    ].join("\n");
    const svg = renderSvg(parseSweepCsv(text), PRESETS.fig4);
    expect(svg).toContain("<polyline");
  });

  it("is a pure function of its inputs", () => {
    const rows = parseSweepCsv(readFileSync(join(FIXTURES, "ber-fig7.csv"), "utf8"));
    expect(renderSvg(rows, PRESETS.fig7)).toBe(renderSvg(rows, PRESETS.fig7));
  });
});

describe("cli", () => {
  it("renders every preset from the selftest datasets (acceptance 10)", () => {
    const out = mkdtempSync(join(tmpdir(), "plotgen-"));
    for (const [name, preset] of Object.entries(PRESETS)) {
      const rc = main([name, "--in", FIXTURES, "--out", out]);
      expect(rc, `preset ${name}`).toBe(0);
      const file = join(out, preset.output);
      expect(existsSync(file), `output of ${name}`).toBe(true);
      expect(statSync(file).size).toBeGreaterThan(500);
    }
  });

  it("exits 2 on unknown preset or missing --in", () => {
    expect(main(["not-a-preset", "--in", FIXTURES])).toBe(2);
    expect(main(["fig4"])).toBe(2);
    expect(main([])).toBe(2);
  });

  it("exits 1 on a missing csv", () => {
    const out = mkdtempSync(join(tmpdir(), "plotgen-"));
    expect(main(["fig4", "--in", out, "--out", out])).toBe(1);
  });

  it("exits 1 on schema mismatch", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotgen-"));
    writeFileSync(join(dir, "ber-fig4.csv"), "x,detector,wrong,mc_ber,mc_radius,trials,skipped\n");
    expect(main(["fig4", "--in", dir, "--out", dir])).toBe(1);
  });

  it("renders an empty-axes figure from a header-only csv with exit 0", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotgen-"));
    writeFileSync(
      join(dir, "ber-fig4.csv"),
      "x,detector,theory_ber,mc_ber,mc_radius,trials,skipped\n",
    );
    expect(main(["fig4", "--in", dir, "--out", dir])).toBe(0);
    expect(existsSync(join(dir, "fig4.svg"))).toBe(true);
  });
});
