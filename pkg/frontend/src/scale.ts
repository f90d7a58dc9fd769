/** Linear and log10 axis scales with tick generation. */

export interface Scale {
  toPx(v: number): number;
  ticks(): number[];
  domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  let [d0, d1] = domain;
  if (d0 === d1) {
    d0 -= 1;
    d1 += 1;
  }
  const [r0, r1] = range;
  const k = (r1 - r0) / (d1 - d0);
  return {
    domain: [d0, d1],
    toPx: (v) => r0 + (v - d0) * k,
    ticks: () => {
      const span = d1 - d0;
      const step = niceStep(span / 6);
      const out: number[] = [];
      for (let t = Math.ceil(d0 / step) * step; t <= d1 + 1e-12 * span; t += step) {
        out.push(roundTo(t, step));
      }
      return out;
    },
  };
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  let [d0, d1] = domain;
  if (!(d0 > 0) || !(d1 > 0)) {
    throw new Error(`log scale needs a positive domain, got [${d0}, ${d1}]`);
  }
  if (d0 === d1) {
    d0 /= 10;
    d1 *= 10;
  }
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  const [r0, r1] = range;
  const k = (r1 - r0) / (l1 - l0);
  return {
    domain: [d0, d1],
    toPx: (v) => r0 + (Math.log10(v) - l0) * k,
    ticks: () => {
      const out: number[] = [];
      for (let e = Math.ceil(l0 - 1e-9); e <= Math.floor(l1 + 1e-9); e++) {
        out.push(10 ** e);
      }
      return out.length >= 2 ? out : [d0, d1];
    },
  };
}

function niceStep(raw: number): number {
  const mag = 10 ** Math.floor(Math.log10(raw));
  const frac = raw / mag;
  if (frac <= 1) return mag;
  if (frac <= 2) return 2 * mag;
  if (frac <= 5) return 5 * mag;
  return 10 * mag;
}

function roundTo(v: number, step: number): number {
  const digits = Math.max(0, -Math.floor(Math.log10(step)) + 1);
  return Number(v.toFixed(digits + 2 > 15 ? 15 : digits + 2));
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    const e = Math.floor(Math.log10(a));
    const m = v / 10 ** e;
    return m === 1 ? `1e${e}` : `${Number(m.toPrecision(3))}e${e}`;
  }
  return `${Number(v.toPrecision(6))}`;
}
