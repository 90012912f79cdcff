/** Linear and log10 axis scales with round-number ticks. */

export interface Scale {
  (value: number): number;
  ticks(): number[];
  domain: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.ticks = () => linearTicks(d0, d1, 6);
  return fn;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const lo = Math.log10(domain[0]);
  const hi = Math.log10(domain[1]);
  const [r0, r1] = range;
  const span = hi - lo || 1;
  const fn = ((v: number) => r0 + ((Math.log10(v) - lo) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.ticks = () => {
    const ticks: number[] = [];
    for (let p = Math.ceil(lo); p <= Math.floor(hi); p++) {
      ticks.push(10 ** p);
    }
    // thin out crowded decade ticks deterministically
    const step = Math.max(1, Math.ceil(ticks.length / 8));
    return ticks.filter((_, i) => i % step === 0);
  };
  return fn;
}

function linearTicks(lo: number, hi: number, count: number): number[] {
  const span = hi - lo || 1;
  const rawStep = span / count;
  const mag = 10 ** Math.floor(Math.log10(rawStep));
  const candidates = [1, 2, 2.5, 5, 10].map((m) => m * mag);
  const step = candidates.find((c) => span / c <= count) ?? candidates[candidates.length - 1];
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-12 * span; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return ticks;
}

/** Fixed-notation tick label without float noise. */
export function tickLabel(v: number): string {
  if (v === 0) return "0";
  const abs = Math.abs(v);
  if (abs >= 1e4 || abs < 1e-3) {
    const exp = Math.floor(Math.log10(abs));
    const mant = v / 10 ** exp;
    const m = Number(mant.toPrecision(3));
    return m === 1 ? `1e${exp}` : m === -1 ? `-1e${exp}` : `${m}e${exp}`;
  }
  return String(Number(v.toPrecision(6)));
}
