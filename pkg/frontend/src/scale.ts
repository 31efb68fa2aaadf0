/** Linear and log10 axis scales with deterministic tick generation. */

export interface Scale {
  /** data value -> pixel coordinate */
  apply(value: number): number;
  ticks: number[];
  domain: [number, number];
}

function niceStep(span: number, targetTicks: number): number {
  const raw = span / Math.max(targetTicks, 1);
  const power = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const mult of [1, 2, 5, 10]) {
    if (mult * power >= raw) return mult * power;
  }
  return 10 * power;
}

export function linearScale(lo: number, hi: number, pixLo: number, pixHi: number, targetTicks = 6): Scale {
  if (!(hi > lo)) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.5 : 0.5;
    lo -= pad;
    hi += pad;
  }
  const step = niceStep(hi - lo, targetTicks);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12 * step; t += step) {
    ticks.push(Math.abs(t) < 1e-12 * step ? 0 : t);
  }
  const span = hi - lo;
  return {
    apply: (v) => pixLo + ((v - lo) / span) * (pixHi - pixLo),
    ticks,
    domain: [lo, hi],
  };
}

export function logScale(lo: number, hi: number, pixLo: number, pixHi: number): Scale {
  if (!(lo > 0) || !(hi > 0)) {
    throw new Error("log scale requires positive domain");
  }
  if (!(hi > lo)) {
    lo /= 2;
    hi *= 2;
  }
  const la = Math.log10(lo);
  const lb = Math.log10(hi);
  const ticks: number[] = [];
  const decades = Math.floor(lb) - Math.ceil(la);
  if (decades >= 1) {
    for (let e = Math.ceil(la); e <= Math.floor(lb); e += 1) {
      ticks.push(Math.pow(10, e));
    }
  } else {
    // Less than a decade: place 1-2-5 mantissa ticks.
    for (let e = Math.floor(la); e <= Math.floor(lb); e += 1) {
      for (const m of [1, 2, 5]) {
        const v = m * Math.pow(10, e);
        if (v >= lo * 0.999999 && v <= hi * 1.000001) ticks.push(v);
      }
    }
  }
  return {
    apply: (v) => pixLo + ((Math.log10(v) - la) / (lb - la)) * (pixHi - pixLo),
    ticks,
    domain: [lo, hi],
  };
}

/** Short deterministic label for a tick value. */
export function tickLabel(value: number): string {
  if (value === 0) return "0";
  const magnitude = Math.abs(value);
  if (magnitude >= 1e4 || magnitude < 1e-3) {
    return value.toExponential(0).replace("+", "");
  }
  const text = value.toPrecision(4);
  return text.includes(".") ? text.replace(/\.?0+$/, "") : text;
}
