#!/usr/bin/env node
/**
 * Indicator-vs-n figures: one line per point scheme.
 *
 *   node dist/fig_indicator.js --input golden/mu_h2.csv --out mu_h2.svg [--logy]
 *
 * Works on the mu-h2 and mu-da CSV schemas (any CSV with point_scheme, n and
 * mu columns; override with --series/--x/--y).
 */

import { render } from "./figure.js";
import { parseCommonFlags, runMain } from "./cli_common.js";

runMain(() => {
  const flags = parseCommonFlags(process.argv.slice(2));
  render({
    inputs: flags.inputs,
    seriesColumn: flags.series ?? "point_scheme",
    xColumn: flags.x ?? "n",
    yColumn: flags.y ?? "mu",
    logY: flags.logY,
    output: flags.output,
  });
  console.log(`wrote ${flags.output}`);
});
