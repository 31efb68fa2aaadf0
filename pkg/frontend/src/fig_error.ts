#!/usr/bin/env node
/**
 * Error-vs-n figures with the optimal bound overlaid.
 *
 *   node dist/fig_error.js --input golden/identify.csv --out identify.svg --logy
 *
 * Auto-detects the error column (h2_error for identification runs, est_error
 * for estimation runs) and overlays the emitted bound column; override with
 * --y / --series / --x.
 */

import { loadCsv, mergeTables, FigureError } from "./csv.js";
import { render } from "./figure.js";
import { parseCommonFlags, runMain } from "./cli_common.js";

runMain(() => {
  const flags = parseCommonFlags(process.argv.slice(2));
  let yColumn = flags.y;
  if (!yColumn) {
    const table = mergeTables(flags.inputs.map(loadCsv));
    yColumn = ["h2_error", "est_error"].find((c) => table.columns.includes(c));
    if (!yColumn) {
      throw new FigureError("missing column 'h2_error' or 'est_error'; pass --y explicitly");
    }
  }
  render({
    inputs: flags.inputs,
    seriesColumn: flags.series ?? "point_scheme",
    xColumn: flags.x ?? "n",
    yColumn,
    logY: flags.logY,
    output: flags.output,
    overlayColumns: ["bound"],
  });
  console.log(`wrote ${flags.output}`);
});
