/** Shared flag parsing for the figure scripts. */

import { parseArgs } from "node:util";
import { FigureError } from "./csv.js";

export interface CommonFlags {
  inputs: string[];
  output: string;
  logY: boolean;
  series?: string;
  x?: string;
  y?: string;
}

export function parseCommonFlags(argv: string[]): CommonFlags {
  const { values } = parseArgs({
    args: argv,
    options: {
      input: { type: "string", multiple: true },
      out: { type: "string" },
      logy: { type: "boolean", default: false },
      series: { type: "string" },
      x: { type: "string" },
      y: { type: "string" },
    },
  });
  if (!values.input || values.input.length === 0) {
    throw new FigureError("--input is required (repeatable)");
  }
  if (!values.out) {
    throw new FigureError("--out is required");
  }
  return {
    inputs: values.input,
    output: values.out,
    logY: values.logy ?? false,
    series: values.series,
    x: values.x,
    y: values.y,
  };
}

export function runMain(fn: () => void): void {
  try {
    fn();
  } catch (err) {
    if (err instanceof FigureError) {
      console.error(`figure error: ${err.message}`);
      process.exit(1);
    }
    throw err;
  }
}
