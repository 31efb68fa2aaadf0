/** Minimal deterministic SVG assembly: fixed layout, fixed palette, toFixed coordinates. */

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { left: 76, right: 24, top: 28, bottom: 56 };

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

export function px(value: number): string {
  return value.toFixed(2);
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): string {
  return `<line x1="${px(x1)}" y1="${px(y1)}" x2="${px(x2)}" y2="${px(y2)}" stroke="${stroke}" stroke-width="${width}"/>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  anchor: "start" | "middle" | "end",
  extra = "",
): string {
  return `<text x="${px(x)}" y="${px(y)}" text-anchor="${anchor}" font-family="sans-serif" font-size="12"${extra}>${escapeXml(content)}</text>`;
}

export function polylinePath(points: Array<[number, number]>, stroke: string): string {
  const d = points.map(([x, y], i) => `${i === 0 ? "M" : "L"}${px(x)} ${px(y)}`).join(" ");
  return `<path d="${d}" fill="none" stroke="${stroke}" stroke-width="1.5"/>`;
}

export function document(body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    ...body,
    "</svg>",
    "",
  ].join("\n");
}
