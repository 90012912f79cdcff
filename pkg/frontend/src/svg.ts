/**
 * Minimal deterministic SVG document builder. Coordinates are emitted at
 * fixed precision so identical inputs produce byte-identical files.
 */

const PRECISION = 2;

export function fmt(v: number): string {
  const s = v.toFixed(PRECISION);
  return s === "-0.00" ? "0.00" : s;
}

export class SvgDoc {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {}

  line(x1: number, y1: number, x2: number, y2: number, style: string): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ${style}/>`,
    );
  }

  path(points: Array<[number, number]>, style: string): void {
    if (points.length === 0) return;
    const d = points
      .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
      .join("");
    this.parts.push(`<path d="${d}" fill="none" ${style}/>`);
  }

  circle(cx: number, cy: number, r: number, style: string): void {
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" ${style}/>`);
  }

  text(x: number, y: number, content: string, style = ""): void {
    this.parts.push(`<text x="${fmt(x)}" y="${fmt(y)}" ${style}>${escapeXml(content)}</text>`);
  }

  raw(fragment: string): void {
    this.parts.push(fragment);
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}" font-family="Helvetica,sans-serif" font-size="11">`,
      `<rect width="${this.width}" height="${this.height}" fill="white"/>`,
      ...this.parts,
      "</svg>",
      "",
    ].join("\n");
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
