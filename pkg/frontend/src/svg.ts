/** Minimal deterministic SVG string building. */

export type Attrs = Record<string, string | number>;

/** Format a coordinate with enough precision to be stable and compact. */
export function fmt(value: number): string {
  if (Number.isInteger(value)) return String(value);
  const rounded = value.toFixed(3);
  return rounded.replace(/\.?0+$/, "");
}

export function escapeText(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function el(tag: string, attrs: Attrs = {}, children: string[] = []): string {
  const parts = Object.entries(attrs).map(
    ([key, value]) => `${key}="${typeof value === "number" ? fmt(value) : value}"`,
  );
  const open = parts.length > 0 ? `<${tag} ${parts.join(" ")}` : `<${tag}`;
  if (children.length === 0) return `${open}/>`;
  return `${open}>${children.join("")}</${tag}>`;
}

export function svgDoc(width: number, height: number, children: string[]): string {
  return el(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      width,
      height,
      viewBox: `0 0 ${fmt(width)} ${fmt(height)}`,
    },
    children,
  );
}

export function text(x: number, y: number, content: string, attrs: Attrs = {}): string {
  return el(
    "text",
    { x, y, "font-family": "sans-serif", "font-size": 11, fill: "#333", ...attrs },
    [escapeText(content)],
  );
}
