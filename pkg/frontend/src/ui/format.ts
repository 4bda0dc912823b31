// Small presentation helpers shared by the renderers.

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

/** Fixed-point display form; full-precision values ride in data attributes. */
export function fmt(value: number, digits = 3): string {
  return value.toFixed(digits);
}

export function slug(text: string): string {
  return text
    .toLowerCase()
    .replace(/[^a-z0-9]+/g, "-")
    .replace(/^-+|-+$/g, "");
}

export function clockTime(iso: string): string {
  const t = iso.indexOf("T");
  return t === -1 ? iso : iso.slice(t + 1, t + 9);
}
