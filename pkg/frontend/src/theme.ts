import type { Label, Verdict } from "./types";

// Fixed color semantics, each always doubled with a text label so no
// information rides on color alone.
export const COLORS = {
  good: "#1a7f37",
  bad: "#c0392b",
  located: "#7d3cff",
  disadvantaged: "#d4a017",
  advantaged: "#2b6cb0",
  zone: "rgba(26, 127, 55, 0.18)",
};

export function labelColor(label: Label): string {
  return label === "Good" ? COLORS.good : COLORS.bad;
}

export function verdictClass(verdict: Verdict): string {
  return verdict === "fair" ? "dot-fair" : "dot-unfair";
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") {
      node.className = value;
    } else {
      node.setAttribute(key, value);
    }
  }
  if (text !== undefined) node.textContent = text;
  return node;
}

export function clear(node: HTMLElement): void {
  node.innerHTML = "";
}

export function pctText(value: number): string {
  return `${value.toFixed(1)}%`;
}
