import { el } from "./theme";
import type { Label } from "./types";

// The study's instance stimuli are not published, so instances are drawn
// as generated cards: the id on a background keyed to the rated credit.
export function makeInstanceCard(id: number, rated: Label): HTMLElement {
  const card = el("div", {
    class: `instance-card card-${rated.toLowerCase()}`,
    "data-role": "bucket-card",
    "data-id": String(id),
    role: "button",
    tabindex: "0",
    title: `instance ${id}, rated ${rated}`,
  });
  card.appendChild(el("span", { class: "card-id" }, `#${id}`));
  card.appendChild(el("span", { class: "card-label" }, rated));
  return card;
}
