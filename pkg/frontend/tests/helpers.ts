import { boot, App } from "../src/app";
import { FixtureServer } from "./server";

export interface Mounted {
  app: App;
  server: FixtureServer;
  root: HTMLElement;
}

let active: Mounted | null = null;

// Boots the dashboard against a fresh fixture server. `hash` is the
// deep-link fragment without the leading '#'.
export async function mountApp(hash = ""): Promise<Mounted> {
  if (active) throw new Error("previous mount not torn down");
  const server = new FixtureServer();
  server.install();
  // replaceState changes the hash without firing hashchange, so listeners
  // left over from an earlier mount in the same file stay quiet
  history.replaceState(null, "", hash ? `/#${hash}` : "/");
  const root = document.createElement("div");
  document.body.appendChild(root);
  const app = await boot(root);
  await app.idle();
  active = { app, server, root };
  return active;
}

export function teardownApp(): void {
  if (!active) return;
  const { server, root } = active;
  active = null;
  root.remove();
  server.uninstall();
  history.replaceState(null, "", "/");
  if (server.unmatched.length) {
    throw new Error(`requests outside the recorded surface: ${server.unmatched.join(", ")}`);
  }
}

export async function settle(app: App): Promise<void> {
  await app.idle();
}

// Waits one macrotask, enough for jsdom to deliver a queued hashchange.
export function tick(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

export function q<T extends HTMLElement>(root: ParentNode, selector: string): T {
  const node = root.querySelector<T>(selector);
  if (!node) throw new Error(`selector matched nothing: ${selector}`);
  return node;
}

export function qa<T extends HTMLElement>(root: ParentNode, selector: string): T[] {
  return Array.from(root.querySelectorAll<T>(selector));
}

export function setSlider(slider: HTMLInputElement, value: number): void {
  slider.value = String(value);
  slider.dispatchEvent(new Event("input"));
  slider.dispatchEvent(new Event("change"));
}
