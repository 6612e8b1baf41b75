import { afterEach, describe, expect, it } from "vitest";
import { mountApp, teardownApp, q, qa } from "./helpers";

afterEach(teardownApp);

describe("what-if editor", () => {
  it("starts with no edits and the stored accuracy", async () => {
    const { root } = await mountApp("panel=whatif");
    expect(q(root, "[data-role='edit-badge']").textContent).toBe("0 edits");
    expect(root.querySelector("[data-role='hypo-tag']")).toBeNull();
    expect(root.textContent).toContain("stored accuracy 74.5%");
  });

  it("flips a prediction and rereads every affected figure", async () => {
    const { root, app, server } = await mountApp("panel=whatif");
    const toggle = q(root, "[data-role='label-toggle'][data-id='3'][data-target='prediction']");
    expect(toggle.textContent).toBe("Good");
    toggle.click();
    await app.idle();

    const posts = server.callsTo("POST", "/api/whatif/edits");
    expect(posts.length).toBe(1);
    expect(posts[0].body).toEqual({ instance_id: 3, target: "prediction", new_value: "Bad" });

    expect(q(root, "[data-role='edit-badge']").textContent).toBe("1 edit");
    expect(q(root, "[data-role='hypo-tag']").textContent).toBe("hypothetical accuracy 74.0%");
    const flipped = q(root, "[data-role='label-toggle'][data-id='3'][data-target='prediction']");
    expect(flipped.textContent).toBe("Bad (edited)");
    expect(flipped.classList.contains("toggle-overridden")).toBe(true);

    const chips = Object.fromEntries(
      qa(root, "[data-role='whatif-metric']").map((c) => [c.dataset.metric, c.dataset.value]));
    expect(chips).toEqual({
      DP: "10.4",
      EOpp: "8.8",
      PE: "15.6",
      EOdds: "15.6",
      OT: "4.1",
      CSP: "33.3",
    });
    expect(q(root, "[data-role='whatif-metric'][data-metric='DP']").textContent)
      .toBe("DP 10.4% (unfair)");
  });

  it("reverts a single edit by clicking the toggle again", async () => {
    const { root, app, server } = await mountApp("panel=whatif");
    q(root, "[data-role='label-toggle'][data-id='3'][data-target='prediction']").click();
    await app.idle();
    q(root, "[data-role='label-toggle'][data-id='3'][data-target='prediction']").click();
    await app.idle();

    const deletes = server.callsTo("DELETE", "/api/whatif/edits");
    expect(deletes.length).toBe(1);
    expect(deletes[0].query.instance_id).toBe("3");
    expect(deletes[0].query.target).toBe("prediction");
    expect(q(root, "[data-role='edit-badge']").textContent).toBe("0 edits");
    expect(root.textContent).toContain("stored accuracy 74.5%");
  });

  it("clears everything through the reset button", async () => {
    const { root, app, server } = await mountApp("panel=whatif");
    q(root, "[data-role='label-toggle'][data-id='3'][data-target='prediction']").click();
    await app.idle();
    q(root, "[data-role='whatif-reset']").click();
    await app.idle();

    const deletes = server.callsTo("DELETE", "/api/whatif/edits");
    expect(deletes.length).toBe(1);
    expect(deletes[0].query.instance_id).toBeUndefined();
    expect(q(root, "[data-role='edit-badge']").textContent).toBe("0 edits");
  });
});
