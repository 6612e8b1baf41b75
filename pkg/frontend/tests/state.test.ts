import { describe, expect, it } from "vitest";
import { decodeState, defaultState, encodeState } from "../src/state";

describe("view state codec", () => {
  it("round-trips a fully populated state", () => {
    const state = defaultState();
    state.panel = "group";
    state.protectedFeature = "gender";
    state.subgroupFeatures = ["gender", "foreign_worker"];
    state.legitFeature = "credit_history";
    state.stratum = "A30";
    state.explainMetric = "CSP";
    state.thresholds = { group: 0, subgroup: 25, individual: 100 };
    state.selectedInstance = 427;
    state.session = "t0";
    state.teamId = "plenary";
    expect(decodeState(`#${encodeState(state)}`)).toEqual(state);
  });

  it("round-trips the default state", () => {
    const state = defaultState();
    expect(decodeState(`#${encodeState(state)}`)).toEqual(state);
  });

  it("omits the session parameter for the default session", () => {
    expect(encodeState(defaultState())).not.toContain("session=");
    const state = defaultState();
    state.session = "w1";
    expect(encodeState(state)).toContain("session=w1");
  });

  it("falls back to defaults on garbage input", () => {
    expect(decodeState("#panel=nope&g=abc&id=")).toEqual(defaultState());
    expect(decodeState("")).toEqual(defaultState());
    expect(decodeState("#not even a query string")).toEqual(defaultState());
  });

  it("keeps recognized fields from a partial hash", () => {
    const state = decodeState("#panel=team&team=t2");
    expect(state.panel).toBe("team");
    expect(state.teamId).toBe("t2");
    expect(state.protectedFeature).toBe("age_group");
    expect(state.thresholds).toEqual({ group: 10, subgroup: 10, individual: 95 });
  });
});
