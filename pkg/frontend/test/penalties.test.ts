import { describe, expect, it } from "vitest";
import { PENALTY_KINDS, penalty } from "../src/penalties";

describe("per-eigenvalue penalties", () => {
  it("vanish exactly at one", () => {
    for (const kind of PENALTY_KINDS) {
      expect(penalty(kind, 1)).toBeCloseTo(0, 12);
    }
  });

  it("match hand-evaluated values", () => {
    expect(penalty("amv", 4)).toBeCloseTo(9, 12);
    expect(penalty("spice", 4)).toBeCloseTo(2.25, 12);
    expect(penalty("airm", Math.E)).toBeCloseTo(1, 12);
    expect(penalty("jbld", 4)).toBeCloseTo(Math.log(5 / 4), 12);
  });

  it("are nonnegative on a sampled grid", () => {
    for (let i = 1; i <= 120; i++) {
      const lambda = (i * 6) / 120;
      for (const kind of PENALTY_KINDS) {
        expect(penalty(kind, lambda)).toBeGreaterThanOrEqual(0);
      }
    }
  });

  it("reject nonpositive eigenvalues", () => {
    expect(() => penalty("amv", 0)).toThrowError(RangeError);
    expect(() => penalty("jbld", -2)).toThrowError(RangeError);
  });
});
