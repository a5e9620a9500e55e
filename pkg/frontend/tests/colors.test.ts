import { describe, expect, it } from "vitest";

import { STATUS_COLORS, ratioColor, ratioGreen, statusColor } from "../src/colors.js";

describe("status color mapping", () => {
  it("maps over-performance to green", () => {
    expect(statusColor("over")).toBe("green");
  });

  it("maps under-performance to red", () => {
    expect(statusColor("under")).toBe("red");
  });

  it("maps neutral to blue", () => {
    expect(statusColor("neutral")).toBe("blue");
  });

  it("matches the mapping snapshot", () => {
    expect(STATUS_COLORS).toMatchSnapshot();
  });
});

describe("valid-ratio rule", () => {
  it("is strict: 0.6667 is not green", () => {
    expect(ratioGreen(0.6667)).toBe(false);
    expect(ratioColor(0.6667)).toBe("red");
  });

  it("0.6700 is green", () => {
    expect(ratioGreen(0.67)).toBe(true);
    expect(ratioColor(0.67)).toBe("green");
  });

  it("two thirds exactly is not green", () => {
    expect(ratioGreen(2 / 3)).toBe(false);
  });

  it("0.7 is green", () => {
    expect(ratioGreen(0.7)).toBe(true);
  });
});
