import { describe, expect, it } from "vitest";

import { attachPanZoom } from "../src/panzoom.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function setup() {
  const svg = document.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  const content = document.createElementNS(SVG_NS, "g") as SVGGElement;
  svg.appendChild(content);
  document.body.replaceChildren(svg);
  return { svg, content, panZoom: attachPanZoom(svg, content) };
}

describe("pan and zoom", () => {
  it("zooms on wheel", () => {
    const { svg, content } = setup();
    svg.dispatchEvent(new WheelEvent("wheel", { deltaY: -120, cancelable: true }));
    const transform = content.getAttribute("transform") ?? "";
    expect(transform).toContain("scale(1.15");
  });

  it("pans on pointer drag", () => {
    const { svg, content } = setup();
    svg.dispatchEvent(new PointerEvent("pointerdown", { clientX: 10, clientY: 10 }));
    svg.dispatchEvent(new PointerEvent("pointermove", { clientX: 30, clientY: 25 }));
    svg.dispatchEvent(new PointerEvent("pointerup", {}));
    expect(content.getAttribute("transform")).toContain("translate(20 15)");
    // no further movement after release
    svg.dispatchEvent(new PointerEvent("pointermove", { clientX: 90, clientY: 90 }));
    expect(content.getAttribute("transform")).toContain("translate(20 15)");
  });

  it("reset restores identity", () => {
    const { svg, content, panZoom } = setup();
    svg.dispatchEvent(new WheelEvent("wheel", { deltaY: -120, cancelable: true }));
    panZoom.reset();
    expect(content.getAttribute("transform")).toBe("translate(0 0) scale(1)");
  });

  it("dispose detaches listeners", () => {
    const { svg, content, panZoom } = setup();
    panZoom.dispose();
    svg.dispatchEvent(new WheelEvent("wheel", { deltaY: -120, cancelable: true }));
    expect(content.getAttribute("transform")).toBeNull();
  });
});
