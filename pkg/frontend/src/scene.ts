/** Render a scene-graph document as SVG. Geometry is taken verbatim from
 * the document; the client never re-layouts. */

import type { SceneGraph, SceneNode } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const FILLS: Record<string, string> = {
  normal: "#f5f7fa",
  error: "#ffe3e3",
  "error-origin": "#ffa8a8",
  "inactive-branch": "#f1f3f5",
};

const STROKES: Record<string, string> = {
  normal: "#52606d",
  error: "#c92a2a",
  "error-origin": "#862e2e",
  "inactive-branch": "#ced4da",
};

export const ACCENTS = ["#1c7ed6", "#e8590c", "#2b8a3e", "#862e9c", "#0b7285", "#a61e4d"];

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  return node;
}

function shapeFor(node: SceneNode): SVGElement {
  const fill = FILLS[node.style] ?? FILLS.normal!;
  const baseStroke = STROKES[node.style] ?? STROKES.normal!;
  const accent = node.refGroup !== null ? ACCENTS[node.refGroup % ACCENTS.length]! : null;
  const stroke = accent ?? baseStroke;
  const strokeWidth = accent ? "2.5" : "1.5";
  const common = { fill, stroke, "stroke-width": strokeWidth };

  if (node.shape === "circle") {
    const r = Math.max(node.w, node.h) / 2;
    return el("circle", {
      cx: String(node.x + node.w / 2),
      cy: String(node.y + node.h / 2),
      r: String(r),
      ...common,
    });
  }
  if (node.shape === "tag") {
    const notch = Math.min(10, node.w / 4);
    const pts = [
      [node.x + notch, node.y],
      [node.x + node.w, node.y],
      [node.x + node.w, node.y + node.h],
      [node.x + notch, node.y + node.h],
      [node.x, node.y + node.h / 2],
    ];
    return el("polygon", {
      points: pts.map(([px, py]) => `${px},${py}`).join(" "),
      ...common,
    });
  }
  const rx = node.shape === "capsule" ? node.h / 2 : node.shape === "rounded-rect" ? 6 : 2;
  return el("rect", {
    x: String(node.x),
    y: String(node.y),
    width: String(node.w),
    height: String(node.h),
    rx: String(rx),
    ...common,
  });
}

function textLine(x: number, y: number, content: string, bold = false): SVGTextElement {
  const text = el("text", {
    x: String(x),
    y: String(y),
    "text-anchor": "middle",
    fill: "#1f2933",
    "font-size": "12",
  });
  if (bold) text.setAttribute("font-weight", "bold");
  text.textContent = content;
  return text;
}

function nodeGroup(node: SceneNode): SVGGElement {
  const group = el("g");
  group.setAttribute("class", `node ${node.kind} ${node.style}`);
  group.dataset.nodeId = node.id;
  if (node.refGroup !== null) {
    group.dataset.refGroup = String(node.refGroup);
  }
  if (node.style === "inactive-branch") {
    group.setAttribute("opacity", "0.45");
  }
  group.appendChild(shapeFor(node));
  const cx = node.x + node.w / 2;
  const cy = node.y + node.h / 2;
  if (node.value === "" && node.kind === "literal") {
    group.appendChild(textLine(cx, cy + 3.72, node.label));
  } else {
    group.appendChild(textLine(cx, cy - 3, node.label));
    group.appendChild(textLine(cx, cy + 10.44, node.value, true));
  }
  return group;
}

/** Build a standalone SVG element for the scene. */
export function renderScene(graph: SceneGraph): SVGSVGElement {
  const svg = el("svg", {
    viewBox: `0 0 ${graph.bounds.w} ${graph.bounds.h}`,
    width: String(graph.bounds.w),
    height: String(graph.bounds.h),
    "font-family": "ui-monospace, Menlo, Consolas, monospace",
  });
  const content = el("g");
  content.setAttribute("class", "scene-content");
  for (const edge of graph.edges) {
    const d =
      "M " + edge.points.map(([px, py]) => `${px} ${py}`).join(" L ");
    content.appendChild(
      el("path", { d, fill: "none", stroke: "#9aa5b1", "stroke-width": "1.5" }),
    );
  }
  for (const node of graph.nodes) {
    content.appendChild(nodeGroup(node));
  }
  svg.appendChild(content);
  return svg;
}
