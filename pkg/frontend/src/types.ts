/** Scene-graph document types, matching the service's JSON contract. */

export const NODE_KINDS = [
  "literal",
  "cell-ref",
  "range-ref",
  "operator",
  "function",
  "result",
] as const;

export const NODE_SHAPES = [
  "rounded-rect",
  "tag",
  "circle",
  "rect",
  "capsule",
] as const;

export const STYLE_CLASSES = [
  "normal",
  "error",
  "error-origin",
  "inactive-branch",
] as const;

export type NodeKind = (typeof NODE_KINDS)[number];
export type NodeShape = (typeof NODE_SHAPES)[number];
export type StyleClass = (typeof STYLE_CLASSES)[number];

export interface SceneNode {
  id: string;
  kind: NodeKind;
  shape: NodeShape;
  label: string;
  value: string;
  x: number;
  y: number;
  w: number;
  h: number;
  style: StyleClass;
  refGroup: number | null;
}

export interface SceneEdge {
  from: string;
  to: string;
  points: [number, number][];
}

export interface SceneGraph {
  nodes: SceneNode[];
  edges: SceneEdge[];
  bounds: { w: number; h: number };
}

export interface CellState {
  raw: string;
  displayValue: string;
}

export type SheetState = Record<string, CellState>;

export interface ParseDiagnostic {
  position: number;
  message: string;
  expected: string[];
}

export type SelectPayload =
  | { blank: true }
  | { sceneGraph: SceneGraph; formulaText: string; value: string };

export class SceneSchemaError extends Error {
  constructor(path: string, problem: string) {
    super(`${path}: ${problem}`);
    this.name = "SceneSchemaError";
  }
}

function isRecord(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function str(v: unknown, path: string): string {
  if (typeof v !== "string") throw new SceneSchemaError(path, "expected string");
  return v;
}

function member<T extends readonly string[]>(v: unknown, allowed: T, path: string): T[number] {
  const s = str(v, path);
  if (!allowed.includes(s)) {
    throw new SceneSchemaError(path, `expected one of ${allowed.join(", ")}`);
  }
  return s;
}

function num(v: unknown, path: string): number {
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new SceneSchemaError(path, "expected finite number");
  }
  return v;
}

/** Validate an untrusted scene document; throws SceneSchemaError with the
 * offending JSON path. */
export function validateSceneGraph(doc: unknown): SceneGraph {
  if (!isRecord(doc)) throw new SceneSchemaError("$", "expected an object");
  if (!Array.isArray(doc.nodes)) throw new SceneSchemaError("$.nodes", "expected an array");
  if (!Array.isArray(doc.edges)) throw new SceneSchemaError("$.edges", "expected an array");

  const ids = new Set<string>();
  const nodes: SceneNode[] = doc.nodes.map((raw, i) => {
    const path = `$.nodes[${i}]`;
    if (!isRecord(raw)) throw new SceneSchemaError(path, "expected an object");
    const id = str(raw.id, `${path}.id`);
    if (ids.has(id)) throw new SceneSchemaError(`${path}.id`, `duplicate node id ${id}`);
    ids.add(id);
    const refGroup = raw.refGroup;
    if (refGroup !== null && refGroup !== undefined && !Number.isInteger(refGroup)) {
      throw new SceneSchemaError(`${path}.refGroup`, "expected integer or null");
    }
    return {
      id,
      kind: member(raw.kind, NODE_KINDS, `${path}.kind`),
      shape: member(raw.shape, NODE_SHAPES, `${path}.shape`),
      label: str(raw.label, `${path}.label`),
      value: str(raw.value, `${path}.value`),
      x: num(raw.x, `${path}.x`),
      y: num(raw.y, `${path}.y`),
      w: num(raw.w, `${path}.w`),
      h: num(raw.h, `${path}.h`),
      style: member(raw.style, STYLE_CLASSES, `${path}.style`),
      refGroup: refGroup === undefined || refGroup === null ? null : (refGroup as number),
    };
  });

  const edges: SceneEdge[] = doc.edges.map((raw, i) => {
    const path = `$.edges[${i}]`;
    if (!isRecord(raw)) throw new SceneSchemaError(path, "expected an object");
    const from = str(raw.from, `${path}.from`);
    const to = str(raw.to, `${path}.to`);
    for (const [end, key] of [
      [from, "from"],
      [to, "to"],
    ] as const) {
      if (!ids.has(end)) throw new SceneSchemaError(`${path}.${key}`, `unknown node id ${end}`);
    }
    if (!Array.isArray(raw.points) || raw.points.length < 2) {
      throw new SceneSchemaError(`${path}.points`, "expected at least two [x, y] pairs");
    }
    const points = raw.points.map((p, j) => {
      if (!Array.isArray(p) || p.length !== 2) {
        throw new SceneSchemaError(`${path}.points[${j}]`, "expected an [x, y] pair");
      }
      return [num(p[0], `${path}.points[${j}][0]`), num(p[1], `${path}.points[${j}][1]`)] as [
        number,
        number,
      ];
    });
    return { from, to, points };
  });

  if (!isRecord(doc.bounds)) throw new SceneSchemaError("$.bounds", "expected an object");
  const bounds = {
    w: num(doc.bounds.w, "$.bounds.w"),
    h: num(doc.bounds.h, "$.bounds.h"),
  };
  return { nodes, edges, bounds };
}
