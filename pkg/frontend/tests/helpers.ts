import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { SceneGraph } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

export function loadScene(name: string): SceneGraph {
  const text = readFileSync(join(here, "fixtures", name), "utf-8");
  return JSON.parse(text) as SceneGraph;
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
