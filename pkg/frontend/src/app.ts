/** Application wiring: grid, formula bar, and the visualization panel.
 *
 * The panel always reflects the current selection: blank for empty or
 * literal cells, the served scene graph for formula cells. Responses for
 * a superseded selection are discarded, so rapid selection changes never
 * paint a stale graph.
 */

import { ApiClient, EditRejected } from "./api.js";
import { Grid } from "./grid.js";
import { attachPanZoom, type PanZoom } from "./panzoom.js";
import { renderScene } from "./scene.js";
import { SceneSchemaError, validateSceneGraph, type SheetState } from "./types.js";

export class App {
  readonly root: HTMLElement;
  private readonly grid: Grid;
  private readonly formulaInput: HTMLInputElement;
  private readonly diagnostic: HTMLElement;
  private readonly banner: HTMLElement;
  private readonly panel: HTMLElement;
  private readonly valueLabel: HTMLElement;

  private sessionId = "";
  private selected: string | null = null;
  private sheetState: SheetState = {};
  private selectSequence = 0;
  private selectAbort: AbortController | null = null;
  private panZoom: PanZoom | null = null;

  constructor(private readonly api: ApiClient) {
    this.root = document.createElement("div");
    this.root.className = "app";

    this.banner = document.createElement("div");
    this.banner.className = "banner hidden";
    this.root.appendChild(this.banner);

    const bar = document.createElement("div");
    bar.className = "formula-bar";
    this.valueLabel = document.createElement("span");
    this.valueLabel.className = "selected-addr";
    this.valueLabel.textContent = "–";
    bar.appendChild(this.valueLabel);
    this.formulaInput = document.createElement("input");
    this.formulaInput.className = "formula-input";
    this.formulaInput.placeholder = "Select a cell, then type a value or =formula";
    this.formulaInput.addEventListener("keydown", (event) => {
      if (event.key === "Enter" && this.selected) {
        void this.editCell(this.selected, this.formulaInput.value);
      }
      if (event.key === "Escape") {
        this.resetEditor();
      }
    });
    bar.appendChild(this.formulaInput);
    this.root.appendChild(bar);

    this.diagnostic = document.createElement("div");
    this.diagnostic.className = "diagnostic hidden";
    this.root.appendChild(this.diagnostic);

    const main = document.createElement("div");
    main.className = "layout";
    this.grid = new Grid({
      onSelect: (addr) => void this.onSelect(addr),
      onStartEdit: (addr) => {
        void this.onSelect(addr);
        this.formulaInput.focus();
      },
    });
    const gridWrap = document.createElement("div");
    gridWrap.className = "grid-wrap";
    gridWrap.appendChild(this.grid.element);
    main.appendChild(gridWrap);

    this.panel = document.createElement("div");
    this.panel.className = "viz-panel blank";
    main.appendChild(this.panel);
    this.root.appendChild(main);
  }

  async start(): Promise<void> {
    try {
      this.sessionId = await this.api.createSession();
      await this.refreshSheet();
    } catch (err) {
      this.showBanner(`could not reach the formula service (${String(err)})`);
    }
  }

  get selectedCell(): string | null {
    return this.selected;
  }

  gridElement(): Grid {
    return this.grid;
  }

  panelElement(): HTMLElement {
    return this.panel;
  }

  diagnosticElement(): HTMLElement {
    return this.diagnostic;
  }

  bannerElement(): HTMLElement {
    return this.banner;
  }

  formulaElement(): HTMLInputElement {
    return this.formulaInput;
  }

  private showBanner(message: string): void {
    this.banner.textContent = message;
    this.banner.classList.remove("hidden");
  }

  private clearBanner(): void {
    this.banner.classList.add("hidden");
    this.banner.textContent = "";
  }

  private resetEditor(): void {
    const entry = this.selected ? this.sheetState[this.selected] : undefined;
    this.formulaInput.value = entry ? entry.raw : "";
    this.hideDiagnostic();
  }

  private hideDiagnostic(): void {
    this.diagnostic.classList.add("hidden");
    this.diagnostic.textContent = "";
  }

  private showDiagnostic(raw: string, position: number, message: string): void {
    this.diagnostic.textContent = `${message}\n${raw}\n${" ".repeat(position)}^`;
    this.diagnostic.classList.remove("hidden");
  }

  async refreshSheet(): Promise<void> {
    this.sheetState = await this.api.sheetState(this.sessionId);
    this.grid.update(this.sheetState);
  }

  /** Selection drives the panel. A new selection cancels the in-flight
   * request; any response that still arrives late is dropped. */
  async onSelect(addr: string | null): Promise<void> {
    this.selected = addr;
    this.grid.select(addr);
    this.valueLabel.textContent = addr ?? "–";
    this.resetEditor();
    const ticket = ++this.selectSequence;
    this.selectAbort?.abort();
    const abort = new AbortController();
    this.selectAbort = abort;
    try {
      const payload = await this.api.select(this.sessionId, addr, abort.signal);
      if (ticket !== this.selectSequence) {
        return; // a newer selection already answered
      }
      this.clearBanner();
      if ("blank" in payload) {
        this.renderBlank();
      } else {
        this.renderGraph(payload.sceneGraph, payload.formulaText, payload.value);
      }
    } catch (err) {
      if (ticket !== this.selectSequence || (err instanceof Error && err.name === "AbortError")) {
        return; // superseded; the newer selection owns the panel
      }
      this.showBanner(`visualization unavailable (${String(err)})`);
      this.panel.classList.add("stale");
    }
  }

  private renderBlank(): void {
    this.panZoom?.dispose();
    this.panZoom = null;
    this.panel.classList.add("blank");
    this.panel.classList.remove("stale");
    this.panel.replaceChildren();
  }

  private renderGraph(doc: unknown, formulaText: string, value: string): void {
    let graph;
    try {
      graph = validateSceneGraph(doc);
    } catch (err) {
      if (err instanceof SceneSchemaError) {
        this.renderBlank();
        this.showDiagnostic(formulaText, 0, `bad scene document: ${err.message}`);
        return;
      }
      throw err;
    }
    this.panZoom?.dispose();
    this.panel.classList.remove("blank", "stale");
    const caption = document.createElement("div");
    caption.className = "viz-caption";
    caption.textContent = `${formulaText} → ${value}`;
    const svg = renderScene(graph);
    this.panel.replaceChildren(caption, svg);
    const content = svg.querySelector("g.scene-content");
    if (content instanceof SVGGElement) {
      this.panZoom = attachPanZoom(svg, content);
    }
  }

  /** Submit an edit. On a 422 the editor stays open showing the
   * caret-positioned diagnostic and the sheet is untouched. */
  async editCell(addr: string, raw: string): Promise<boolean> {
    try {
      await this.api.putCell(this.sessionId, addr, raw);
    } catch (err) {
      if (err instanceof EditRejected) {
        this.showDiagnostic(raw, err.diagnostic.position, err.diagnostic.message);
        return false;
      }
      this.showBanner(`edit failed (${String(err)})`);
      return false;
    }
    this.hideDiagnostic();
    this.clearBanner();
    await this.refreshSheet();
    if (this.selected === addr) {
      await this.onSelect(addr); // re-request the visualization
    }
    return true;
  }
}
