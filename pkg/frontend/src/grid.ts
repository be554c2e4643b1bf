/** The spreadsheet grid: columns A-Z, rows 1-100. Cells show the
 * service-provided display value only; all computation is server-side. */

import type { SheetState } from "./types.js";

export const COLUMNS = 26;
export const ROWS = 100;

export function columnLabel(index: number): string {
  return String.fromCharCode(64 + index); // 1 -> A
}

export interface GridCallbacks {
  onSelect(addr: string): void;
  onStartEdit(addr: string): void;
}

export class Grid {
  readonly element: HTMLTableElement;
  private cells = new Map<string, HTMLTableCellElement>();
  private selected: string | null = null;

  constructor(private readonly callbacks: GridCallbacks) {
    this.element = document.createElement("table");
    this.element.className = "grid";
    const header = document.createElement("tr");
    this.element.appendChild(header);
    const corner = document.createElement("th");
    corner.className = "corner";
    header.appendChild(corner);
    for (let c = 1; c <= COLUMNS; c++) {
      const th = document.createElement("th");
      th.textContent = columnLabel(c);
      header.appendChild(th);
    }
    for (let r = 1; r <= ROWS; r++) {
      const row = document.createElement("tr");
      this.element.appendChild(row);
      const th = document.createElement("th");
      th.textContent = String(r);
      row.appendChild(th);
      for (let c = 1; c <= COLUMNS; c++) {
        const addr = `${columnLabel(c)}${r}`;
        const cell = document.createElement("td");
        row.appendChild(cell);
        cell.dataset.addr = addr;
        cell.addEventListener("click", () => this.callbacks.onSelect(addr));
        cell.addEventListener("dblclick", () => this.callbacks.onStartEdit(addr));
        this.cells.set(addr, cell);
      }
    }
  }

  update(state: SheetState): void {
    for (const [addr, cell] of this.cells) {
      const entry = state[addr];
      const value = entry ? entry.displayValue : "";
      if (cell.textContent !== value) {
        cell.textContent = value;
      }
      cell.classList.toggle("error-cell", value.startsWith("#"));
    }
  }

  select(addr: string | null): void {
    if (this.selected) {
      this.cells.get(this.selected)?.classList.remove("selected");
    }
    this.selected = addr;
    if (addr) {
      this.cells.get(addr)?.classList.add("selected");
    }
  }

  cellText(addr: string): string {
    return this.cells.get(addr)?.textContent ?? "";
  }
}
