import { parseFen, squareName } from "./fen.js";
import { BoardView, ViewState } from "./controller.js";

const SPRITES: Record<string, string> = {
  attacker: "●", // filled disc
  defender: "○", // open disc
  king: "♚",
};

/** DOM renderer: a CSS grid with row 1 at the bottom, throne and haven
 * markings, selection and forced-move highlights. */
export class DomBoardView implements BoardView {
  constructor(
    private readonly root: HTMLElement,
    private readonly status: HTMLElement,
    private readonly onClick: (square: string) => void,
  ) {}

  render(state: ViewState): void {
    const board = parseFen(state.fen);
    this.root.innerHTML = "";
    this.root.style.gridTemplateColumns = `repeat(${board.width}, var(--cell))`;
    const highlightSet = new Set(state.highlights);
    const flashFrom = new Set(state.flashed.map((m) => m.from));
    const flashTo = new Set(state.flashed.map((m) => m.to));
    const sources = new Set(state.legal.map((m) => m.from));

    for (let row = board.height - 1; row >= 0; row -= 1) {
      for (let col = 0; col < board.width; col += 1) {
        const name = squareName(col, row);
        const cell = document.createElement("button");
        cell.className = "cell";
        cell.dataset.square = name;
        if (board.havens.has(name)) cell.classList.add("haven");
        if (board.throne === name) cell.classList.add("throne");
        if (state.selected === name) cell.classList.add("selected");
        if (highlightSet.has(name)) cell.classList.add("target");
        if (flashFrom.has(name) || flashTo.has(name)) cell.classList.add("flash");
        if (sources.has(name) && !state.terminal) cell.classList.add("movable");
        const piece = board.pieces.get(name);
        if (piece) {
          cell.classList.add(piece);
          cell.textContent = SPRITES[piece];
        }
        cell.addEventListener("click", () => this.onClick(name));
        this.root.appendChild(cell);
      }
    }

    const parts: string[] = [];
    if (state.terminal) {
      parts.push(`game over: ${state.terminal.replace("_", " ")}`);
    } else {
      parts.push(`${state.mover} to move`);
      if (state.forced) parts.push("FORCED: a capture or winning move is required");
    }
    if (state.message) parts.push(state.message);
    if (state.hint) parts.push(`hint: ${state.hint}`);
    this.status.textContent = parts.join(" — ");
    this.status.classList.toggle("forced", state.forced && !state.terminal);
  }
}
