/** Board-drawing view of a position line. Pure presentation: square
 * occupancy, throne and haven markings. Legality always comes from the API. */

export type CellPiece = "attacker" | "defender" | "king" | null;

export interface BoardSnapshot {
  width: number;
  height: number;
  pieces: Map<string, CellPiece>;
  throne: string | null;
  havens: Set<string>;
  mover: string;
  fragment: boolean;
}

const LETTERS = "abcdefghijklmnopqrstuvwxyz";

export function columnName(col: number): string {
  let name = "";
  let n = col + 1;
  while (n > 0) {
    const rem = (n - 1) % 26;
    name = LETTERS[rem] + name;
    n = Math.floor((n - 1) / 26);
  }
  return name;
}

export function squareName(col: number, row: number): string {
  return columnName(col) + String(row + 1);
}

export function parseFen(text: string): BoardSnapshot {
  const parts = text.trim().split(/\s+/);
  if (parts.length < 5) {
    throw new Error(`bad position line: ${text}`);
  }
  const [size, rowsText, mover, throneText, havensText, ...flags] = parts;
  const [w, h] = size.split("x").map(Number);
  if (!Number.isInteger(w) || !Number.isInteger(h) || w < 1 || h < 1) {
    throw new Error(`bad board size: ${size}`);
  }
  const pieces = new Map<string, CellPiece>();
  const rows = rowsText.split("/");
  rows.forEach((rowText, i) => {
    const row = h - 1 - i;
    let col = 0;
    let j = 0;
    while (j < rowText.length) {
      const ch = rowText[j];
      if (ch >= "0" && ch <= "9") {
        let k = j;
        while (k < rowText.length && rowText[k] >= "0" && rowText[k] <= "9") k += 1;
        col += Number(rowText.slice(j, k));
        j = k;
        continue;
      }
      const kind: CellPiece =
        ch === "p" ? "attacker" : ch === "P" ? "defender" : ch === "K" ? "king" : null;
      if (kind === null) throw new Error(`bad piece symbol ${ch}`);
      pieces.set(squareName(col, row), kind);
      col += 1;
      j += 1;
    }
    if (col !== w) throw new Error(`row ${i + 1} expands to ${col}, expected ${w}`);
  });
  return {
    width: w,
    height: h,
    pieces,
    throne: throneText === "-" ? null : throneText,
    havens: new Set(havensText === "-" ? [] : havensText.split(",")),
    mover: mover === "a" ? "attacker" : "defender",
    fragment: flags.includes("fragment"),
  };
}
